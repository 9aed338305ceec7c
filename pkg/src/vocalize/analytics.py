"""Engagement analytics over an event log: lead-funnel progression, inbound
message mix, recording duration statistics, and the cumulative concentration
of recordings across participants."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Sequence

from .campaign import (
    KIND_ATTEMPT_SCORED,
    KIND_INBOUND_AUDIO,
    KIND_INBOUND_TEXT,
    KIND_REGISTERED,
    EngagementEvent,
)
from .errors import NoAttempts, NoMessages


@dataclass(frozen=True)
class FunnelReport:
    potential_leads: int
    leads_pct: float
    participants_pct: float
    recurring_pct: float
    text_share: float
    audio_share: float

    def to_dict(self) -> dict:
        return {
            "potential_leads": self.potential_leads,
            "leads_pct": self.leads_pct,
            "participants_pct": self.participants_pct,
            "recurring_pct": self.recurring_pct,
            "text_share": self.text_share,
            "audio_share": self.audio_share,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("metric,value\n")
        for key, value in self.to_dict().items():
            buf.write(f"{key},{value}\n")
        return buf.getvalue()


@dataclass(frozen=True)
class ConcentrationCurve:
    points: tuple  # (participant_fraction, message_fraction) pairs

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("participant_fraction,message_fraction\n")
        for pf, mf in self.points:
            buf.write(f"{pf},{mf}\n")
        return buf.getvalue()


def _per_user_counts(events: Sequence[EngagementEvent]):
    """Terminal funnel tallies derived directly from the raw log."""
    seen: set[str] = set()
    registered: set[str] = set()
    attempts: dict[str, int] = {}
    for event in events:
        if event.kind in (KIND_INBOUND_TEXT, KIND_INBOUND_AUDIO, KIND_REGISTERED,
                          KIND_ATTEMPT_SCORED):
            seen.add(event.user_id)
        if event.kind == KIND_REGISTERED:
            registered.add(event.user_id)
        if event.kind == KIND_ATTEMPT_SCORED:
            attempts[event.user_id] = attempts.get(event.user_id, 0) + 1
    return seen, registered, attempts


def funnel_report(events: Sequence[EngagementEvent]) -> FunnelReport:
    """Funnel percentages relative to potential leads, rounded to 2 decimals."""
    seen, registered, attempts = _per_user_counts(events)
    potential = len(seen)
    leads = len(registered | set(attempts))
    participants = len(attempts)
    recurring = sum(1 for n in attempts.values() if n >= 2)

    def pct(n: int) -> float:
        return round(100.0 * n / potential, 2) if potential else 0.0

    text = sum(1 for e in events if e.kind == KIND_INBOUND_TEXT)
    audio = sum(1 for e in events if e.kind == KIND_INBOUND_AUDIO)
    total_msgs = text + audio
    return FunnelReport(
        potential_leads=potential,
        leads_pct=pct(leads),
        participants_pct=pct(participants),
        recurring_pct=pct(recurring),
        text_share=round(100.0 * text / total_msgs, 2) if total_msgs else 0.0,
        audio_share=round(100.0 * audio / total_msgs, 2) if total_msgs else 0.0,
    )


def message_mix(events: Sequence[EngagementEvent]) -> tuple[float, float]:
    text = sum(1 for e in events if e.kind == KIND_INBOUND_TEXT)
    audio = sum(1 for e in events if e.kind == KIND_INBOUND_AUDIO)
    total = text + audio
    if total == 0:
        raise NoMessages("log contains no inbound messages")
    return round(100.0 * text / total, 2), round(100.0 * audio / total, 2)


def duration_stats(events: Sequence[EngagementEvent]) -> tuple[float, float, int]:
    """(total seconds, median seconds, count); median is the lower-middle
    element for even counts."""
    durations = sorted(
        float(e.payload["duration_s"])
        for e in events
        if e.kind == KIND_ATTEMPT_SCORED
    )
    if not durations:
        raise NoAttempts("log contains no scored attempts")
    median = durations[(len(durations) - 1) // 2]
    return sum(durations), median, len(durations)


def _recording_counts(events: Sequence[EngagementEvent]) -> list[int]:
    """Per-participant recording counts, heaviest first (ties by user_id)."""
    counts: dict[str, int] = {}
    for event in events:
        if event.kind == KIND_ATTEMPT_SCORED:
            counts[event.user_id] = counts.get(event.user_id, 0) + 1
    return [n for _, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))]


def concentration(events: Sequence[EngagementEvent], message_share: float) -> float:
    """Smallest participant fraction k/n whose recordings reach the given
    share of all recordings, participants ordered by recording count."""
    if not (0 < message_share <= 1):
        raise ValueError("message_share must be in (0, 1]")
    counts = _recording_counts(events)
    if not counts:
        raise NoAttempts("log contains no scored attempts")
    total = sum(counts)
    running = 0
    for k, n in enumerate(counts, start=1):
        running += n
        if running >= message_share * total:
            return k / len(counts)
    return 1.0


def concentration_curve(events: Sequence[EngagementEvent]) -> ConcentrationCurve:
    """Cumulative (participant_fraction, message_fraction) pairs from (0,0)
    to (1,1), heaviest contributors first."""
    counts = _recording_counts(events)
    if not counts:
        raise NoAttempts("log contains no scored attempts")
    total = sum(counts)
    points = [(0.0, 0.0)]
    running = 0
    for k, n in enumerate(counts, start=1):
        running += n
        points.append((k / len(counts), running / total))
    return ConcentrationCurve(points=tuple(points))
