"""Deterministic synthetic fixtures.

The bundled event logs are reconstructions of published aggregate numbers
(funnel conversion, message mix, median duration, concentration of
recordings), not real user data. They exist so analytics golden tests and
the replay CLI have stable inputs.
"""

from __future__ import annotations

import json
import math
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .audio import MonoSignal, encode_wav
from .campaign import (
    KIND_ATTEMPT_SCORED,
    KIND_INBOUND_AUDIO,
    KIND_INBOUND_TEXT,
    KIND_REGISTERED,
    Campaign,
    EngagementEvent,
    create_campaign,
    write_events,
)
from .contour import ContourVector
from .scoring import MapTranscriptionProvider, ScoringConfig, signal_digest


class _LogBuilder:
    def __init__(self, campaign_id: str, start: datetime):
        self.campaign_id = campaign_id
        self.at = start
        self.seq = 0
        self.events: list[EngagementEvent] = []

    def emit(self, user_id: str, kind: str, payload: dict | None = None):
        self.seq += 1
        self.at += timedelta(seconds=1)
        self.events.append(
            EngagementEvent(
                seq=self.seq,
                at=self.at,
                campaign_id=self.campaign_id,
                user_id=user_id,
                kind=kind,
                payload=payload or {},
            )
        )


def _synthetic_log(
    campaign_id: str,
    start: datetime,
    n_potential: int,
    n_leads: int,
    attempt_counts: list[int],
    extra_texts: int,
    durations: list[float],
    seed: int,
) -> list[EngagementEvent]:
    """Build a log with the given funnel counts.

    Users u0001..uN all open with a text message; the first n_leads register;
    the first len(attempt_counts) users submit attempt_counts[i] recordings
    each. durations must hold one entry per recording.
    """
    assert len(attempt_counts) <= n_leads <= n_potential
    assert sum(attempt_counts) == len(durations)
    rng = random.Random(seed)
    durations = list(durations)
    rng.shuffle(durations)

    users = [f"u{i:04d}" for i in range(1, n_potential + 1)]
    builder = _LogBuilder(campaign_id, start)

    for uid in users:
        builder.emit(uid, KIND_INBOUND_TEXT)
    for i in range(extra_texts):  # round-robin so small cohorts can chat a lot
        builder.emit(users[i % n_potential], KIND_INBOUND_TEXT)
    for uid in users[:n_leads]:
        builder.emit(uid, KIND_REGISTERED,
                     {"contact": {"name": uid, "email": f"{uid}@example.com"}})

    attempt_no = 0
    for uid, count in zip(users, attempt_counts):
        for _ in range(count):
            attempt_no += 1
            builder.emit(uid, KIND_INBOUND_AUDIO)
            builder.emit(
                uid,
                KIND_ATTEMPT_SCORED,
                {
                    "attempt_id": f"att-{attempt_no:06d}",
                    "duration_s": durations.pop(),
                    "combined": round(rng.uniform(0.2, 0.99), 4),
                    "keyword": None,
                    "shape": None,
                    "envelope": [],
                },
            )
    return builder.events


def _median_durations(count: int, median: float, low: float, high: float) -> list[float]:
    """Duration multiset whose lower-middle element is exactly `median`."""
    mid = (count - 1) // 2
    return [low] * mid + [median] + [high] * (count - mid - 1)


def wearedevelopers_log() -> list[EngagementEvent]:
    """430 potential leads; 71.16% / 68.60% / 64.42% funnel; 25%/75% message
    mix; 80% of recordings from the top 71 of 295 participants (24.07%)."""
    counts = [460] + [20] * 10 + [19] * 60 + [3] * 20 + [2] * 186 + [1] * 18
    assert sum(counts) == 2250 and len(counts) == 295
    durations = _median_durations(2250, 2.25, 1.5, 3.0)
    return _synthetic_log(
        campaign_id="wearedevelopers-2024",
        start=datetime(2024, 7, 17, 8, 0, 0, tzinfo=timezone.utc),
        n_potential=430,
        n_leads=306,
        attempt_counts=counts,
        extra_texts=320,  # 430 + 320 = 750 texts vs 2250 audio = 25%/75%
        durations=durations,
        seed=17,
    )


def goto_chicago_log() -> list[EngagementEvent]:
    """35 potential leads; 71.43% / 65.71% / 60.00% funnel; 13%/87% mix."""
    counts = [381, 31] + [24] * 19 + [1, 1]
    assert sum(counts) == 870 and len(counts) == 23
    durations = _median_durations(870, 3.38, 2.0, 4.0)
    return _synthetic_log(
        campaign_id="goto-chicago-2024",
        start=datetime(2024, 10, 21, 8, 0, 0, tzinfo=timezone.utc),
        n_potential=35,
        n_leads=25,
        attempt_counts=counts,
        extra_texts=95,  # 35 + 95 = 130 texts vs 870 audio = 13%/87%
        durations=durations,
        seed=21,
    )


def kulendayz_log() -> list[EngagementEvent]:
    """1257 recordings with median duration 2.05 s across 46 participants."""
    counts = [259] + [23] * 8 + [22] * 37
    assert sum(counts) == 1257 and len(counts) == 46
    durations = _median_durations(1257, 2.05, 1.0, 2.5)
    return _synthetic_log(
        campaign_id="kulendayz-2024",
        start=datetime(2024, 8, 30, 8, 0, 0, tzinfo=timezone.utc),
        n_potential=66,
        n_leads=47,
        attempt_counts=counts,
        extra_texts=66,
        durations=durations,
        seed=30,
    )


# -- demo campaign + audio fixture ------------------------------------------

DEMO_CAMPAIGN_ID = "berlin-demo"
DEMO_PHRASE = "I love Berlin"
DEMO_SAMPLE_RATE = 16000
DEMO_DURATION_S = 2.5


def demo_contour() -> ContourVector:
    """Synthetic skyline-ish profile: a few flat-topped towers."""
    heights = []
    towers = [10, 22, 16, 30, 24, 12, 18, 8]
    for h in towers:
        heights.extend([float(h)] * 5)
    return ContourVector(bins=tuple(heights), label="demo skyline")


def demo_campaign(shape_algorithm: str = "cosine") -> Campaign:
    return create_campaign(
        campaign_id=DEMO_CAMPAIGN_ID,
        catch_phrase=DEMO_PHRASE,
        contour=demo_contour(),
        scoring=ScoringConfig(shape_algorithm=shape_algorithm),
        starts_at=datetime(2024, 1, 1, tzinfo=timezone.utc),
        ends_at=datetime(2099, 1, 1, tzinfo=timezone.utc),
    )


def demo_wav() -> bytes:
    """A 2.5 s tone whose per-segment amplitude follows the demo contour."""
    contour = demo_contour()
    total = int(DEMO_SAMPLE_RATE * DEMO_DURATION_S)
    n_bins = len(contour.bins)
    peak = max(contour.bins)
    t = np.arange(total) / DEMO_SAMPLE_RATE
    carrier = np.sin(2 * math.pi * 440.0 * t)
    amp = np.empty(total)
    for k in range(n_bins):
        lo = (k * total) // n_bins
        hi = ((k + 1) * total) // n_bins
        amp[lo:hi] = 0.9 * contour.bins[k] / peak
    return encode_wav(MonoSignal(samples=amp * carrier, sample_rate=DEMO_SAMPLE_RATE))


def demo_transcript_map() -> dict:
    from .audio import decode_audio

    digest = signal_digest(decode_audio(demo_wav()))
    return {"transcripts": {digest: DEMO_PHRASE}}


def demo_transcriber() -> MapTranscriptionProvider:
    return MapTranscriptionProvider.from_json(json.dumps(demo_transcript_map()))


def demo_skyline_pgm(width: int = 200, height: int = 60) -> bytes:
    """PGM P5 skyline silhouette matching demo_contour's tower heights."""
    contour = demo_contour()
    img = np.full((height, width), 255, dtype=np.uint8)
    n_bins = len(contour.bins)
    for k, h in enumerate(contour.bins):
        lo = (k * width) // n_bins
        hi = ((k + 1) * width) // n_bins
        top = height - int(h * height / 40)
        img[max(top, 0):, lo:hi] = 0
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + img.tobytes()


def write_all(target: Path | str) -> list[Path]:
    """Write every bundled fixture into `target`; returns the written paths."""
    target = Path(target)
    target.mkdir(parents=True, exist_ok=True)
    written = []

    for name, events in [
        ("wearedevelopers-2024.jsonl", wearedevelopers_log()),
        ("goto-chicago-2024.jsonl", goto_chicago_log()),
        ("kulendayz-2024.jsonl", kulendayz_log()),
    ]:
        path = target / name
        write_events(events, path)
        written.append(path)

    campaign_path = target / "berlin-demo.campaign.json"
    campaign_path.write_text(
        json.dumps(demo_campaign().to_dict(), sort_keys=True, indent=2),
        encoding="utf-8",
    )
    written.append(campaign_path)

    wav_path = target / "berlin-demo.wav"
    wav_path.write_bytes(demo_wav())
    written.append(wav_path)

    transcripts_path = target / "berlin-demo.transcripts.json"
    transcripts_path.write_text(
        json.dumps(demo_transcript_map(), sort_keys=True, indent=2), encoding="utf-8"
    )
    written.append(transcripts_path)

    pgm_path = target / "berlin-demo.skyline.pgm"
    pgm_path.write_bytes(demo_skyline_pgm())
    written.append(pgm_path)

    return written
