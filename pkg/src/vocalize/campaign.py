"""Campaign lifecycle, lead funnel, attempts, leaderboard, and the
append-only engagement event log.

All mutations go through the event log: a mutating operation validates its
preconditions, appends one or more events, and folds them into state with the
same apply function that replay uses. Replaying a log therefore reconstructs
the exact live state.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from . import audio as audio_mod
from . import scoring as scoring_mod
from .contour import ContourVector
from .errors import (
    CampaignClosed,
    CorruptLog,
    InvalidContour,
    InvalidSchedule,
    NotRegistered,
    ProviderFailure,
    RecordingRejected,
    TranscriptionUnavailable,
    UnknownCampaign,
    UnknownUser,
    VocalizeError,
)
from .scoring import KeywordScore, ScoringConfig, ShapeScore

FUNNEL_STATES = ("potential_lead", "lead", "participant", "recurring_participant")

KIND_INBOUND_TEXT = "inbound_text"
KIND_INBOUND_AUDIO = "inbound_audio"
KIND_REGISTERED = "registered"
KIND_ATTEMPT_SCORED = "attempt_scored"
KIND_OUTBOUND = "outbound_message"

EVENT_KINDS = (
    KIND_INBOUND_TEXT,
    KIND_INBOUND_AUDIO,
    KIND_REGISTERED,
    KIND_ATTEMPT_SCORED,
    KIND_OUTBOUND,
)


def _funnel_rank(state: str) -> int:
    return FUNNEL_STATES.index(state)


def format_ts(dt: datetime) -> str:
    """RFC 3339 UTC with trailing Z."""
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_ts(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00")).astimezone(timezone.utc)


@dataclass(frozen=True)
class EngagementEvent:
    seq: int
    at: datetime
    campaign_id: str
    user_id: str
    kind: str
    payload: dict

    def to_line(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "at": format_ts(self.at),
                "campaign_id": self.campaign_id,
                "user_id": self.user_id,
                "kind": self.kind,
                "payload": self.payload,
            },
            sort_keys=True,
        )

    @classmethod
    def from_line(cls, line: str) -> "EngagementEvent":
        try:
            obj = json.loads(line)
            kind = obj["kind"]
            if kind not in EVENT_KINDS:
                raise CorruptLog(f"unknown event kind {kind!r}")
            return cls(
                seq=int(obj["seq"]),
                at=parse_ts(obj["at"]),
                campaign_id=str(obj["campaign_id"]),
                user_id=str(obj["user_id"]),
                kind=kind,
                payload=dict(obj.get("payload", {})),
            )
        except CorruptLog:
            raise
        except (KeyError, ValueError, TypeError) as exc:
            raise CorruptLog(f"invalid event line: {exc}") from exc


@dataclass(frozen=True)
class Campaign:
    id: str
    catch_phrase: str
    contour: ContourVector
    scoring: ScoringConfig
    starts_at: datetime
    ends_at: datetime
    min_s: float = audio_mod.DEFAULT_MIN_S
    max_s: float = audio_mod.DEFAULT_MAX_S

    def is_active(self, at: datetime) -> bool:
        return self.starts_at <= at <= self.ends_at

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "catch_phrase": self.catch_phrase,
            "contour": {"bins": list(self.contour.bins), "label": self.contour.label},
            "scoring": self.scoring.to_dict(),
            "starts_at": format_ts(self.starts_at),
            "ends_at": format_ts(self.ends_at),
            "min_s": self.min_s,
            "max_s": self.max_s,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Campaign":
        return create_campaign(
            campaign_id=obj["id"],
            catch_phrase=obj["catch_phrase"],
            contour=ContourVector(
                bins=tuple(obj["contour"]["bins"]),
                label=obj["contour"].get("label", ""),
            ),
            scoring=ScoringConfig.from_dict(obj.get("scoring", {})),
            starts_at=parse_ts(obj["starts_at"]),
            ends_at=parse_ts(obj["ends_at"]),
            min_s=float(obj.get("min_s", audio_mod.DEFAULT_MIN_S)),
            max_s=float(obj.get("max_s", audio_mod.DEFAULT_MAX_S)),
        )


def create_campaign(
    campaign_id: str,
    catch_phrase: str,
    contour: ContourVector,
    scoring: ScoringConfig,
    starts_at: datetime,
    ends_at: datetime,
    min_s: float = audio_mod.DEFAULT_MIN_S,
    max_s: float = audio_mod.DEFAULT_MAX_S,
) -> Campaign:
    if not scoring_mod.normalize_text(catch_phrase):
        raise InvalidSchedule("catch phrase must be nonempty after normalization")
    if ends_at <= starts_at:
        raise InvalidSchedule("ends_at must be after starts_at")
    if not (0 < min_s < max_s):
        raise InvalidSchedule("recording bounds must satisfy 0 < min_s < max_s")
    if not isinstance(contour, ContourVector):
        raise InvalidContour("contour must be a validated ContourVector")
    return Campaign(
        id=campaign_id,
        catch_phrase=catch_phrase,
        contour=contour,
        scoring=scoring,
        starts_at=starts_at,
        ends_at=ends_at,
        min_s=min_s,
        max_s=max_s,
    )


@dataclass
class UserRecord:
    user_id: str
    funnel_state: str = "potential_lead"
    contact: dict | None = None
    first_seen: datetime | None = None
    registered_at: datetime | None = None
    attempt_count: int = 0

    def advance(self, state: str):
        if _funnel_rank(state) > _funnel_rank(self.funnel_state):
            self.funnel_state = state


@dataclass(frozen=True)
class Attempt:
    attempt_id: str
    user_id: str
    campaign_id: str
    submitted_at: datetime
    duration_s: float
    keyword: KeywordScore | None
    shape: ShapeScore | None
    combined: float
    envelope: tuple


@dataclass(frozen=True)
class LeaderboardEntry:
    rank: int
    user_id: str
    best_score: float
    best_at: datetime
    attempt_count: int

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "user_id": self.user_id,
            "best_score": self.best_score,
            "best_at": format_ts(self.best_at),
            "attempt_count": self.attempt_count,
        }


@dataclass(frozen=True)
class AttemptResult:
    combined: float
    rank: int
    attempt_count: int
    gap_to_next: float | None
    best_score: float
    keyword_value: float | None
    shape_value: float | None
    envelope: tuple
    duration_s: float

    def to_dict(self) -> dict:
        return {
            "combined": self.combined,
            "rank": self.rank,
            "attempt_count": self.attempt_count,
            "gap_to_next": self.gap_to_next,
            "best_score": self.best_score,
            "keyword_value": self.keyword_value,
            "shape_value": self.shape_value,
            "envelope": list(self.envelope),
            "duration_s": self.duration_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class UserStats:
    funnel_state: str
    attempt_count: int
    best_score: float | None
    rank: int | None
    gap_to_next: float | None

    def to_dict(self) -> dict:
        return {
            "funnel_state": self.funnel_state,
            "attempt_count": self.attempt_count,
            "best_score": self.best_score,
            "rank": self.rank,
            "gap_to_next": self.gap_to_next,
        }


class CampaignState:
    """Live state of one campaign, derived exclusively from its event log.

    Mutations take the per-campaign writer lock; reads operate on plain
    attribute snapshots and may run concurrently.
    """

    def __init__(self, campaign: Campaign, log_path: Path | None = None):
        self.campaign = campaign
        self.users: dict[str, UserRecord] = {}
        self.attempts: list[Attempt] = []
        self.events: list[EngagementEvent] = []
        self._log_path = log_path
        self._lock = threading.Lock()

    # -- event plumbing ----------------------------------------------------

    def _next_seq(self) -> int:
        return self.events[-1].seq + 1 if self.events else 1

    def _append(self, at: datetime, user_id: str, kind: str, payload: dict) -> EngagementEvent:
        event = EngagementEvent(
            seq=self._next_seq(),
            at=at,
            campaign_id=self.campaign.id,
            user_id=user_id,
            kind=kind,
            payload=payload,
        )
        if self._log_path is not None:
            with open(self._log_path, "a", encoding="utf-8") as fh:
                fh.write(event.to_line() + "\n")
        self._apply(event)
        return event

    def _apply(self, event: EngagementEvent):
        self.events.append(event)
        kind = event.kind
        if kind in (KIND_INBOUND_TEXT, KIND_INBOUND_AUDIO):
            if event.user_id not in self.users:
                self.users[event.user_id] = UserRecord(
                    user_id=event.user_id, first_seen=event.at
                )
        elif kind == KIND_REGISTERED:
            user = self.users.get(event.user_id)
            if user is None:
                user = UserRecord(user_id=event.user_id, first_seen=event.at)
                self.users[event.user_id] = user
            user.contact = dict(event.payload.get("contact", {}))
            user.registered_at = event.at
            user.advance("lead")
        elif kind == KIND_ATTEMPT_SCORED:
            user = self.users.get(event.user_id)
            if user is None:
                raise CorruptLog(f"attempt for unknown user {event.user_id!r}")
            p = event.payload
            keyword = None
            if p.get("keyword") is not None:
                k = p["keyword"]
                keyword = KeywordScore(
                    value=float(k["value"]),
                    distance=int(k["distance"]),
                    longer_len=int(k["longer_len"]),
                    normalized_transcript=k.get("transcript", ""),
                    normalized_target=k.get("target", ""),
                )
            shape = None
            if p.get("shape") is not None:
                s = p["shape"]
                shape = ShapeScore(value=float(s["value"]), algorithm=s["algorithm"])
            attempt = Attempt(
                attempt_id=p["attempt_id"],
                user_id=event.user_id,
                campaign_id=event.campaign_id,
                submitted_at=event.at,
                duration_s=float(p["duration_s"]),
                keyword=keyword,
                shape=shape,
                combined=float(p["combined"]),
                envelope=tuple(p.get("envelope", ())),
            )
            self.attempts.append(attempt)
            user.attempt_count += 1
            user.advance("participant" if user.attempt_count == 1 else "recurring_participant")

    # -- mutating operations -----------------------------------------------

    def record_inbound(self, user_id: str, kind: str, at: datetime) -> UserRecord:
        if kind not in (KIND_INBOUND_TEXT, KIND_INBOUND_AUDIO):
            raise ValueError(f"inbound kind must be inbound_text or inbound_audio, got {kind!r}")
        with self._lock:
            if not self.campaign.is_active(at):
                raise CampaignClosed(f"campaign {self.campaign.id} not active at {format_ts(at)}")
            self._append(at, user_id, kind, {})
            return self.users[user_id]

    def register_user(self, user_id: str, contact: dict, at: datetime | None = None) -> UserRecord:
        at = at or datetime.now(timezone.utc)
        with self._lock:
            user = self.users.get(user_id)
            if user is None:
                raise UnknownUser(f"no record of user {user_id!r}")
            if _funnel_rank(user.funnel_state) >= _funnel_rank("lead"):
                return user  # idempotent: already registered
            self._append(at, user_id, KIND_REGISTERED, {"contact": dict(contact)})
            return self.users[user_id]

    def submit_attempt(
        self,
        user_id: str,
        wav_bytes: bytes,
        at: datetime | None = None,
        transcriber=None,
    ) -> AttemptResult:
        at = at or datetime.now(timezone.utc)
        cfg = self.campaign.scoring
        with self._lock:
            user = self.users.get(user_id)
            if user is None or _funnel_rank(user.funnel_state) < _funnel_rank("lead"):
                raise NotRegistered(f"user {user_id!r} must register before competing")
            if not self.campaign.is_active(at):
                raise CampaignClosed(f"campaign {self.campaign.id} not active at {format_ts(at)}")

            signal = audio_mod.decode_audio(wav_bytes)
            check = audio_mod.validate_recording(signal, self.campaign.min_s, self.campaign.max_s)
            if not check.accepted:
                raise RecordingRejected(check.reason)
            envelope = audio_mod.compute_envelope(signal)

            keyword = None
            if cfg.keyword_enabled:
                if transcriber is None:
                    raise TranscriptionUnavailable("keyword scoring enabled but no transcriber configured")
                try:
                    transcript = transcriber.transcribe(signal)
                except ProviderFailure as exc:
                    raise TranscriptionUnavailable(str(exc)) from exc
                keyword = scoring_mod.keyword_score(transcript, self.campaign.catch_phrase)

            shape = None
            if cfg.shape_enabled:
                shape = scoring_mod.shape_score(
                    envelope.bins, self.campaign.contour.bins, cfg.shape_algorithm
                )

            combined = scoring_mod.combined_score(keyword, shape, cfg)

            payload = {
                "attempt_id": f"att-{len(self.attempts) + 1:06d}",
                "duration_s": signal.duration_s,
                "combined": combined,
                "keyword": None
                if keyword is None
                else {
                    "value": keyword.value,
                    "distance": keyword.distance,
                    "longer_len": keyword.longer_len,
                    "transcript": keyword.normalized_transcript,
                    "target": keyword.normalized_target,
                },
                "shape": None
                if shape is None
                else {"value": shape.value, "algorithm": shape.algorithm},
                "envelope": list(envelope.bins),
            }
            self._append(at, user_id, KIND_ATTEMPT_SCORED, payload)

            board = self._leaderboard_unlocked()
            entry = next(e for e in board if e.user_id == user_id)
            gap = None
            if entry.rank > 1:
                gap = board[entry.rank - 2].best_score - entry.best_score
            return AttemptResult(
                combined=combined,
                rank=entry.rank,
                attempt_count=self.users[user_id].attempt_count,
                gap_to_next=gap,
                best_score=entry.best_score,
                keyword_value=None if keyword is None else keyword.value,
                shape_value=None if shape is None else shape.value,
                envelope=envelope.bins,
                duration_s=signal.duration_s,
            )

    def record_outbound(self, user_id: str, text: str, at: datetime | None = None):
        at = at or datetime.now(timezone.utc)
        with self._lock:
            self._append(at, user_id, KIND_OUTBOUND, {"text": text})

    # -- queries ------------------------------------------------------------

    def _leaderboard_unlocked(self) -> list[LeaderboardEntry]:
        best: dict[str, Attempt] = {}
        for attempt in self.attempts:
            cur = best.get(attempt.user_id)
            if cur is None or attempt.combined > cur.combined:
                best[attempt.user_id] = attempt
        ordered = sorted(
            best.values(),
            key=lambda a: (-a.combined, a.submitted_at, a.user_id),
        )
        return [
            LeaderboardEntry(
                rank=i + 1,
                user_id=a.user_id,
                best_score=a.combined,
                best_at=a.submitted_at,
                attempt_count=self.users[a.user_id].attempt_count,
            )
            for i, a in enumerate(ordered)
        ]

    def leaderboard(self, top_k: int | None = None) -> list[LeaderboardEntry]:
        board = self._leaderboard_unlocked()
        return board if top_k is None else board[:top_k]

    def leaderboard_json(self, top_k: int | None = None) -> str:
        return json.dumps([e.to_dict() for e in self.leaderboard(top_k)], sort_keys=True)

    def user_stats(self, user_id: str) -> UserStats:
        user = self.users.get(user_id)
        if user is None:
            raise UnknownUser(f"no record of user {user_id!r}")
        board = self._leaderboard_unlocked()
        entry = next((e for e in board if e.user_id == user_id), None)
        if entry is None:
            return UserStats(user.funnel_state, user.attempt_count, None, None, None)
        gap = None
        if entry.rank > 1:
            gap = board[entry.rank - 2].best_score - entry.best_score
        return UserStats(
            funnel_state=user.funnel_state,
            attempt_count=user.attempt_count,
            best_score=entry.best_score,
            rank=entry.rank,
            gap_to_next=gap,
        )


def replay(events: Iterable[EngagementEvent], campaign: Campaign) -> CampaignState:
    """Fold a seq-ordered event log back into campaign state."""
    state = CampaignState(campaign)
    expected = None
    for event in events:
        if expected is not None and event.seq != expected:
            raise CorruptLog(f"sequence gap: expected {expected}, got {event.seq}")
        expected = event.seq + 1
        state._apply(event)
    return state


def read_events(source: Path | str | Iterable[str]) -> list[EngagementEvent]:
    """Load events from a JSON-lines file path or an iterable of lines."""
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = list(source)
    events = [EngagementEvent.from_line(line) for line in lines if line.strip()]
    prev = None
    for event in events:
        if prev is not None and event.seq <= prev:
            raise CorruptLog(f"non-increasing seq {event.seq} after {prev}")
        prev = event.seq
    return events


def write_events(events: Sequence[EngagementEvent], path: Path | str):
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_line() + "\n")


class CampaignStore:
    """File-backed collection of campaigns: one definition JSON plus one
    JSON-lines event log per campaign under the data directory."""

    def __init__(self, data_dir: Path | str):
        self.data_dir = Path(data_dir)
        (self.data_dir / "campaigns").mkdir(parents=True, exist_ok=True)
        (self.data_dir / "logs").mkdir(parents=True, exist_ok=True)
        self._states: dict[str, CampaignState] = {}
        self._load_existing()

    def _campaign_path(self, campaign_id: str) -> Path:
        return self.data_dir / "campaigns" / f"{campaign_id}.json"

    def log_path(self, campaign_id: str) -> Path:
        return self.data_dir / "logs" / f"{campaign_id}.jsonl"

    def _load_existing(self):
        for path in sorted((self.data_dir / "campaigns").glob("*.json")):
            campaign = Campaign.from_dict(json.loads(path.read_text(encoding="utf-8")))
            log = self.log_path(campaign.id)
            state = CampaignState(campaign, log_path=log)
            if log.exists():
                for event in read_events(log):
                    state._apply(event)
            self._states[campaign.id] = state

    def create(self, campaign: Campaign) -> CampaignState:
        self._campaign_path(campaign.id).write_text(
            json.dumps(campaign.to_dict(), sort_keys=True, indent=2), encoding="utf-8"
        )
        state = CampaignState(campaign, log_path=self.log_path(campaign.id))
        self._states[campaign.id] = state
        return state

    def get(self, campaign_id: str) -> CampaignState:
        state = self._states.get(campaign_id)
        if state is None:
            raise UnknownCampaign(f"no campaign {campaign_id!r}")
        return state

    def ids(self) -> list[str]:
        return sorted(self._states)
