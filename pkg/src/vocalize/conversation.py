"""Dialog state machine, embedding-based intent routing, and feedback
rendering, with deterministic offline fallbacks for both providers."""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Protocol

from . import scoring as scoring_mod
from .campaign import CampaignState, format_ts
from .errors import (
    ProviderFailure,
    RecordingRejected,
    TranscriptionUnavailable,
    VocalizeError,
)

PHASES = ("greeting", "rules_explained", "collecting_contact", "competing")

INTENT_NAMES = (
    "ask_score",
    "ask_rank",
    "ask_rules",
    "ask_prizes",
    "ask_deadline",
    "register",
    "unknown",
)

DEFAULT_EXEMPLARS = {
    "ask_score": [
        "what is my score",
        "what was my last score",
        "how many points did i get",
    ],
    "ask_rank": [
        "what is my rank",
        "what is my position on the leaderboard",
        "where am i on the leaderboard",
        "whats my ranking",
    ],
    "ask_rules": [
        "how do i play",
        "what are the rules",
        "explain the game",
    ],
    "ask_prizes": [
        "what can i win",
        "what are the prizes",
        "is there a reward",
    ],
    "ask_deadline": [
        "when does the competition close",
        "when does it end",
        "how long do i have",
        "what is the deadline",
    ],
    "register": [
        "i want to register",
        "sign me up",
        "i want to join the competition",
    ],
}

DEFAULT_THRESHOLD = 0.3
EMBEDDING_DIM = 256

PERSONA_INSTRUCTIONS = (
    "Respond in an engaging, fun and gamified way. Encourage the participant, "
    "give hints and tips, and tell them how to compete and possibly win."
)


@dataclass(frozen=True)
class Intent:
    name: str
    confidence: float


@dataclass
class DialogSession:
    user_id: str
    campaign_id: str
    phase: str = "greeting"
    last_activity: datetime | None = None
    pending_name: str | None = None

    def advance(self, phase: str):
        # phases only move forward
        if PHASES.index(phase) > PHASES.index(self.phase):
            self.phase = phase


class EmbeddingProvider(Protocol):
    dim: int

    def embed(self, text: str) -> list[float]: ...


class TrigramEmbedding:
    """Deterministic fallback: hashed character-trigram counts, L2-normalized."""

    dim = EMBEDDING_DIM

    def embed(self, text: str) -> list[float]:
        norm = scoring_mod.normalize_text(text)
        padded = f"  {norm} "
        vec = [0.0] * self.dim
        for i in range(len(padded) - 2):
            tri = padded[i:i + 3]
            vec[zlib.crc32(tri.encode("utf-8")) % self.dim] += 1.0
        length = math.sqrt(sum(v * v for v in vec))
        if length > 0:
            vec = [v / length for v in vec]
        return vec


class ResponseProvider(Protocol):
    def render(self, intent: str, metadata: dict, persona: str) -> str: ...


def _format_number(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


class TemplateResponseProvider:
    """Deterministic renderer; every metadata value appears verbatim."""

    def render(self, intent: str, metadata: dict, persona: str = "") -> str:
        rank = metadata.get("rank")
        gap = metadata.get("gap_to_next")
        if rank == 1:
            lead = "You're in the lead, amazing!"
        elif gap is not None:
            lead = f"So close! You're only {_format_number(gap)} behind the next spot."
        else:
            lead = "Nice one, keep those recordings coming!"
        facts = ", ".join(
            f"{key}: {_format_number(value)}"
            for key, value in metadata.items()
            if value is not None
        )
        return f"{lead} ({facts})" if facts else lead


class IntentClassifier:
    """Cosine-similarity intent matching against configured exemplar phrases."""

    def __init__(
        self,
        exemplars: dict[str, list[str]] | None = None,
        provider: EmbeddingProvider | None = None,
        threshold: float = DEFAULT_THRESHOLD,
    ):
        self.exemplars = exemplars or DEFAULT_EXEMPLARS
        self.provider = provider or TrigramEmbedding()
        self.fallback = TrigramEmbedding()
        self.threshold = threshold
        try:
            self._index = self._build_index(self.provider)
        except Exception:
            self.provider = self.fallback
            self._index = self._build_index(self.fallback)
        self._fallback_index = (
            None if self.provider is self.fallback else self._build_index(self.fallback)
        )

    def _build_index(self, provider) -> list[tuple[str, list[float]]]:
        return [
            (name, provider.embed(phrase))
            for name, phrases in self.exemplars.items()
            for phrase in phrases
        ]

    @staticmethod
    def _cosine(a: list[float], b: list[float]) -> float:
        dot = sum(x * y for x, y in zip(a, b))
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(y * y for y in b))
        return dot / (na * nb) if na > 0 and nb > 0 else 0.0

    def classify(self, message: str) -> Intent:
        try:
            query = self.provider.embed(message)
            index = self._index
        except Exception:
            query = self.fallback.embed(message)
            index = self._fallback_index or self._index
        best_name, best_sim = "unknown", 0.0
        for name, vec in index:
            sim = self._cosine(query, vec)
            if sim > best_sim:
                best_name, best_sim = name, sim
        if best_sim < self.threshold:
            return Intent("unknown", best_sim)
        return Intent(best_name, best_sim)

    @classmethod
    def from_json(cls, data: bytes | str, **kwargs) -> "IntentClassifier":
        return cls(exemplars=json.loads(data), **kwargs)


def classify_intent(
    message: str,
    provider: EmbeddingProvider | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    exemplars: dict[str, list[str]] | None = None,
) -> Intent:
    return IntentClassifier(exemplars, provider, threshold).classify(message)


def render_feedback(intent: str, metadata: dict,
                    provider: ResponseProvider | None = None,
                    persona: str = PERSONA_INSTRUCTIONS) -> str:
    template = TemplateResponseProvider()
    if provider is None:
        return template.render(intent, metadata, persona)
    try:
        return provider.render(intent, metadata, persona)
    except Exception:
        return template.render(intent, metadata, persona)


class ConversationEngine:
    """Routes inbound messages for one campaign through the dialog phases."""

    def __init__(
        self,
        state: CampaignState,
        classifier: IntentClassifier | None = None,
        responder: ResponseProvider | None = None,
        transcriber=None,
    ):
        self.state = state
        self.classifier = classifier or IntentClassifier()
        self.responder = responder
        self.transcriber = transcriber
        self.sessions: dict[str, DialogSession] = {}

    def _session(self, user_id: str) -> DialogSession:
        session = self.sessions.get(user_id)
        if session is None:
            session = DialogSession(user_id=user_id, campaign_id=self.state.campaign.id)
            user = self.state.users.get(user_id)
            if user is not None and user.funnel_state != "potential_lead":
                # already registered before this process started; skip onboarding
                session.phase = "competing"
            self.sessions[user_id] = session
        return session

    def _rules_text(self) -> str:
        c = self.state.campaign
        return (
            f'Welcome to the "{c.catch_phrase}" voice challenge! Record a voice '
            f"message repeating the catch phrase \"{c.catch_phrase}\" and try to "
            f"make your waveform match the target shape. Best score wins. "
            f"Recordings must be {c.min_s:g}-{c.max_s:g} seconds long."
        )

    def handle_text(self, user_id: str, text: str,
                    at: datetime | None = None) -> list[str]:
        at = at or datetime.now(timezone.utc)
        session = self._session(user_id)
        session.last_activity = at
        self.state.record_inbound(user_id, "inbound_text", at)

        if session.phase == "greeting":
            session.advance("rules_explained")
            return [self._rules_text(),
                    "Ready to play? Reply with anything and I'll sign you up."]

        if session.phase == "rules_explained":
            session.advance("collecting_contact")
            return ["Great! First, what's your name?"]

        if session.phase == "collecting_contact":
            if session.pending_name is None:
                session.pending_name = text.strip()
                return [f"Thanks {session.pending_name}! And your email address?"]
            contact = {"name": session.pending_name, "email": text.strip()}
            self.state.register_user(user_id, contact, at)
            session.advance("competing")
            return [
                "You're registered! Send me a voice message repeating the catch "
                f'phrase "{self.state.campaign.catch_phrase}" to enter the leaderboard.'
            ]

        return self._handle_competing_text(session, user_id, text)

    def _handle_competing_text(self, session: DialogSession, user_id: str,
                               text: str) -> list[str]:
        intent = self.classifier.classify(text)
        try:
            if intent.name in ("ask_score", "ask_rank"):
                stats = self.state.user_stats(user_id)
                meta = {k: v for k, v in stats.to_dict().items() if v is not None}
                return [render_feedback(intent.name, meta, self.responder)]
            if intent.name == "ask_rules":
                return [self._rules_text()]
            if intent.name == "ask_prizes":
                return ["Top of the leaderboard when the campaign closes takes the prize!"]
            if intent.name == "ask_deadline":
                return [f"The competition closes at {format_ts(self.state.campaign.ends_at)}."]
            if intent.name == "register":
                return ["You're already registered - send a voice message to compete!"]
            return [
                "I didn't quite get that. Send a voice message to compete, or ask "
                "about your score, rank, the rules, prizes, or the deadline."
            ]
        except VocalizeError:
            return ["Sorry, I couldn't look that up right now. Please try again."]

    @staticmethod
    def _apology(exc: VocalizeError) -> str:
        if isinstance(exc, RecordingRejected):
            if exc.reason == "TooShort":
                return "That recording was too short - give it another go!"
            if exc.reason == "TooLong":
                return "That recording was too long - try a shorter one!"
            return "Sorry, I couldn't accept that recording. Try again!"
        if isinstance(exc, TranscriptionUnavailable):
            return ("Sorry, scoring is briefly unavailable - your attempt wasn't "
                    "counted. Please try again in a moment.")
        return "Sorry, I couldn't score that recording. Try again!"

    def handle_audio(self, user_id: str, wav_bytes: bytes,
                     at: datetime | None = None, raise_errors: bool = False):
        """Returns (outbound texts, AttemptResult | None).

        With raise_errors=True, submission failures propagate (for callers
        that map them to transport-level error codes) instead of being
        rendered as apology messages.
        """
        at = at or datetime.now(timezone.utc)
        session = self._session(user_id)
        session.last_activity = at
        self.state.record_inbound(user_id, "inbound_audio", at)

        if session.phase != "competing":
            return (
                ["Let's get you registered before scoring recordings! Say hi to start."],
                None,
            )
        try:
            result = self.state.submit_attempt(
                user_id, wav_bytes, at, transcriber=self.transcriber
            )
        except VocalizeError as exc:
            if raise_errors:
                raise
            return ([self._apology(exc)], None)
        meta = {
            "score": result.combined,
            "rank": result.rank,
            "attempts": result.attempt_count,
            "best_score": result.best_score,
        }
        if result.gap_to_next is not None:
            meta["gap_to_next"] = result.gap_to_next
        return ([render_feedback("attempt_scored", meta, self.responder)], result)

    def handle_message(self, user_id: str, *, text: str | None = None,
                       wav_bytes: bytes | None = None, at: datetime | None = None):
        """Single entry point: exactly one of text / wav_bytes must be given."""
        if (text is None) == (wav_bytes is None):
            raise ValueError("pass exactly one of text or wav_bytes")
        if text is not None:
            return self.handle_text(user_id, text, at), None
        return self.handle_audio(user_id, wav_bytes, at)
