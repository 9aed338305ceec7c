"""Keyword score (1 - D/L over normalized transcripts), shape scores, and the
combined attempt score, plus the transcription provider interface."""

from __future__ import annotations

import hashlib
import json
import math
import unicodedata
from dataclasses import dataclass
from typing import Protocol, Sequence

from .audio import MonoSignal, encode_wav
from .errors import (
    ConfigMismatch,
    InvalidScoringConfig,
    LengthMismatch,
    ProviderFailure,
    ZeroVector,
)

ALGORITHM_COSINE = "cosine"
ALGORITHM_PROFILE = "profile"


@dataclass(frozen=True)
class KeywordScore:
    value: float
    distance: int
    longer_len: int
    normalized_transcript: str
    normalized_target: str


@dataclass(frozen=True)
class ShapeScore:
    value: float
    algorithm: str


@dataclass(frozen=True)
class ScoringConfig:
    keyword_enabled: bool = True
    shape_enabled: bool = True
    keyword_weight: float = 0.5
    shape_weight: float = 0.5
    shape_algorithm: str = ALGORITHM_COSINE

    def __post_init__(self):
        if not (self.keyword_enabled or self.shape_enabled):
            raise InvalidScoringConfig("at least one scoring module must be enabled")
        if self.keyword_weight < 0 or self.shape_weight < 0:
            raise InvalidScoringConfig("weights must be non-negative")
        total = 0.0
        if self.keyword_enabled:
            total += self.keyword_weight
        if self.shape_enabled:
            total += self.shape_weight
        if total <= 0:
            raise InvalidScoringConfig("enabled weights must sum to a positive value")
        if self.shape_algorithm not in (ALGORITHM_COSINE, ALGORITHM_PROFILE):
            raise InvalidScoringConfig(f"unknown shape algorithm {self.shape_algorithm!r}")

    def to_dict(self) -> dict:
        return {
            "keyword_enabled": self.keyword_enabled,
            "shape_enabled": self.shape_enabled,
            "keyword_weight": self.keyword_weight,
            "shape_weight": self.shape_weight,
            "shape_algorithm": self.shape_algorithm,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ScoringConfig":
        return cls(
            keyword_enabled=bool(obj.get("keyword_enabled", True)),
            shape_enabled=bool(obj.get("shape_enabled", True)),
            keyword_weight=float(obj.get("keyword_weight", 0.5)),
            shape_weight=float(obj.get("shape_weight", 0.5)),
            shape_algorithm=obj.get("shape_algorithm", ALGORITHM_COSINE),
        )


def normalize_text(raw: str) -> str:
    """Canonical composition, lowercase, strip punctuation, collapse whitespace."""
    text = unicodedata.normalize("NFC", raw).lower()
    out = []
    for ch in text:
        if unicodedata.category(ch).startswith("P"):
            continue
        out.append(" " if ch.isspace() else ch)
    return " ".join("".join(out).split())


def levenshtein(a: str, b: str) -> int:
    """Minimum single-character insertions/deletions/substitutions turning a into b."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def keyword_score(transcript: str, target: str) -> KeywordScore:
    """Score = 1 - D/L on normalized strings; empty-vs-empty is a perfect match."""
    nt = normalize_text(transcript)
    ng = normalize_text(target)
    if not nt and not ng:
        return KeywordScore(1.0, 0, 1, nt, ng)
    if not nt or not ng:
        longer = max(len(nt), len(ng))
        return KeywordScore(0.0, longer, longer, nt, ng)
    dist = levenshtein(nt, ng)
    longer = max(len(nt), len(ng))
    return KeywordScore(1.0 - dist / longer, dist, longer, nt, ng)


def _check_pair(user: Sequence[float], target: Sequence[float]):
    if len(user) != len(target):
        raise LengthMismatch(f"vector lengths differ: {len(user)} vs {len(target)}")


def shape_score_cosine(user: Sequence[float], target: Sequence[float]) -> ShapeScore:
    """Cosine similarity; non-negative inputs keep the value in [0, 1]."""
    _check_pair(user, target)
    dot = sum(u * v for u, v in zip(user, target))
    nu = math.sqrt(sum(u * u for u in user))
    nv = math.sqrt(sum(v * v for v in target))
    if nu == 0.0 or nv == 0.0:
        return ShapeScore(0.0, ALGORITHM_COSINE)
    return ShapeScore(dot / (nu * nv), ALGORITHM_COSINE)


def shape_score_profile(user: Sequence[float], target: Sequence[float]) -> ShapeScore:
    """Peak-normalize both vectors, then 1 minus the mean absolute difference."""
    _check_pair(user, target)
    mu = max(user)
    mv = max(target)
    if mu <= 0 or mv <= 0:
        raise ZeroVector("profile score requires a positive maximum in each vector")
    diff = sum(abs(u / mu - v / mv) for u, v in zip(user, target)) / len(user)
    return ShapeScore(1.0 - diff, ALGORITHM_PROFILE)


def shape_score(user, target, algorithm: str = ALGORITHM_COSINE) -> ShapeScore:
    if algorithm == ALGORITHM_COSINE:
        return shape_score_cosine(user, target)
    if algorithm == ALGORITHM_PROFILE:
        return shape_score_profile(user, target)
    raise InvalidScoringConfig(f"unknown shape algorithm {algorithm!r}")


def combined_score(
    keyword: KeywordScore | None,
    shape: ShapeScore | None,
    cfg: ScoringConfig,
) -> float:
    """Weighted mean of the enabled scores, weights renormalized to sum 1."""
    if cfg.keyword_enabled and keyword is None:
        raise ConfigMismatch("keyword scoring enabled but no keyword score given")
    if cfg.shape_enabled and shape is None:
        raise ConfigMismatch("shape scoring enabled but no shape score given")
    parts = []
    if cfg.keyword_enabled:
        parts.append((cfg.keyword_weight, keyword.value))
    if cfg.shape_enabled:
        parts.append((cfg.shape_weight, shape.value))
    total_w = sum(w for w, _ in parts)
    return sum(w * v for w, v in parts) / total_w


class TranscriptionProvider(Protocol):
    name: str

    def transcribe(self, signal: MonoSignal) -> str: ...


def signal_digest(signal: MonoSignal) -> str:
    """Stable identity of a recording: SHA-256 of its 16-bit WAV encoding."""
    return hashlib.sha256(encode_wav(signal)).hexdigest()


class MapTranscriptionProvider:
    """Offline deterministic provider: fixture digest -> transcript."""

    name = "map"

    def __init__(self, mapping: dict[str, str] | None = None,
                 default: str | None = None):
        self.mapping = dict(mapping or {})
        self.default = default

    def transcribe(self, signal: MonoSignal) -> str:
        digest = signal_digest(signal)
        if digest in self.mapping:
            return self.mapping[digest]
        if self.default is not None:
            return self.default
        raise ProviderFailure(f"no transcript registered for digest {digest[:12]}...")

    @classmethod
    def from_json(cls, data: bytes | str) -> "MapTranscriptionProvider":
        obj = json.loads(data)
        return cls(mapping=obj.get("transcripts", {}), default=obj.get("default"))


class FixedTranscriptionProvider:
    """Returns one fixed transcript for every recording (one-shot scoring)."""

    name = "fixed"

    def __init__(self, transcript: str):
        self.transcript = transcript

    def transcribe(self, signal: MonoSignal) -> str:
        return self.transcript


class HttpTranscriptionProvider:
    """Remote ASR: POST WAV bytes to an endpoint returning {"transcript": str}."""

    name = "http"

    def __init__(self, endpoint: str, token: str | None = None, timeout: float = 10.0):
        self.endpoint = endpoint
        self.token = token
        self.timeout = timeout

    def transcribe(self, signal: MonoSignal) -> str:
        import urllib.error
        import urllib.request

        req = urllib.request.Request(
            self.endpoint,
            data=encode_wav(signal),
            headers={"Content-Type": "audio/wav"},
            method="POST",
        )
        if self.token:
            req.add_header("Authorization", f"Bearer {self.token}")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = json.loads(resp.read())
        except (urllib.error.URLError, ValueError, OSError) as exc:
            raise ProviderFailure(f"transcription endpoint failed: {exc}") from exc
        if "transcript" not in body:
            raise ProviderFailure("transcription endpoint returned no transcript")
        return str(body["transcript"])
