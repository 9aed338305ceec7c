"""WAV/PCM decoding and 40-bin RMS envelope extraction.

The envelope mirrors the 40 vertical bars a messaging client renders for a
voice note: the recording is split into 40 contiguous segments and each bar
is the RMS of its segment.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyAudio,
    InvalidBinCount,
    MalformedContainer,
    TooShort,
    UnsupportedEncoding,
)

DEFAULT_BINS = 40
DEFAULT_MIN_S = 0.1
DEFAULT_MAX_S = 60.0


@dataclass(frozen=True)
class MonoSignal:
    """Mono float waveform with samples in [-1.0, 1.0]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 1:
            raise EmptyAudio("signal must contain at least one sample")
        if self.sample_rate <= 0:
            raise MalformedContainer("sample rate must be positive")
        if np.max(np.abs(samples)) > 1.0:
            raise MalformedContainer("samples must lie in [-1.0, 1.0]")

    @property
    def sample_count(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return self.sample_count / self.sample_rate


@dataclass(frozen=True)
class EnvelopeVector:
    """Fixed-length, non-negative RMS summary of a recording."""

    bins: tuple
    source_duration_s: float

    def __post_init__(self):
        bins = tuple(float(b) for b in self.bins)
        object.__setattr__(self, "bins", bins)
        if any(b < 0 for b in bins):
            raise ValueError("envelope bins must be non-negative")

    def to_json(self) -> str:
        return json.dumps(
            {"bins": list(self.bins), "duration_s": self.source_duration_s}
        )


@dataclass(frozen=True)
class RecordingCheck:
    accepted: bool
    reason: str | None = None


def _read_chunks(data: bytes):
    """Yield (chunk_id, payload) for each RIFF sub-chunk."""
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + size]
        if len(body) < size:
            raise MalformedContainer(f"chunk {cid!r} truncated")
        yield cid, body
        pos += 8 + size + (size & 1)  # chunks are word-aligned


def decode_audio(data: bytes) -> MonoSignal:
    """Decode RIFF/WAVE bytes holding integer PCM into a MonoSignal.

    8/16/24-bit PCM, 1 or 2 channels. Stereo is downmixed by per-frame
    arithmetic mean; integers are normalized by 2^(bits-1).
    """
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedContainer("not a RIFF/WAVE container")

    fmt = None
    payload = None
    for cid, body in _read_chunks(data):
        if cid == b"fmt ":
            if len(body) < 16:
                raise MalformedContainer("fmt chunk too small")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            payload = body
    if fmt is None or payload is None:
        raise MalformedContainer("missing fmt or data chunk")

    audio_format, channels, sample_rate, _, block_align, bits = fmt
    if audio_format != 1:
        raise UnsupportedEncoding(f"only integer PCM supported (format {audio_format})")
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"unsupported channel count {channels}")
    if bits not in (8, 16, 24):
        raise UnsupportedEncoding(f"unsupported bit depth {bits}")
    if sample_rate <= 0:
        raise MalformedContainer("non-positive sample rate")

    bytes_per_sample = bits // 8
    frame_size = bytes_per_sample * channels
    n_frames = len(payload) // frame_size
    if n_frames == 0:
        raise EmptyAudio("data chunk holds zero frames")
    payload = payload[: n_frames * frame_size]

    if bits == 8:
        raw = np.frombuffer(payload, dtype=np.uint8).astype(np.float64) - 128.0
        scale = 128.0
    elif bits == 16:
        raw = np.frombuffer(payload, dtype="<i2").astype(np.float64)
        scale = 32768.0
    else:
        b = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3)
        vals = (
            b[:, 0].astype(np.int64)
            | (b[:, 1].astype(np.int64) << 8)
            | (b[:, 2].astype(np.int64) << 16)
        )
        vals = np.where(vals >= 1 << 23, vals - (1 << 24), vals)
        raw = vals.astype(np.float64)
        scale = float(1 << 23)

    raw = raw.reshape(n_frames, channels)
    mono = raw.mean(axis=1) / scale
    return MonoSignal(samples=mono, sample_rate=sample_rate)


def encode_wav(signal: MonoSignal) -> bytes:
    """Encode a MonoSignal as 16-bit PCM mono WAV (round trips within 1/32768)."""
    clipped = np.clip(signal.samples, -1.0, 32767.0 / 32768.0)
    ints = np.round(clipped * 32768.0).astype("<i2")
    payload = ints.tobytes()
    fmt = struct.pack("<HHIIHH", 1, 1, signal.sample_rate,
                      signal.sample_rate * 2, 2, 16)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    return b"RIFF" + struct.pack("<I", len(body)) + body


def compute_envelope(signal: MonoSignal, n_bins: int = DEFAULT_BINS) -> EnvelopeVector:
    """RMS per segment; segment k covers samples [floor(kL/N), floor((k+1)L/N))."""
    if n_bins <= 0:
        raise InvalidBinCount("n_bins must be positive")
    total = signal.sample_count
    if total < n_bins:
        raise TooShort(f"{total} samples cannot fill {n_bins} bins")
    sq = signal.samples * signal.samples
    edges = [(k * total) // n_bins for k in range(n_bins + 1)]
    bins = [float(np.sqrt(np.mean(sq[edges[k]:edges[k + 1]]))) for k in range(n_bins)]
    return EnvelopeVector(bins=tuple(bins), source_duration_s=signal.duration_s)


def validate_recording(
    signal: MonoSignal,
    min_s: float = DEFAULT_MIN_S,
    max_s: float = DEFAULT_MAX_S,
) -> RecordingCheck:
    """Accept a recording iff min_s <= duration <= max_s."""
    if not (0 < min_s < max_s):
        raise ValueError("bounds must satisfy 0 < min_s < max_s")
    duration = signal.duration_s
    if duration < min_s:
        return RecordingCheck(False, "TooShort")
    if duration > max_s:
        return RecordingCheck(False, "TooLong")
    return RecordingCheck(True)
