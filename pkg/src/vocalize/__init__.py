"""Gamified voice-competition platform: recordings are scored on spoken
content (edit distance to a catch phrase) and waveform shape (40-bin RMS
envelope vs. a target contour), with campaigns, leaderboards, a chat flow,
and engagement analytics on top."""

from .audio import (
    EnvelopeVector,
    MonoSignal,
    compute_envelope,
    decode_audio,
    encode_wav,
    validate_recording,
)
from .campaign import (
    Campaign,
    CampaignState,
    CampaignStore,
    EngagementEvent,
    create_campaign,
    read_events,
    replay,
    write_events,
)
from .contour import ContourVector, GrayscaleImage, contour_from_silhouette, load_contour, load_pgm
from .scoring import (
    KeywordScore,
    ScoringConfig,
    ShapeScore,
    combined_score,
    keyword_score,
    levenshtein,
    normalize_text,
    shape_score_cosine,
    shape_score_profile,
)

__version__ = "0.1.0"
