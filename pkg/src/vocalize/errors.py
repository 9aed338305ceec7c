"""Exception hierarchy shared by all vocalize modules."""


class VocalizeError(Exception):
    """Base class for all vocalize errors."""

    code = "error"


# --- audio ---------------------------------------------------------------

class MalformedContainer(VocalizeError):
    code = "malformed_container"


class UnsupportedEncoding(VocalizeError):
    code = "unsupported_encoding"


class EmptyAudio(VocalizeError):
    code = "empty_audio"


class TooShort(VocalizeError):
    """Signal has fewer samples than requested envelope bins."""

    code = "too_short"


class InvalidBinCount(VocalizeError):
    code = "invalid_bin_count"


# --- contour -------------------------------------------------------------

class WrongLength(VocalizeError):
    code = "wrong_length"


class NegativeBin(VocalizeError):
    code = "negative_bin"


class AllZero(VocalizeError):
    code = "all_zero"


class EmptySilhouette(VocalizeError):
    code = "empty_silhouette"


class TooNarrow(VocalizeError):
    code = "too_narrow"


# --- scoring -------------------------------------------------------------

class LengthMismatch(VocalizeError):
    code = "length_mismatch"


class ZeroVector(VocalizeError):
    code = "zero_vector"


class ConfigMismatch(VocalizeError):
    code = "config_mismatch"


# --- campaign ------------------------------------------------------------

class InvalidContour(VocalizeError):
    code = "invalid_contour"


class InvalidSchedule(VocalizeError):
    code = "invalid_schedule"


class InvalidScoringConfig(VocalizeError):
    code = "invalid_scoring_config"


class CampaignClosed(VocalizeError):
    code = "campaign_closed"


class UnknownCampaign(VocalizeError):
    code = "unknown_campaign"


class UnknownUser(VocalizeError):
    code = "unknown_user"


class NotRegistered(VocalizeError):
    code = "not_registered"


class RecordingRejected(VocalizeError):
    code = "recording_rejected"

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class TranscriptionUnavailable(VocalizeError):
    code = "transcription_unavailable"


class CorruptLog(VocalizeError):
    code = "corrupt_log"


# --- analytics -----------------------------------------------------------

class NoMessages(VocalizeError):
    code = "no_messages"


class NoAttempts(VocalizeError):
    code = "no_attempts"


# --- providers -----------------------------------------------------------

class ProviderFailure(VocalizeError):
    code = "provider_failure"
