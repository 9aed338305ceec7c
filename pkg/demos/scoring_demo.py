"""Score the bundled demo recording end to end: keyword accuracy against the
catch phrase, shape similarity against the campaign contour, and the weighted
combined score."""

from vocalize.audio import compute_envelope, decode_audio
from vocalize.fixtures import (
    DEMO_PHRASE,
    demo_campaign,
    demo_transcriber,
    demo_wav,
)
from vocalize.scoring import combined_score, keyword_score, shape_score


def main() -> None:
    campaign = demo_campaign()
    signal = decode_audio(demo_wav())
    envelope = compute_envelope(signal)

    transcript = demo_transcriber().transcribe(signal)
    kw = keyword_score(transcript, DEMO_PHRASE)
    print(f"transcript : {transcript!r}")
    print(f"keyword    : {kw.value:.4f} "
          f"(distance {kw.distance} over {kw.longer_len} chars)")

    sh = shape_score(envelope.bins, campaign.contour.bins,
                     campaign.scoring.shape_algorithm)
    print(f"shape      : {sh.value:.4f} ({sh.algorithm})")

    total = combined_score(kw, sh, campaign.scoring)
    print(f"combined   : {total:.4f} "
          f"(weights {campaign.scoring.keyword_weight}/"
          f"{campaign.scoring.shape_weight})")


if __name__ == "__main__":
    main()
