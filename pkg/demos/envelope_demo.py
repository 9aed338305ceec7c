"""Decode a WAV file and print its 40-bin RMS envelope.

Runs on the bundled demo recording; pass a path to use your own file.
"""

import sys

from vocalize.audio import compute_envelope, decode_audio, validate_recording
from vocalize.fixtures import demo_wav


def main() -> None:
    if len(sys.argv) > 1:
        data = open(sys.argv[1], "rb").read()
        name = sys.argv[1]
    else:
        data = demo_wav()
        name = "<bundled demo recording>"

    signal = decode_audio(data)
    check = validate_recording(signal)
    print(f"{name}: {signal.duration_s:.2f}s @ {signal.sample_rate} Hz, "
          f"accepted={check.accepted}")

    envelope = compute_envelope(signal)
    peak = max(envelope.bins)
    for i, value in enumerate(envelope.bins):
        bar = "#" * round(40 * value / peak) if peak else ""
        print(f"bin {i:2d}  {value:.4f}  {bar}")


if __name__ == "__main__":
    main()
