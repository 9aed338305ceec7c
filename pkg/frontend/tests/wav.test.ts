import { describe, expect, it } from "vitest";

import { encodeWav, roundHalfEven, synthesizeTone } from "../src/wav";

function ascii(bytes: Uint8Array, start: number, length: number): string {
  return String.fromCharCode(...bytes.slice(start, start + length));
}

function view(bytes: Uint8Array): DataView {
  return new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
}

describe("encodeWav", () => {
  it("writes a well-formed 16-bit PCM mono header", () => {
    const wav = encodeWav(new Float32Array([0, 0.5, -0.5]), 16000);
    expect(wav.length).toBe(44 + 6);
    expect(ascii(wav, 0, 4)).toBe("RIFF");
    expect(ascii(wav, 8, 4)).toBe("WAVE");
    expect(ascii(wav, 12, 4)).toBe("fmt ");
    const v = view(wav);
    expect(v.getUint32(4, true)).toBe(36 + 6); // RIFF size
    expect(v.getUint16(20, true)).toBe(1); // PCM
    expect(v.getUint16(22, true)).toBe(1); // mono
    expect(v.getUint32(24, true)).toBe(16000);
    expect(v.getUint32(28, true)).toBe(32000); // byte rate
    expect(v.getUint16(32, true)).toBe(2); // block align
    expect(v.getUint16(34, true)).toBe(16); // bits
    expect(ascii(wav, 36, 4)).toBe("data");
    expect(v.getUint32(40, true)).toBe(6);
  });

  it("scales samples by 32768 with half-to-even rounding", () => {
    const wav = encodeWav([0, 0.5, -0.5, 1 / 32768, 2.5 / 32768, 3.5 / 32768], 8000);
    const v = view(wav);
    const ints = [0, 1, 2, 3, 4, 5].map((i) => v.getInt16(44 + 2 * i, true));
    // 2.5 rounds to 2 (even), 3.5 rounds to 4
    expect(ints).toEqual([0, 16384, -16384, 1, 2, 4]);
  });

  it("clips out-of-range samples to the int16 range", () => {
    const wav = encodeWav([2.0, -2.0, 1.0, -1.0], 8000);
    const v = view(wav);
    const ints = [0, 1, 2, 3].map((i) => v.getInt16(44 + 2 * i, true));
    expect(ints).toEqual([32767, -32768, 32767, -32768]);
  });
});

describe("roundHalfEven", () => {
  it("matches banker's rounding on ties and plain rounding elsewhere", () => {
    expect(roundHalfEven(0.5)).toBe(0);
    expect(roundHalfEven(1.5)).toBe(2);
    expect(roundHalfEven(2.5)).toBe(2);
    expect(roundHalfEven(-0.5)).toBe(0); // floor(-0.5) = -1, tie to even 0
    expect(roundHalfEven(-1.5)).toBe(-2);
    expect(roundHalfEven(1.2)).toBe(1);
    expect(roundHalfEven(1.8)).toBe(2);
  });
});

describe("synthesizeTone", () => {
  it("produces the requested length and per-segment amplitudes", () => {
    const levels = [0.2, 0.8];
    const tone = synthesizeTone(levels, 1.0, 8000, 440);
    expect(tone.length).toBe(8000);
    const firstPeak = Math.max(...tone.slice(0, 4000).map(Math.abs));
    const secondPeak = Math.max(...tone.slice(4000).map(Math.abs));
    // Float32 storage can nudge peaks a hair above the nominal level
    expect(firstPeak).toBeGreaterThan(0.19);
    expect(firstPeak).toBeLessThanOrEqual(0.2 + 1e-6);
    expect(secondPeak).toBeGreaterThan(0.79);
    expect(secondPeak).toBeLessThanOrEqual(0.8 + 1e-6);
  });
});
