/** Client-side 16-bit PCM mono WAV encoding.
 *
 * Matches the service's own encoder: samples clipped to [-1, 32767/32768],
 * scaled by 32768 and rounded half-to-even, so a tone synthesized here and
 * one synthesized server-side from the same floats are byte-identical.
 */

const MAX_POSITIVE = 32767.0 / 32768.0;

/** Round half to even (the rounding used by the service encoder). */
export function roundHalfEven(x: number): number {
  const floor = Math.floor(x);
  const diff = x - floor;
  if (diff > 0.5) return floor + 1;
  if (diff < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

export function encodeWav(samples: Float32Array | number[], sampleRate: number): Uint8Array {
  const n = samples.length;
  const payloadLen = n * 2;
  const buffer = new ArrayBuffer(44 + payloadLen);
  const view = new DataView(buffer);
  const writeAscii = (offset: number, text: string) => {
    for (let i = 0; i < text.length; i++) view.setUint8(offset + i, text.charCodeAt(i));
  };

  writeAscii(0, "RIFF");
  view.setUint32(4, 36 + payloadLen, true);
  writeAscii(8, "WAVE");
  writeAscii(12, "fmt ");
  view.setUint32(16, 16, true); // fmt chunk size
  view.setUint16(20, 1, true); // PCM
  view.setUint16(22, 1, true); // mono
  view.setUint32(24, sampleRate, true);
  view.setUint32(28, sampleRate * 2, true); // byte rate
  view.setUint16(32, 2, true); // block align
  view.setUint16(34, 16, true); // bits per sample
  writeAscii(36, "data");
  view.setUint32(40, payloadLen, true);

  for (let i = 0; i < n; i++) {
    const clipped = Math.min(MAX_POSITIVE, Math.max(-1.0, samples[i]));
    view.setInt16(44 + 2 * i, roundHalfEven(clipped * 32768.0), true);
  }
  return new Uint8Array(buffer);
}

/** Deterministic test tone: a sine whose amplitude steps through the given
 * per-bin levels, mirroring the shape a campaign contour expects. */
export function synthesizeTone(
  binLevels: number[],
  durationS = 2.5,
  sampleRate = 16000,
  frequencyHz = 440,
): Float32Array {
  const total = Math.round(durationS * sampleRate);
  const samples = new Float32Array(total);
  const nBins = binLevels.length;
  for (let k = 0; k < nBins; k++) {
    const lo = Math.floor((k * total) / nBins);
    const hi = Math.floor(((k + 1) * total) / nBins);
    for (let i = lo; i < hi; i++) {
      samples[i] = binLevels[k] * Math.sin((2 * Math.PI * frequencyHz * i) / sampleRate);
    }
  }
  return samples;
}
