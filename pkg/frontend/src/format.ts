/** Display formatting. The console never recomputes scores; these helpers
 * only format numbers that arrived verbatim from the API. */

import type { AttemptResult, FunnelReport } from "./api.js";

export function formatScore(value: number): string {
  return value.toFixed(2);
}

export function formatAttemptSummary(attempt: AttemptResult): string {
  const parts = [
    `Score ${formatScore(attempt.combined)}`,
    `rank #${attempt.rank}`,
    `attempt ${attempt.attempt_count}`,
  ];
  if (attempt.gap_to_next !== null) {
    parts.push(`${formatScore(attempt.gap_to_next)} behind the next rank`);
  }
  return parts.join(" · ");
}

export function formatFunnelRows(report: FunnelReport): [string, string][] {
  return [
    ["Potential leads", String(report.potential_leads)],
    ["Leads", `${report.leads_pct}%`],
    ["Participants", `${report.participants_pct}%`],
    ["Recurring participants", `${report.recurring_pct}%`],
    ["Message mix", `${report.text_share}% text / ${report.audio_share}% audio`],
  ];
}

/** Bar heights (0..1) for exactly 40 bars, proportional to envelope values. */
export function barHeights(envelope: number[]): number[] {
  if (envelope.length !== 40) {
    throw new Error(`expected 40 envelope bins, got ${envelope.length}`);
  }
  const peak = Math.max(...envelope);
  return envelope.map((v) => (peak > 0 ? v / peak : 0));
}
