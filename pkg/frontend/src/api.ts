/** Typed client for the vocalize HTTP API. All numbers displayed anywhere in
 * the console come straight from these response payloads. */

export interface AttemptResult {
  combined: number;
  rank: number;
  attempt_count: number;
  gap_to_next: number | null;
  best_score: number;
  keyword_value: number | null;
  shape_value: number | null;
  envelope: number[];
  duration_s: number;
}

export interface MessageResponse {
  messages: string[];
  attempt: AttemptResult | null;
}

export interface LeaderboardEntry {
  rank: number;
  user_id: string;
  best_score: number;
  best_at: string;
  attempt_count: number;
}

export interface FunnelReport {
  potential_leads: number;
  leads_pct: number;
  participants_pct: number;
  recurring_pct: number;
  text_share: number;
  audio_share: number;
}

export interface ConcentrationReport {
  message_share: number;
  participant_fraction: number;
  curve: [number, number][];
}

export interface CampaignDoc {
  id: string;
  catch_phrase: string;
  contour: { bins: number[]; label?: string } | { pgm_base64: string; threshold?: number; label?: string };
  scoring?: Record<string, unknown>;
  starts_at: string;
  ends_at: string;
  min_s?: number;
  max_s?: number;
}

export interface ContourPreview {
  bins: number[];
  label: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body.error ?? "error", body.message ?? response.statusText);
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<boolean> {
    const response = await fetch(this.url("/healthz"));
    return response.ok;
  }

  createCampaign(doc: CampaignDoc): Promise<CampaignDoc> {
    return fetch(this.url("/campaigns"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    }).then((r) => unwrap<CampaignDoc>(r));
  }

  getCampaign(campaignId: string): Promise<CampaignDoc> {
    return fetch(this.url(`/campaigns/${campaignId}`)).then((r) => unwrap<CampaignDoc>(r));
  }

  sendText(campaignId: string, userId: string, content: string): Promise<MessageResponse> {
    return fetch(this.url(`/campaigns/${campaignId}/messages`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ user_id: userId, kind: "text", content }),
    }).then((r) => unwrap<MessageResponse>(r));
  }

  sendAudio(campaignId: string, userId: string, wav: Uint8Array): Promise<MessageResponse> {
    const form = new FormData();
    form.set("user_id", userId);
    form.set("file", new Blob([wav.buffer as ArrayBuffer], { type: "audio/wav" }), "recording.wav");
    return fetch(this.url(`/campaigns/${campaignId}/messages`), {
      method: "POST",
      body: form,
    }).then((r) => unwrap<MessageResponse>(r));
  }

  leaderboard(campaignId: string, topK?: number): Promise<LeaderboardEntry[]> {
    const query = topK === undefined ? "" : `?top_k=${topK}`;
    return fetch(this.url(`/campaigns/${campaignId}/leaderboard${query}`)).then((r) =>
      unwrap<LeaderboardEntry[]>(r),
    );
  }

  funnel(campaignId: string): Promise<FunnelReport> {
    return fetch(this.url(`/campaigns/${campaignId}/reports/funnel`)).then((r) =>
      unwrap<FunnelReport>(r),
    );
  }

  concentration(campaignId: string, share = 0.8): Promise<ConcentrationReport> {
    return fetch(this.url(`/campaigns/${campaignId}/reports/concentration?share=${share}`)).then(
      (r) => unwrap<ConcentrationReport>(r),
    );
  }

  previewContour(pgm: Uint8Array, threshold = 128): Promise<ContourPreview> {
    const form = new FormData();
    form.set("file", new Blob([pgm.buffer as ArrayBuffer], { type: "image/x-portable-graymap" }), "silhouette.pgm");
    return fetch(this.url(`/contour?threshold=${threshold}`), {
      method: "POST",
      body: form,
    }).then((r) => unwrap<ContourPreview>(r));
  }
}
