/** Operator dashboard state: campaign creation with silhouette preview, and
 * polling snapshots of leaderboard / funnel / concentration. DOM-free. */

import {
  ApiClient,
  CampaignDoc,
  ConcentrationReport,
  ContourPreview,
  FunnelReport,
  LeaderboardEntry,
} from "./api.js";

export interface DashboardSnapshot {
  leaderboard: LeaderboardEntry[];
  funnel: FunnelReport;
  concentration: ConcentrationReport;
}

export class OperatorController {
  snapshot: DashboardSnapshot | null = null;
  /** True after a failed poll; the view shows an "unreachable" banner. */
  unreachable = false;
  lastPreview: ContourPreview | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly campaignId: string,
  ) {}

  /** Server-side contour extraction so the preview matches scoring exactly. */
  async previewContour(pgm: Uint8Array, threshold = 128): Promise<ContourPreview> {
    this.lastPreview = await this.api.previewContour(pgm, threshold);
    return this.lastPreview;
  }

  createCampaign(doc: CampaignDoc): Promise<CampaignDoc> {
    return this.api.createCampaign(doc);
  }

  async poll(share = 0.8): Promise<DashboardSnapshot | null> {
    try {
      const [leaderboard, funnel, concentration] = await Promise.all([
        this.api.leaderboard(this.campaignId),
        this.api.funnel(this.campaignId),
        this.api.concentration(this.campaignId, share),
      ]);
      this.snapshot = { leaderboard, funnel, concentration };
      this.unreachable = false;
    } catch {
      this.unreachable = true;
    }
    return this.snapshot;
  }

  startPolling(onUpdate: () => void, intervalMs = 3000): void {
    this.stopPolling();
    this.timer = setInterval(() => {
      void this.poll().then(onUpdate);
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
