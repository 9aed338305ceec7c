/** Client-parity suite: the console must display exactly the numbers the
 * service computes, verified against the CLI on identical inputs. Spawns a
 * real vocalize service and drives it through the same controllers the
 * browser uses. */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, cpSync, readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, type CampaignDoc } from "../src/api";
import { ChatController } from "../src/chat";
import { formatFunnelRows, formatScore, barHeights } from "../src/format";
import { OperatorController } from "../src/operator";
import { encodeWav, synthesizeTone } from "../src/wav";

const PYTHON = process.env.PYTHON ?? "python3";
const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let work: string;
let fixtures: string;
let server: ChildProcess;
let api: ApiClient;

function cli(...argv: string[]): string {
  return execFileSync(PYTHON, ["-m", "vocalize.cli", ...argv], {
    encoding: "utf-8",
  });
}

async function waitForHealth(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      if ((await fetch(`${BASE}/healthz`)).ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not become healthy");
}

async function registerUser(chat: ChatController): Promise<void> {
  for (const text of ["hi", "ok", "Parity Tester", "parity@example.com"]) {
    await chat.sendText(text);
  }
}

beforeAll(async () => {
  work = mkdtempSync(join(tmpdir(), "vocalize-console-"));
  fixtures = join(work, "fixtures");
  cli("fixtures", "--out", fixtures);

  // seed the service's data dir with the bundled event-log fixture so the
  // dashboard has a populated campaign to report on
  const dataDir = join(work, "data");
  mkdirSync(join(dataDir, "campaigns"), { recursive: true });
  mkdirSync(join(dataDir, "logs"), { recursive: true });
  const demo = JSON.parse(
    readFileSync(join(fixtures, "berlin-demo.campaign.json"), "utf-8"),
  );
  writeFileSync(
    join(dataDir, "campaigns", "wearedevelopers-2024.json"),
    JSON.stringify({ ...demo, id: "wearedevelopers-2024" }),
  );
  cpSync(
    join(fixtures, "wearedevelopers-2024.jsonl"),
    join(dataDir, "logs", "wearedevelopers-2024.jsonl"),
  );

  server = spawn(
    PYTHON,
    ["-m", "vocalize.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT), "--data-dir", dataDir],
    {
      env: {
        ...process.env,
        VOCALIZE_TRANSCRIPTS_FILE: join(fixtures, "berlin-demo.transcripts.json"),
      },
      stdio: "ignore",
    },
  );
  await waitForHealth();
  api = new ApiClient(BASE);
}, 60000);

afterAll(() => {
  server?.kill();
});

describe("chat view parity", () => {
  it("displays the same score string the CLI prints for the identical WAV", async () => {
    const campaign = JSON.parse(
      readFileSync(join(fixtures, "berlin-demo.campaign.json"), "utf-8"),
    ) as CampaignDoc;
    await api.createCampaign(campaign);

    const chat = new ChatController(api, campaign.id, "parity-user");
    await registerUser(chat);
    const wavPath = join(fixtures, "berlin-demo.wav");
    const attempt = await chat.submitWav(new Uint8Array(readFileSync(wavPath)));
    expect(attempt).not.toBeNull();

    const fromCli = JSON.parse(
      cli(
        "score",
        "--campaign", join(fixtures, "berlin-demo.campaign.json"),
        "--audio", wavPath,
        "--transcripts", join(fixtures, "berlin-demo.transcripts.json"),
      ),
    );
    // identical numbers end to end, and the rendered chat bubble carries
    // exactly the CLI's score formatted to 2 decimals plus the rank
    expect(attempt!.combined).toBe(fromCli.combined);
    expect(attempt!.rank).toBe(fromCli.rank);
    const bubble = chat.messages[chat.messages.length - 1].text;
    expect(bubble).toContain(`Score ${formatScore(fromCli.combined)}`);
    expect(bubble).toContain(`rank #${fromCli.rank}`);
    // waveform invariant: exactly 40 bars proportional to the envelope
    expect(attempt!.envelope).toHaveLength(40);
    expect(barHeights(attempt!.envelope)).toHaveLength(40);
  });

  it("round-trips a synthesized tone: client upload scores equal CLI score", async () => {
    const bins = Array.from({ length: 40 }, (_, i) => 0.1 + 0.8 * Math.abs(Math.sin(i / 5)));
    const doc: CampaignDoc = {
      id: "tone-roundtrip",
      catch_phrase: "tone round trip",
      contour: { bins, label: "tone" },
      scoring: { keyword_enabled: false, shape_enabled: true, shape_weight: 1.0 },
      starts_at: "2024-01-01T00:00:00Z",
      ends_at: "2099-01-01T00:00:00Z",
    };
    await api.createCampaign(doc);
    const wav = encodeWav(synthesizeTone(bins, 2.0, 16000), 16000);

    const chat = new ChatController(api, doc.id, "tone-user");
    await registerUser(chat);
    const attempt = await chat.submitWav(wav);
    expect(attempt).not.toBeNull();

    const campaignPath = join(work, "tone-campaign.json");
    const wavPath = join(work, "tone.wav");
    writeFileSync(campaignPath, JSON.stringify(doc));
    writeFileSync(wavPath, wav);
    const fromCli = JSON.parse(
      cli("score", "--campaign", campaignPath, "--audio", wavPath),
    );
    expect(attempt!.combined).toBe(fromCli.combined);
    expect(attempt!.shape_value).toBe(fromCli.shape_value);
  });

  it("shows a rejection as a chat message without recording an attempt", async () => {
    const chat = new ChatController(api, "berlin-demo", "parity-user");
    const tiny = encodeWav(new Float32Array(160), 16000); // 0.01 s
    const attempt = await chat.submitWav(tiny);
    expect(attempt).toBeNull();
    expect(chat.pendingRetry).toBeNull(); // a real reply, not a network failure
    const bubble = chat.messages[chat.messages.length - 1].text.toLowerCase();
    expect(bubble).toContain("short");
  });
});

describe("operator dashboard parity", () => {
  it("funnel panel shows the bundled fixture's published numbers", async () => {
    const operator = new OperatorController(api, "wearedevelopers-2024");
    const snapshot = await operator.poll();
    expect(operator.unreachable).toBe(false);
    expect(snapshot).not.toBeNull();
    expect(snapshot!.funnel.leads_pct).toBe(71.16);
    expect(snapshot!.funnel.participants_pct).toBe(68.6);
    expect(snapshot!.funnel.recurring_pct).toBe(64.42);
    // rendered rows are string-equal to the API fields — no reformatting
    const rows = formatFunnelRows(snapshot!.funnel).map(([, value]) => value);
    expect(rows).toContain("71.16%");
    expect(rows).toContain("68.6%");
    expect(rows).toContain("64.42%");
    expect(rows).toContain("25% text / 75% audio");
    expect(Math.abs(100 * snapshot!.concentration.participant_fraction - 24.11)).toBeLessThanOrEqual(0.5);
  });

  it("contour preview equals the CLI contour output for the same image", async () => {
    const pgmPath = join(fixtures, "berlin-demo.skyline.pgm");
    const operator = new OperatorController(api, "berlin-demo");
    const preview = await operator.previewContour(new Uint8Array(readFileSync(pgmPath)));
    const fromCli = JSON.parse(cli("contour", "--image", pgmPath));
    expect(preview.bins).toEqual(fromCli.bins);
    expect(preview.bins).toHaveLength(40);
  });

  it("flags the service as unreachable when it cannot be polled", async () => {
    const broken = new OperatorController(new ApiClient("http://127.0.0.1:1"), "x");
    await broken.poll();
    expect(broken.unreachable).toBe(true);
  });
});
