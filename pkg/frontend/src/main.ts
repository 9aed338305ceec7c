/** Browser entry point: binds the chat and operator controllers to the DOM
 * and captures microphone audio as raw PCM for client-side WAV encoding. */

import { ApiClient } from "./api.js";
import { ChatController } from "./chat.js";
import { barHeights, formatFunnelRows } from "./format.js";
import { OperatorController } from "./operator.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

/** Collect raw Float32 PCM from the microphone until stop() is called. */
class MicCapture {
  private chunks: Float32Array[] = [];
  private context: AudioContext | null = null;
  private stream: MediaStream | null = null;
  sampleRate = 0;

  async start(): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.context = new AudioContext();
    this.sampleRate = this.context.sampleRate;
    const source = this.context.createMediaStreamSource(this.stream);
    const processor = this.context.createScriptProcessor(4096, 1, 1);
    processor.onaudioprocess = (event) => {
      this.chunks.push(new Float32Array(event.inputBuffer.getChannelData(0)));
    };
    source.connect(processor);
    processor.connect(this.context.destination);
  }

  stop(): Float32Array {
    this.stream?.getTracks().forEach((track) => track.stop());
    void this.context?.close();
    const total = this.chunks.reduce((n, c) => n + c.length, 0);
    const samples = new Float32Array(total);
    let offset = 0;
    for (const chunk of this.chunks) {
      samples.set(chunk, offset);
      offset += chunk.length;
    }
    this.chunks = [];
    return samples;
  }
}

function renderBars(container: HTMLElement, envelope: number[], contour?: number[]): void {
  container.replaceChildren();
  const heights = barHeights(envelope);
  const overlay = contour && contour.length === 40 ? barHeights(contour) : null;
  heights.forEach((height, i) => {
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.style.height = `${Math.round(100 * height)}%`;
    if (overlay) {
      const marker = document.createElement("div");
      marker.className = "contour-marker";
      marker.style.bottom = `${Math.round(100 * overlay[i])}%`;
      bar.appendChild(marker);
    }
    container.appendChild(bar);
  });
}

function renderChat(chat: ChatController): void {
  const thread = el("thread");
  thread.replaceChildren();
  for (const message of chat.messages) {
    const bubble = document.createElement("div");
    bubble.className = `bubble ${message.from}`;
    bubble.textContent = message.text;
    thread.appendChild(bubble);
  }
  thread.scrollTop = thread.scrollHeight;
  el<HTMLButtonElement>("retry").hidden = chat.pendingRetry === null;
}

function renderDashboard(operator: OperatorController): void {
  el("banner").hidden = !operator.unreachable;
  const snapshot = operator.snapshot;
  if (!snapshot) return;

  const tbody = el("board-body");
  tbody.replaceChildren();
  for (const entry of snapshot.leaderboard) {
    const row = document.createElement("tr");
    for (const cell of [entry.rank, entry.user_id, entry.best_score, entry.attempt_count]) {
      const td = document.createElement("td");
      td.textContent = String(cell);
      row.appendChild(td);
    }
    tbody.appendChild(row);
  }

  const funnel = el("funnel");
  funnel.replaceChildren();
  for (const [label, value] of formatFunnelRows(snapshot.funnel)) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    funnel.append(dt, dd);
  }

  const canvas = el<HTMLCanvasElement>("curve");
  const ctx = canvas.getContext("2d");
  if (ctx) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.beginPath();
    snapshot.concentration.curve.forEach(([x, y], i) => {
      const px = x * canvas.width;
      const py = canvas.height - y * canvas.height;
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.strokeStyle = "#2563eb";
    ctx.stroke();
  }
  el("concentration").textContent =
    `${(100 * snapshot.concentration.participant_fraction).toFixed(2)}% of participants ` +
    `produce ${Math.round(100 * snapshot.concentration.message_share)}% of recordings`;
}

function boot(): void {
  const params = new URLSearchParams(location.search);
  const api = new ApiClient(params.get("api") ?? location.origin);
  const campaignId = params.get("campaign") ?? "berlin-demo";
  const userId = params.get("user") ?? `web-${Math.random().toString(36).slice(2, 8)}`;

  const chat = new ChatController(api, campaignId, userId);
  const operator = new OperatorController(api, campaignId);
  const mic = new MicCapture();
  let contourBins: number[] | undefined;
  void api.getCampaign(campaignId).then((doc) => {
    if ("bins" in doc.contour) contourBins = doc.contour.bins;
  });

  el<HTMLFormElement>("composer").addEventListener("submit", (event) => {
    event.preventDefault();
    const input = el<HTMLInputElement>("text-input");
    const content = input.value.trim();
    if (!content) return;
    input.value = "";
    void chat.sendText(content).then(() => renderChat(chat));
    renderChat(chat);
  });

  const recordButton = el<HTMLButtonElement>("record");
  recordButton.addEventListener("click", async () => {
    if (chat.recordingState === "recording") {
      chat.recordingState = "uploading";
      recordButton.textContent = "● Record";
      const samples = mic.stop();
      await chat.submitRecording(samples, mic.sampleRate);
      renderChat(chat);
      if (chat.lastAttempt) renderBars(el("waveform"), chat.lastAttempt.envelope, contourBins);
    } else {
      try {
        await mic.start();
        chat.recordingState = "recording";
        recordButton.textContent = "■ Stop";
      } catch {
        chat.messages.push({ from: "system", text: "Microphone permission denied." });
        renderChat(chat);
      }
    }
  });

  el<HTMLButtonElement>("retry").addEventListener("click", () => {
    void chat.retry().then(() => renderChat(chat));
  });

  el<HTMLInputElement>("silhouette").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    const preview = await operator.previewContour(new Uint8Array(await file.arrayBuffer()));
    renderBars(el("preview"), preview.bins);
  });

  el<HTMLFormElement>("campaign-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const data = new FormData(form);
    const doc = {
      id: String(data.get("id") || ""),
      catch_phrase: String(data.get("catch_phrase") || ""),
      contour: { bins: operator.lastPreview?.bins ?? [] },
      scoring: {
        keyword_enabled: data.get("keyword_enabled") === "on",
        shape_enabled: data.get("shape_enabled") === "on",
        keyword_weight: Number(data.get("keyword_weight") || 0.5),
        shape_weight: Number(data.get("shape_weight") || 0.5),
      },
      starts_at: String(data.get("starts_at")),
      ends_at: String(data.get("ends_at")),
    };
    void operator
      .createCampaign(doc)
      .then(() => el("form-status").textContent = `Created campaign ${doc.id}`)
      .catch((error) => (el("form-status").textContent = String(error.message ?? error)));
  });

  operator.startPolling(() => renderDashboard(operator), 3000);
  void operator.poll().then(() => renderDashboard(operator));
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
