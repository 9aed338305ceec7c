/** Participant chat-view state machine, kept DOM-free so it can be exercised
 * from tests; main.ts binds it to the document and the microphone. */

import { ApiClient, ApiError, AttemptResult } from "./api.js";
import { formatAttemptSummary } from "./format.js";
import { encodeWav } from "./wav.js";

export interface ChatMessage {
  from: "user" | "system";
  text: string;
}

export type RecordingState = "idle" | "recording" | "uploading";

export class ChatController {
  readonly messages: ChatMessage[] = [];
  recordingState: RecordingState = "idle";
  lastAttempt: AttemptResult | null = null;
  /** Set after a network failure so the view can offer a retry. */
  pendingRetry: Uint8Array | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly campaignId: string,
    readonly userId: string,
  ) {}

  private push(from: "user" | "system", text: string) {
    this.messages.push({ from, text });
  }

  async sendText(content: string): Promise<void> {
    this.push("user", content);
    try {
      const response = await this.api.sendText(this.campaignId, this.userId, content);
      for (const text of response.messages) this.push("system", text);
    } catch (error) {
      this.push("system", this.describeFailure(error));
    }
  }

  /** Encode captured samples and submit them as one attempt. */
  submitRecording(samples: Float32Array, sampleRate: number): Promise<AttemptResult | null> {
    return this.submitWav(encodeWav(samples, sampleRate));
  }

  /** Submit an already-encoded WAV (retry path and tests use this directly). */
  async submitWav(wav: Uint8Array): Promise<AttemptResult | null> {
    this.recordingState = "uploading";
    this.push("user", "🎤 voice message");
    try {
      const response = await this.api.sendAudio(this.campaignId, this.userId, wav);
      this.pendingRetry = null;
      for (const text of response.messages) this.push("system", text);
      if (response.attempt) {
        this.lastAttempt = response.attempt;
        this.push("system", formatAttemptSummary(response.attempt));
      }
      return response.attempt;
    } catch (error) {
      if (error instanceof ApiError) {
        // rejection (too short, closed campaign, ...) — a real reply, no retry
        this.push("system", error.message);
      } else {
        // network failure: no phantom attempt; keep the bytes for a retry
        this.pendingRetry = wav;
        this.push("system", "Upload failed — tap retry to send your recording again.");
      }
      return null;
    } finally {
      this.recordingState = "idle";
    }
  }

  retry(): Promise<AttemptResult | null> {
    if (!this.pendingRetry) return Promise.resolve(null);
    const wav = this.pendingRetry;
    this.pendingRetry = null;
    // drop the failure bubble's user echo duplication by submitting directly
    return this.submitWav(wav);
  }

  private describeFailure(error: unknown): string {
    if (error instanceof ApiError) return error.message;
    return "Could not reach the service — please try again.";
  }
}
