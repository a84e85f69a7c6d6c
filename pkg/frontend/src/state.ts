/**
 * Session controller: drives one questionnaire session against the API.
 *
 * Holds the current question, the k/18 progress, and the submit discipline:
 * a submit in flight blocks duplicate posts (a double-tap resolves to the
 * same single advance), and a network failure leaves the assembled answer
 * with the caller so a retry does not lose entered values.
 */

import {
  Answer,
  NetworkError,
  RejectedError,
  SubmitResult,
  SurveyApi,
  WireQuestion,
} from "./api.js";
import { toUiQuestion, UiQuestion } from "./questions.js";

export interface Progress {
  answered: number;
  total: number;
  label: string;
}

export type SubmitOutcome =
  | { status: "advanced"; nextPhase: string }
  | { status: "rejected"; message: string }
  | { status: "network-error"; message: string };

export class SessionController {
  private wire: WireQuestion | null = null;
  private inflight: Promise<SubmitOutcome> | null = null;

  private constructor(
    readonly api: SurveyApi,
    readonly sessionId: string,
  ) {}

  static async begin(api: SurveyApi, seed?: number): Promise<SessionController> {
    const sessionId = await api.createSession(seed);
    const controller = new SessionController(api, sessionId);
    await controller.refresh();
    return controller;
  }

  /** Re-attach to an existing session (e.g. after a page reload). */
  static async resume(api: SurveyApi, sessionId: string): Promise<SessionController> {
    const controller = new SessionController(api, sessionId);
    await controller.refresh();
    return controller;
  }

  async refresh(): Promise<void> {
    this.wire = await this.api.nextQuestion(this.sessionId);
  }

  get done(): boolean {
    return this.wire?.kind === "done";
  }

  /** The current question, or null when the session is complete. */
  get question(): UiQuestion | null {
    if (this.wire === null || this.wire.kind === "done") {
      return null;
    }
    return toUiQuestion(this.wire);
  }

  get progress(): Progress {
    if (this.wire === null) {
      return { answered: 0, total: 0, label: "0/0" };
    }
    const total = this.wire.total_steps;
    const answered = this.wire.kind === "done" ? total : this.wire.step - 1;
    return { answered, total, label: `${answered}/${total}` };
  }

  /**
   * Post an answer for the current question. Duplicate calls while a post is
   * in flight share the first call's outcome (idempotent single advance).
   */
  submit(answer: Answer): Promise<SubmitOutcome> {
    if (this.inflight !== null) {
      return this.inflight;
    }
    this.inflight = this.post(answer).finally(() => {
      this.inflight = null;
    });
    return this.inflight;
  }

  private async post(answer: Answer): Promise<SubmitOutcome> {
    let result: SubmitResult;
    try {
      result = await this.api.submitAnswer(this.sessionId, answer);
    } catch (err) {
      if (err instanceof RejectedError) {
        return { status: "rejected", message: err.message };
      }
      if (err instanceof NetworkError) {
        return { status: "network-error", message: err.message };
      }
      throw err;
    }
    await this.refresh();
    return { status: "advanced", nextPhase: result.next_phase ?? "" };
  }
}
