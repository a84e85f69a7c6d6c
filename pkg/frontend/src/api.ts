/**
 * Typed client for the survey service HTTP API.
 *
 * Routes consumed (and nothing else):
 *   POST /sessions                  -> { session_id }
 *   GET  /sessions/{id}/next        -> question descriptor
 *   POST /sessions/{id}/answers     -> { accepted, next_phase } | { accepted: false, error }
 *   GET  /export?format=csv|jsonl   -> completed sessions (experimenter use)
 */

export type Rgb = [number, number, number];

export interface ItemDescriptor {
  name: string;
  rgb: Rgb;
}

export type CategoryId = "equal" | "little" | "moderate" | "much";

export interface PairWireQuestion {
  kind: "pairwise" | "repeat";
  step: number;
  total_steps: number;
  pair_index?: number;
  left: ItemDescriptor;
  right: ItemDescriptor;
  categories: CategoryId[];
  pair_reversed: boolean;
  categories_reversed: boolean;
}

export interface ScoringWireQuestion {
  kind: "scoring";
  step: number;
  total_steps: number;
  items: ItemDescriptor[];
  min_score: number;
  max_score: number;
}

export interface DemographicsWireQuestion {
  kind: "demographics";
  step: number;
  total_steps: number;
  fields: string[];
}

export interface DoneSignal {
  kind: "done";
  total_steps: number;
}

export type WireQuestion =
  | PairWireQuestion
  | ScoringWireQuestion
  | DemographicsWireQuestion
  | DoneSignal;

export interface PairAnswer {
  pair: [string, string];
  preferred: string; // item name or "neither"
  category: CategoryId;
}

export interface ScoresAnswer {
  scores: Record<string, number>;
}

export interface DemographicsAnswer {
  gender: string;
  age: string;
  county: string;
}

export type Answer = PairAnswer | ScoresAnswer | DemographicsAnswer;

export interface SubmitResult {
  accepted: boolean;
  next_phase?: string;
  error?: string;
}

/** Server said no: carries the field-naming message from the service. */
export class RejectedError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "RejectedError";
  }
}

/** Transport trouble (connection refused, timeout, non-JSON body). */
export class NetworkError extends Error {
  constructor(message: string, override readonly cause?: unknown) {
    super(message);
    this.name = "NetworkError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SurveyApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (cause) {
      throw new NetworkError(`request to ${path} failed`, cause);
    }
    let body: unknown;
    try {
      body = await response.json();
    } catch (cause) {
      throw new NetworkError(`non-JSON response from ${path}`, cause);
    }
    if (!response.ok) {
      const message =
        typeof body === "object" && body !== null && "error" in body
          ? String((body as { error: unknown }).error)
          : `HTTP ${response.status}`;
      throw new RejectedError(message);
    }
    return body;
  }

  async createSession(seed?: number): Promise<string> {
    const body = await this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
    return (body as { session_id: string }).session_id;
  }

  async nextQuestion(sessionId: string): Promise<WireQuestion> {
    return (await this.request(`/sessions/${sessionId}/next`)) as WireQuestion;
  }

  async submitAnswer(sessionId: string, answer: Answer): Promise<SubmitResult> {
    const body = await this.request(`/sessions/${sessionId}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(answer),
    });
    return body as SubmitResult;
  }

  /** Experimenter-side export; the UI itself never calls this during a session. */
  async exportText(format: "csv" | "jsonl"): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/export?format=${format}`);
    } catch (cause) {
      throw new NetworkError("export failed", cause);
    }
    if (!response.ok) {
      throw new RejectedError(`HTTP ${response.status}`);
    }
    return response.text();
  }
}
