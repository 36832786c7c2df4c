/**
 * Typed client for the goalgraph HTTP API with debounced, latest-wins
 * evaluation: at most one evaluate request is in flight, and a newer draft
 * supersedes any response still pending.
 */

import type {
  ComparisonJson,
  EvaluationJson,
  ModelJson,
  ScenarioJson,
  ScenarioSetJson,
  SweepJson,
  VarianceJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function request<T>(fetchImpl: FetchLike, url: string,
                          init?: RequestInit): Promise<T> {
  const response = await fetchImpl(url, init);
  const text = await response.text();
  let tree: unknown = null;
  try {
    tree = text ? JSON.parse(text) : null;
  } catch {
    tree = null;
  }
  if (!response.ok) {
    const err = tree as { error?: string; message?: string } | null;
    throw new ApiError(response.status, err?.error ?? "HTTP_ERROR",
                       err?.message ?? `${url} failed (${response.status})`);
  }
  return tree as T;
}

export class ApiClient {
  private evaluateSeq = 0;

  constructor(private readonly base = "",
              private readonly fetchImpl: FetchLike =
                (input, init) => fetch(input, init)) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return request<T>(this.fetchImpl, this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  model(): Promise<ModelJson> {
    return request<ModelJson>(this.fetchImpl, `${this.base}/api/model`);
  }

  /**
   * Evaluate a draft; resolves null when a newer evaluate started while
   * this one was in flight (the stale response must not repaint the UI).
   */
  async evaluate(scenario: ScenarioJson,
                 intervals = false): Promise<EvaluationJson | null> {
    this.evaluateSeq += 1;
    const seq = this.evaluateSeq;
    const result = await this.post<EvaluationJson>("/api/evaluate",
                                                   { ...scenario, intervals });
    return seq === this.evaluateSeq ? result : null;
  }

  sweep(node: string, from: number, to: number, steps: number,
        scenario: ScenarioJson): Promise<SweepJson> {
    return this.post<SweepJson>("/api/sweep", { node, from, to, steps, scenario });
  }

  compare(baseline: string, scenarios: ScenarioJson[]): Promise<ComparisonJson> {
    return this.post<ComparisonJson>("/api/compare", { baseline, scenarios });
  }

  tracking(scenario?: string): Promise<VarianceJson> {
    const suffix = scenario ? `?scenario=${encodeURIComponent(scenario)}` : "";
    return request<VarianceJson>(this.fetchImpl,
                                 `${this.base}/api/tracking${suffix}`);
  }

  scenarioSet(): Promise<ScenarioSetJson> {
    return request<ScenarioSetJson>(this.fetchImpl, `${this.base}/api/scenarios`);
  }

  putScenarioSet(set: ScenarioSetJson): Promise<ScenarioSetJson> {
    return request<ScenarioSetJson>(this.fetchImpl, `${this.base}/api/scenarios`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(set),
    });
  }
}

/** Trailing-edge debounce (150 ms per UI action by default). */
export function debounce<A extends unknown[]>(fn: (...args: A) => void,
                                              delayMs = 150): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), delayMs);
  };
}
