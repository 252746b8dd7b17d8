// Typed client for the service JSON API. Every shape here mirrors a
// server response verbatim; nothing is reformatted on the way through.

export type Vec3 = [number, number, number];

export interface Rates {
  jump: number;
  move: number;
  gravity: number;
}

export interface PlayerSnapshot {
  id: number;
  pos: Vec3;
  vel: Vec3;
  grounded: boolean;
  riding: number | null;
  holding: number | null;
  rates: Rates;
}

export interface ItemSnapshot {
  id: number;
  kind: string;
  pos: Vec3;
  rot: Vec3;
  vel: Vec3;
  heldBy: number | null;
  riddenBy: number | null;
  hasScript: boolean;
}

export interface WorldSnapshot {
  frame: number;
  time: number;
  players: PlayerSnapshot[];
  items: ItemSnapshot[];
}

export interface GenerateOk {
  ok: true;
  script: string;
  generation_ms: number;
  total_ms: number;
  prompt_tokens: number;
  completion_tokens: number;
  estimated: boolean;
}

export interface GenerateFailed {
  ok: false;
  error: string;
  message?: string;
}

export type GenerateResult = GenerateOk | GenerateFailed;

export interface PendingScript {
  item_id: number;
  script: string;
  meta: Record<string, unknown>;
}

export interface ApplyReport {
  ok: boolean;
  console: string[];
  error_kind: string | null;
  error_message: string | null;
}

export interface InputAck {
  accepted: boolean;
  reason: string | null;
}

export interface StepReport {
  frame: number;
  frames_stepped: number;
}

export interface TaskMetrics {
  task: number;
  completion_time_s: number;
  attempts: number;
  success: boolean;
  generate_count: number;
  median_generation_ms: number | null;
  median_total_ms: number | null;
  median_prompt_tokens: number | null;
  median_completion_tokens: number | null;
}

export interface MetricsSummary {
  tasks: TaskMetrics[];
  attempts_includes_failures: boolean;
  event_count: number;
}

export type PlayerAction =
  | { action: 'move'; direction: Vec3 }
  | { action: 'jump' }
  | { action: 'interact'; item_id: number }
  | { action: 'grab'; item_id: number }
  | { action: 'release' }
  | { action: 'ride'; item_id: number }
  | { action: 'exitRide' };

export class ApiError extends Error {
  status: number;
  kind: string;

  constructor(status: number, kind: string, message: string) {
    super(message);
    this.status = status;
    this.kind = kind;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Client {
  private base: string;
  private fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    const payload = await response.json();
    if (!response.ok) {
      // generate's 422 carries its failure in-band; everything else throws
      if (response.status === 422 && payload && payload.ok === false) {
        return payload as T;
      }
      const kind = payload && payload.error ? String(payload.error) : 'HttpError';
      const message = payload && payload.message ? String(payload.message) : `HTTP ${response.status}`;
      throw new ApiError(response.status, kind, message);
    }
    return payload as T;
  }

  createSession(): Promise<{ session_id: string }> {
    return this.request('POST', '/api/session', {});
  }

  taskStart(task: number): Promise<{ ok: boolean }> {
    return this.request('POST', '/api/task/start', { task });
  }

  generate(itemId: number, prompt: string): Promise<GenerateResult> {
    return this.request('POST', '/api/generate', { item_id: itemId, prompt });
  }

  script(itemId: number): Promise<PendingScript> {
    return this.request('GET', `/api/script/${itemId}`);
  }

  apply(itemId: number): Promise<ApplyReport> {
    return this.request('POST', '/api/apply', { item_id: itemId });
  }

  world(): Promise<WorldSnapshot> {
    return this.request('GET', '/api/world');
  }

  input(playerId: number, action: PlayerAction): Promise<InputAck> {
    return this.request('POST', '/api/input', { player_id: playerId, ...action });
  }

  step(frames: number): Promise<StepReport> {
    return this.request('POST', '/api/step', { frames });
  }

  consoleTail(itemId: number, limit = 100): Promise<{ item_id: number; lines: string[] }> {
    return this.request('GET', `/api/console/${itemId}?limit=${limit}`);
  }

  metrics(): Promise<MetricsSummary> {
    return this.request('GET', '/api/metrics');
  }
}
