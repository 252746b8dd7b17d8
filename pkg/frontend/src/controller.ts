import { ApiError, Client } from './api.js';
import type { PlayerAction } from './api.js';
import { acceptWorld, initialState, pushActivity } from './state.js';
import type { UiState } from './state.js';

// All state changes funnel through here; the DOM layer only renders and
// forwards clicks. The world itself lives on the server: every action is
// one endpoint call, every displayed value is a response verbatim.

const PLAYER_ID = 1;

export class Controller {
  state: UiState;
  private client: Client;
  private listeners: Array<() => void> = [];
  private timers: ReturnType<typeof setInterval>[] = [];

  constructor(client: Client) {
    this.client = client;
    this.state = initialState();
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  // - actions -

  async generate(): Promise<void> {
    const prompt = this.state.promptDraft.trim();
    if (prompt === '' || this.state.generating) {
      return;
    }
    this.state.generating = true;
    this.notify();
    try {
      const result = await this.client.generate(this.state.selectedItem, prompt);
      if (!result.ok) {
        if (result.error === 'NoCodeBlock') {
          pushActivity(this.state, 'no code block in reply');
        } else {
          pushActivity(this.state, `${result.error}: ${result.message ?? ''}`);
        }
        return;
      }
      this.state.lastGeneration = {
        generationMs: result.generation_ms,
        totalMs: result.total_ms,
        promptTokens: result.prompt_tokens,
        completionTokens: result.completion_tokens,
        estimated: result.estimated,
      };
      // the pane shows the pending file's bytes, not our copy
      const pending = await this.client.script(this.state.selectedItem);
      this.state.pendingScript = pending.script;
    } catch (err) {
      pushActivity(this.state, describe(err));
    } finally {
      this.state.generating = false;
      this.notify();
    }
  }

  async apply(): Promise<void> {
    try {
      const report = await this.client.apply(this.state.selectedItem);
      for (const line of report.console) {
        pushActivity(this.state, line);
      }
      if (report.ok) {
        pushActivity(this.state, `applied to item ${this.state.selectedItem}`);
      } else {
        pushActivity(this.state, `${report.error_kind}: ${report.error_message}`);
      }
    } catch (err) {
      pushActivity(this.state, describe(err));
    }
    this.notify();
  }

  async startTask(task: number): Promise<void> {
    try {
      await this.client.taskStart(task);
      this.state.banner = { task, success: false };
    } catch (err) {
      pushActivity(this.state, describe(err));
    }
    this.notify();
  }

  async sendInput(action: PlayerAction): Promise<void> {
    try {
      const ack = await this.client.input(PLAYER_ID, action);
      if (!ack.accepted) {
        pushActivity(this.state, `input rejected: ${ack.reason}`);
      }
    } catch (err) {
      pushActivity(this.state, describe(err));
    }
    this.notify();
  }

  jump(): Promise<void> {
    return this.sendInput({ action: 'jump' });
  }

  use(): Promise<void> {
    return this.sendInput({ action: 'interact', item_id: this.state.selectedItem });
  }

  grab(): Promise<void> {
    return this.sendInput({ action: 'grab', item_id: this.state.selectedItem });
  }

  release(): Promise<void> {
    return this.sendInput({ action: 'release' });
  }

  ride(): Promise<void> {
    return this.sendInput({ action: 'ride', item_id: this.state.selectedItem });
  }

  exitRide(): Promise<void> {
    return this.sendInput({ action: 'exitRide' });
  }

  selectItem(itemId: number): void {
    this.state.selectedItem = itemId;
    this.state.pendingScript = null;
    this.state.scriptConsole = [];
    this.notify();
  }

  setPrompt(text: string): void {
    this.state.promptDraft = text;
  }

  // - polling -

  async pollWorldOnce(): Promise<void> {
    try {
      const snapshot = await this.client.world();
      acceptWorld(this.state, snapshot);
      this.state.connected = true;
    } catch {
      this.state.connected = false;
    }
    this.notify();
  }

  async pollConsoleOnce(): Promise<void> {
    try {
      const tail = await this.client.consoleTail(this.state.selectedItem);
      this.state.scriptConsole = tail.lines;
      this.state.connected = true;
    } catch (err) {
      if (!(err instanceof ApiError)) {
        this.state.connected = false;
      }
    }
    this.notify();
  }

  async pollMetricsOnce(): Promise<void> {
    const active = this.state.banner.task;
    if (active === null) {
      return;
    }
    try {
      const summary = await this.client.metrics();
      const entry = summary.tasks.find((t) => t.task === active);
      if (entry) {
        this.state.banner = { task: active, success: entry.success };
      }
    } catch {
      // metrics are advisory; the world poll owns the connection flag
    }
    this.notify();
  }

  start(): void {
    this.timers.push(setInterval(() => void this.pollWorldOnce(), 100));
    this.timers.push(setInterval(() => void this.pollConsoleOnce(), 1000));
    this.timers.push(setInterval(() => void this.pollMetricsOnce(), 1000));
    void this.pollWorldOnce();
  }

  stop(): void {
    for (const timer of this.timers) {
      clearInterval(timer);
    }
    this.timers = [];
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `${err.kind}: ${err.message}`;
  }
  return `Transport: ${String(err)}`;
}
