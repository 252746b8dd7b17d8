import type { WorldSnapshot } from './api.js';

// Console pane never grows past this many lines.
export const CONSOLE_CAP = 500;

export interface GenerationView {
  generationMs: number;
  totalMs: number;
  promptTokens: number;
  completionTokens: number;
  estimated: boolean;
}

export interface TaskBanner {
  task: number | null;
  success: boolean;
}

export interface UiState {
  selectedItem: number;
  promptDraft: string;
  // exact bytes of GET /api/script, shown in the script pane
  pendingScript: string | null;
  lastGeneration: GenerationView | null;
  // activity lines the UI itself appends (apply reports, failures)
  activityLines: string[];
  // script console tail as the server returned it
  scriptConsole: string[];
  world: WorldSnapshot | null;
  banner: TaskBanner;
  connected: boolean;
  generating: boolean;
}

export function initialState(): UiState {
  return {
    selectedItem: 1,
    promptDraft: '',
    pendingScript: null,
    lastGeneration: null,
    activityLines: [],
    scriptConsole: [],
    world: null,
    banner: { task: null, success: false },
    connected: false,
    generating: false,
  };
}

export function pushActivity(state: UiState, line: string): void {
  state.activityLines.push(line);
  if (state.activityLines.length > CONSOLE_CAP) {
    state.activityLines.splice(0, state.activityLines.length - CONSOLE_CAP);
  }
}

// Polls can land out of order; the displayed frame never goes backwards.
export function acceptWorld(state: UiState, snapshot: WorldSnapshot): boolean {
  if (state.world !== null && snapshot.frame < state.world.frame) {
    return false;
  }
  state.world = snapshot;
  return true;
}
