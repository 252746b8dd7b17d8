import { describe, expect, it } from 'vitest';

import type { Client, GenerateResult, WorldSnapshot } from '../src/api.js';
import { ApiError } from '../src/api.js';
import { Controller } from '../src/controller.js';

function emptyWorld(frame: number): WorldSnapshot {
  return { frame, time: frame / 60, players: [], items: [] };
}

// Minimal scriptable stand-in for the HTTP client.
function stubClient(overrides: Partial<Record<keyof Client, unknown>>): Client {
  const base = {
    generate: async (): Promise<GenerateResult> => ({ ok: false, error: 'NoCodeBlock' }),
    script: async () => ({ item_id: 1, script: '', meta: {} }),
    apply: async () => ({ ok: true, console: [], error_kind: null, error_message: null }),
    taskStart: async () => ({ ok: true }),
    input: async () => ({ accepted: true, reason: null }),
    world: async () => emptyWorld(0),
    consoleTail: async () => ({ item_id: 1, lines: [] }),
    metrics: async () => ({ tasks: [], attempts_includes_failures: true, event_count: 0 }),
  };
  return { ...base, ...overrides } as unknown as Client;
}

describe('controller', () => {
  it('stores generation info and shows the pending file bytes', async () => {
    const script = '$.onInteract((player) => {\n  player.setJumpSpeedRate(3);\n});';
    const controller = new Controller(
      stubClient({
        generate: async () => ({
          ok: true,
          script: 'client copy, must not be displayed',
          generation_ms: 260,
          total_ms: 260.108,
          prompt_tokens: 1965,
          completion_tokens: 39,
          estimated: false,
        }),
        script: async () => ({ item_id: 1, script, meta: {} }),
      }),
    );
    controller.setPrompt('make me jump three times higher');
    await controller.generate();
    expect(controller.state.pendingScript).toBe(script);
    expect(controller.state.lastGeneration?.generationMs).toBe(260);
    expect(controller.state.generating).toBe(false);
  });

  it('reports extraction failures without touching the script pane', async () => {
    const controller = new Controller(
      stubClient({
        generate: async () => ({ ok: false, error: 'NoCodeBlock', message: 'nothing fenced' }),
      }),
    );
    controller.state.pendingScript = 'previous script';
    controller.setPrompt('please do something');
    await controller.generate();
    expect(controller.state.activityLines).toContain('no code block in reply');
    expect(controller.state.pendingScript).toBe('previous script');
  });

  it('ignores generate while a request is in flight or the prompt is blank', async () => {
    let calls = 0;
    const controller = new Controller(
      stubClient({
        generate: async () => {
          calls += 1;
          return { ok: false, error: 'NoCodeBlock' };
        },
      }),
    );
    await controller.generate();
    expect(calls).toBe(0);
    controller.setPrompt('  ');
    await controller.generate();
    expect(calls).toBe(0);
  });

  it('pushes apply reports into the activity log', async () => {
    const controller = new Controller(
      stubClient({
        apply: async () => ({
          ok: false,
          console: ['from install'],
          error_kind: 'ParseError',
          error_message: 'unexpected token (line 1, column 2)',
        }),
      }),
    );
    await controller.apply();
    expect(controller.state.activityLines).toContain('from install');
    expect(controller.state.activityLines).toContain(
      'ParseError: unexpected token (line 1, column 2)',
    );
  });

  it('marks the banner from metrics for the active task only', async () => {
    const controller = new Controller(
      stubClient({
        metrics: async () => ({
          tasks: [
            {
              task: 1,
              completion_time_s: 10,
              attempts: 1,
              success: true,
              generate_count: 1,
              median_generation_ms: 260,
              median_total_ms: 260,
              median_prompt_tokens: 10,
              median_completion_tokens: 5,
            },
          ],
          attempts_includes_failures: true,
          event_count: 3,
        }),
      }),
    );
    await controller.pollMetricsOnce();
    expect(controller.state.banner.success).toBe(false);
    await controller.startTask(1);
    await controller.pollMetricsOnce();
    expect(controller.state.banner).toEqual({ task: 1, success: true });
  });

  it('tracks connection loss and recovery through the world poll', async () => {
    let healthy = false;
    const controller = new Controller(
      stubClient({
        world: async () => {
          if (!healthy) {
            throw new ApiError(0, 'Transport', 'connection refused');
          }
          return emptyWorld(5);
        },
      }),
    );
    await controller.pollWorldOnce();
    expect(controller.state.connected).toBe(false);
    healthy = true;
    await controller.pollWorldOnce();
    expect(controller.state.connected).toBe(true);
    expect(controller.state.world?.frame).toBe(5);
  });

  it('logs rejected inputs with the server reason', async () => {
    const controller = new Controller(
      stubClient({
        input: async () => ({ accepted: false, reason: 'out of range' }),
      }),
    );
    await controller.grab();
    expect(controller.state.activityLines).toContain('input rejected: out of range');
  });
});
