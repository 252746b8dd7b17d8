import { describe, expect, it } from 'vitest';

import type { WorldSnapshot } from '../src/api.js';
import { altitudeText, generationText, groundRect, markers, project } from '../src/plot.js';

const W = 360;
const H = 360;

function world(): WorldSnapshot {
  return {
    frame: 1,
    time: 1 / 60,
    players: [
      {
        id: 1,
        pos: [0, 0, 0],
        vel: [0, 0, 0],
        grounded: true,
        riding: null,
        holding: null,
        rates: { jump: 1, move: 1, gravity: 1 },
      },
    ],
    items: [
      {
        id: 1,
        kind: 'chair',
        pos: [10, 0, 0],
        rot: [0, 0, 0],
        vel: [0, 0, 0],
        heldBy: null,
        riddenBy: null,
        hasScript: false,
      },
    ],
  };
}

describe('world plot', () => {
  it('projects the origin to the canvas center', () => {
    const at = project(0, 0, W, H);
    expect(at.x).toBeCloseTo(W / 2);
    expect(at.y).toBeCloseTo(H / 2);
  });

  it('projects the ground edge onto the ground square edge', () => {
    const ground = groundRect(W, H);
    const right = project(10, 0, W, H);
    expect(right.x).toBeCloseTo(ground.x + ground.size);
    const top = project(0, -10, W, H);
    expect(top.y).toBeCloseTo(ground.y);
  });

  it('marks players as circles at their position and items by kind', () => {
    const all = markers(world(), W, H);
    expect(all.length).toBe(2);
    const player = all.find((m) => m.kind === 'player');
    const chair = all.find((m) => m.kind === 'chair');
    expect(player?.label).toBe('p1');
    expect(player?.x).toBeCloseTo(W / 2);
    expect(chair?.label).toBe('i1');
    expect(chair?.airborne).toBe(false);
  });

  it('formats the altitude readout to two decimals', () => {
    const snapshot = world();
    expect(altitudeText(snapshot)).toBe('y = 0.00');
    snapshot.players[0]!.pos[1] = 7.768;
    expect(altitudeText(snapshot)).toBe('y = 7.77');
    expect(altitudeText(null)).toBe('y = –');
  });

  it('shows generation timing exactly as returned and flags estimates', () => {
    const text = generationText({
      generationMs: 260,
      totalMs: 260.108,
      promptTokens: 1965,
      completionTokens: 39,
      estimated: false,
    });
    expect(text).toBe(
      'generated in 260 ms (total 260.108 ms), 1965 prompt + 39 completion tokens',
    );
    const flagged = generationText({
      generationMs: 4000,
      totalMs: 4400,
      promptTokens: 1900,
      completionTokens: 25,
      estimated: true,
    });
    expect(flagged).toContain('~1900 prompt + ~25 completion tokens');
    expect(generationText(null)).toBe('');
  });
});
