import type { GenerationView } from './state.js';
import type { WorldSnapshot } from './api.js';

// Top-down view: world x grows to the right, world z grows downward.
// The ground square spans [-halfExtent, halfExtent] on both axes and is
// drawn inside the canvas with a small margin; everything off the square
// still projects linearly so kill-plane drift stays visible.

export const GROUND_HALF_EXTENT = 10;
const MARGIN = 18;

export interface Projected {
  x: number;
  y: number;
}

export function project(
  wx: number,
  wz: number,
  width: number,
  height: number,
  halfExtent = GROUND_HALF_EXTENT,
): Projected {
  const span = Math.min(width, height) - 2 * MARGIN;
  const scale = span / (2 * halfExtent);
  return {
    x: width / 2 + wx * scale,
    y: height / 2 + wz * scale,
  };
}

export function groundRect(width: number, height: number): { x: number; y: number; size: number } {
  const span = Math.min(width, height) - 2 * MARGIN;
  return { x: width / 2 - span / 2, y: height / 2 - span / 2, size: span };
}

export interface Marker {
  kind: 'player' | 'chair' | 'grabbable';
  label: string;
  x: number;
  y: number;
  airborne: boolean;
}

export function markers(snapshot: WorldSnapshot, width: number, height: number): Marker[] {
  const out: Marker[] = [];
  for (const item of snapshot.items) {
    const at = project(item.pos[0], item.pos[2], width, height);
    out.push({
      kind: item.kind === 'chair' ? 'chair' : 'grabbable',
      label: `i${item.id}`,
      x: at.x,
      y: at.y,
      airborne: item.pos[1] > 0.05,
    });
  }
  for (const player of snapshot.players) {
    const at = project(player.pos[0], player.pos[2], width, height);
    out.push({
      kind: 'player',
      label: `p${player.id}`,
      x: at.x,
      y: at.y,
      airborne: !player.grounded,
    });
  }
  return out;
}

export function altitudeText(snapshot: WorldSnapshot | null, playerId = 1): string {
  const player = snapshot?.players.find((p) => p.id === playerId);
  if (!player) {
    return 'y = –';
  }
  return `y = ${player.pos[1].toFixed(2)}`;
}

// Timing and token counts are shown exactly as the server returned them;
// a leading ~ marks estimated token counts.
export function generationText(gen: GenerationView | null): string {
  if (gen === null) {
    return '';
  }
  const flag = gen.estimated ? '~' : '';
  return (
    `generated in ${gen.generationMs} ms (total ${gen.totalMs} ms), ` +
    `${flag}${gen.promptTokens} prompt + ${flag}${gen.completionTokens} completion tokens`
  );
}
