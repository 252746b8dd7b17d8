import { Client } from './api.js';
import { Controller } from './controller.js';
import { renderConsolePane } from './consoleview.js';
import { altitudeText, generationText, groundRect, markers } from './plot.js';

// DOM wiring only; everything with behavior lives in controller.ts and
// stays testable without a browser.

const controller = new Controller(new Client(''));

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const promptInput = el<HTMLTextAreaElement>('prompt-input');
const generateButton = el<HTMLButtonElement>('generate-button');
const generationInfo = el<HTMLDivElement>('generation-info');
const scriptPane = el<HTMLPreElement>('script-pane');
const consolePane = el<HTMLDivElement>('console-pane');
const worldCanvas = el<HTMLCanvasElement>('world-canvas');
const altitudeReadout = el<HTMLDivElement>('altitude-readout');
const statusDot = el<HTMLSpanElement>('status-dot');
const taskBanner = el<HTMLDivElement>('task-banner');
const itemSelect = el<HTMLSelectElement>('item-select');

promptInput.addEventListener('input', () => controller.setPrompt(promptInput.value));
generateButton.addEventListener('click', () => void controller.generate());
el('apply-button').addEventListener('click', () => void controller.apply());
el('jump-button').addEventListener('click', () => void controller.jump());
el('use-button').addEventListener('click', () => void controller.use());
el('grab-button').addEventListener('click', () => void controller.grab());
el('release-button').addEventListener('click', () => void controller.release());
el('ride-button').addEventListener('click', () => void controller.ride());
el('exit-button').addEventListener('click', () => void controller.exitRide());
for (const task of [1, 2, 3]) {
  el(`task${task}-button`).addEventListener('click', () => void controller.startTask(task));
}
itemSelect.addEventListener('change', () => {
  controller.selectItem(Number(itemSelect.value));
});

function drawWorld(): void {
  const ctx = worldCanvas.getContext('2d');
  const snapshot = controller.state.world;
  if (!ctx) {
    return;
  }
  const { width, height } = worldCanvas;
  ctx.clearRect(0, 0, width, height);
  const ground = groundRect(width, height);
  ctx.fillStyle = '#15231b';
  ctx.fillRect(ground.x, ground.y, ground.size, ground.size);
  ctx.strokeStyle = '#2e4d3a';
  ctx.strokeRect(ground.x, ground.y, ground.size, ground.size);
  if (!snapshot) {
    return;
  }
  for (const marker of markers(snapshot, width, height)) {
    ctx.fillStyle =
      marker.kind === 'player' ? '#7dd3fc' : marker.kind === 'chair' ? '#fbbf24' : '#6ee7b7';
    if (marker.kind === 'player') {
      ctx.beginPath();
      ctx.arc(marker.x, marker.y, 6, 0, 2 * Math.PI);
      ctx.fill();
    } else {
      ctx.fillRect(marker.x - 5, marker.y - 5, 10, 10);
    }
    if (marker.airborne) {
      ctx.strokeStyle = '#e4e4e7';
      ctx.beginPath();
      ctx.arc(marker.x, marker.y, 9, 0, 2 * Math.PI);
      ctx.stroke();
    }
    ctx.fillStyle = '#a1a1aa';
    ctx.font = '10px ui-monospace, monospace';
    ctx.fillText(marker.label, marker.x + 8, marker.y - 8);
  }
}

function syncItemOptions(): void {
  const snapshot = controller.state.world;
  if (!snapshot || itemSelect.options.length === snapshot.items.length) {
    return;
  }
  itemSelect.innerHTML = '';
  for (const item of snapshot.items) {
    const option = document.createElement('option');
    option.value = String(item.id);
    option.textContent = `item ${item.id} (${item.kind})`;
    itemSelect.appendChild(option);
  }
  itemSelect.value = String(controller.state.selectedItem);
}

function render(): void {
  const state = controller.state;
  generateButton.disabled = state.generating || !state.connected;
  generationInfo.textContent = generationText(state.lastGeneration);
  scriptPane.textContent = state.pendingScript ?? '(no pending script)';
  consolePane.innerHTML = renderConsolePane(state.scriptConsole, state.activityLines);
  altitudeReadout.textContent = altitudeText(state.world);
  statusDot.className = state.connected ? 'status-dot ok' : 'status-dot error';
  if (state.banner.task === null) {
    taskBanner.textContent = 'no task running';
    taskBanner.className = 'task-banner';
  } else if (state.banner.success) {
    taskBanner.textContent = `Task ${state.banner.task}: success`;
    taskBanner.className = 'task-banner success';
  } else {
    taskBanner.textContent = `Task ${state.banner.task}`;
    taskBanner.className = 'task-banner active';
  }
  if (!state.connected) {
    taskBanner.textContent = 'disconnected';
    taskBanner.className = 'task-banner error';
  }
  syncItemOptions();
  drawWorld();
}

controller.onChange(render);
controller.start();
render();
