// Canvas painter. Pure consumer of the view model: all game truth comes from
// the latest snapshot; the client never advances state on its own.

import { PointerMapping } from "./mapping.js";
import { GameState, ItemState, Zone } from "./protocol.js";
import { SessionView } from "./viewmodel.js";
import { money } from "./viewmodel.js";

const ZONE_COLORS: Record<string, string> = {
  cart: "#8d6e63",
  table: "#a5d6a7",
  steamer: "#90a4ae",
  serving: "#a5d6a7",
  register: "#8d6e63",
  holder: "#a5d6a7",
};

const CUE_COLORS: Record<string, string> = {
  green: "#2e7d32",
  red: "#c62828",
  none: "#9e9e9e",
};

export function paint(
  ctx: CanvasRenderingContext2D,
  view: SessionView,
  mapping: PointerMapping,
): void {
  ctx.clearRect(0, 0, mapping.width, mapping.height);
  ctx.fillStyle = "#fff8e1";
  ctx.fillRect(0, 0, mapping.width, mapping.height);
  const snap = view.snapshot;
  if (!snap) {
    ctx.fillStyle = "#555";
    ctx.font = "16px sans-serif";
    ctx.fillText("waiting for session…", 20, 30);
    return;
  }
  const state = snap.state;
  for (const [name, zone] of Object.entries(state.zones)) {
    drawZone(ctx, mapping, name, zone);
  }
  if (snap.game === "cashier") {
    drawCashier(ctx, mapping, state);
  }
  for (const item of state.items ?? []) {
    drawItem(ctx, mapping, item, state);
  }
  drawHud(ctx, mapping, view, state, snap.game, snap.t);
}

function drawZone(
  ctx: CanvasRenderingContext2D,
  m: PointerMapping,
  name: string,
  zone: Zone,
): void {
  const a = m.toCanvas(zone[0], zone[3]); // top-left in canvas space
  const b = m.toCanvas(zone[2], zone[1]);
  ctx.strokeStyle = ZONE_COLORS[name] ?? "#999";
  ctx.lineWidth = 2;
  ctx.strokeRect(a.px, a.py, b.px - a.px, b.py - a.py);
  ctx.fillStyle = "#777";
  ctx.font = "12px sans-serif";
  ctx.fillText(name, a.px + 4, a.py + 14);
}

function drawItem(
  ctx: CanvasRenderingContext2D,
  m: PointerMapping,
  item: ItemState,
  state: GameState,
): void {
  if (item.stage === "missed") return;
  const { px, py } = m.toCanvas(item.x, item.y);
  const r = Math.abs(m.scaleX(0.06));
  ctx.beginPath();
  ctx.arc(px, py, r, 0, Math.PI * 2);
  ctx.fillStyle = item.placed || item.stage === "served" ? "#c8e6c9" : "#ffe0b2";
  ctx.fill();
  const cue = item.cue ?? "none";
  ctx.lineWidth = cue === "none" ? 1.5 : 4;
  ctx.strokeStyle = CUE_COLORS[cue] ?? "#9e9e9e";
  if (state.show_targets && item.target) ctx.strokeStyle = "#1565c0";
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(item.id.replace(/_/g, " "), px, py + r + 12);
  ctx.textAlign = "start";
}

function drawCashier(ctx: CanvasRenderingContext2D, m: PointerMapping, state: GameState): void {
  for (const d of state.denominations ?? []) {
    const { px, py } = m.toCanvas(d.x, d.y);
    const w = Math.abs(m.scaleX(d.kind === "note" ? 0.1 : 0.06));
    const h = Math.abs(m.scaleY(d.kind === "note" ? 0.05 : 0.06));
    ctx.fillStyle = d.kind === "note" ? "#c5cae9" : "#ffd54f";
    if (d.kind === "note") {
      ctx.fillRect(px - w, py - h, 2 * w, 2 * h);
    } else {
      ctx.beginPath();
      ctx.arc(px, py, w, 0, Math.PI * 2);
      ctx.fill();
    }
    ctx.fillStyle = "#333";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(money(d.value), px, py + 3);
    ctx.textAlign = "start";
  }
  const trial = state.trial;
  if (trial) {
    ctx.fillStyle = "#333";
    ctx.font = "14px sans-serif";
    ctx.fillText(
      `trial ${trial.index + 1}/${state.trial_count}  bill ${money(trial.bill)}  ` +
        `paid ${money(trial.payment)}  in holder ${money(trial.placed_sum)}  ` +
        `${trial.remaining_s.toFixed(0)}s left`,
      16,
      mHeightOffset(m),
    );
  }
}

function mHeightOffset(m: PointerMapping): number {
  return m.height - 12;
}

function drawHud(
  ctx: CanvasRenderingContext2D,
  m: PointerMapping,
  view: SessionView,
  state: GameState,
  game: string,
  t: number,
): void {
  ctx.fillStyle = "#333";
  ctx.font = "14px sans-serif";
  ctx.fillText(`${game}  |  ${state.phase}  |  ${state.clock_s.toFixed(1)}s`, 16, 20);
  if (state.held || state.held_pos) {
    const pos = state.held_pos;
    if (pos && pos.length >= 2) {
      const { px, py } = m.toCanvas(pos[0]!, pos[1]!);
      ctx.beginPath();
      ctx.arc(px, py, 6, 0, Math.PI * 2);
      ctx.fillStyle = "#1565c0";
      ctx.fill();
    }
  }
  const badges = view.activeBadges(t);
  badges.forEach((b, i) => {
    const label = b.scentId === "burnt" ? "burnt smell!" : `scent: ${b.scentId.replace("food.", "")}`;
    ctx.fillStyle = b.scentId === "burnt" ? "#c62828" : "#6d4c41";
    ctx.font = "bold 13px sans-serif";
    ctx.fillText(label, m.width - 160, 24 + 18 * i);
  });
  if (view.lastError) {
    ctx.fillStyle = "#c62828";
    ctx.fillText(view.lastError, 16, 40);
  }
}
