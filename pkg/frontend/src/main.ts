// Browser entry point: join a live session, play with the pointer, steer
// difficulty from the researcher panel, and show metrics after finalize.

import { SessionClient } from "./client.js";
import { FrameSource, PointerMapping } from "./mapping.js";
import { DEFAULT_PARAMS, DifficultyParams, validateDifficulty } from "./protocol.js";
import { paint } from "./render.js";
import { metricsRows } from "./viewmodel.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("game");
const ctx = canvas.getContext("2d")!;
const mapping = new PointerMapping(canvas.width, canvas.height);
const client = new SessionClient(window.location.origin);
const source = new FrameSource(mapping);

function pointerPos(ev: PointerEvent): { px: number; py: number } {
  const rect = canvas.getBoundingClientRect();
  return { px: ev.clientX - rect.left, py: ev.clientY - rect.top };
}

canvas.addEventListener("pointerdown", (ev) => {
  if (!client.sessionId) return;
  const { px, py } = pointerPos(ev);
  canvas.setPointerCapture(ev.pointerId);
  client.sendFrame(source.pointerDown(px, py));
});
canvas.addEventListener("pointermove", (ev) => {
  if (!client.sessionId) return;
  const { px, py } = pointerPos(ev);
  client.sendFrame(source.pointerMove(px, py));
});
canvas.addEventListener("pointerup", (ev) => {
  if (!client.sessionId) return;
  const { px, py } = pointerPos(ev);
  client.sendFrame(source.pointerUp(px, py));
});
canvas.addEventListener("pointerleave", () => {
  if (client.sessionId && source.grabbing) client.sendFrame(source.handLost());
});

el<HTMLButtonElement>("join").addEventListener("click", () => {
  void (async () => {
    const profile = {
      participant_id: el<HTMLInputElement>("pid").value || "player",
      age: Number(el<HTMLInputElement>("age").value || "67"),
      gender: "other" as const,
      education_band: "7-9y",
      moca_score: 26,
    };
    try {
      await client.create(profile, {}, Date.now() % 1_000_000, 15_000);
      await client.connect();
      el<HTMLSpanElement>("status").textContent = `session ${client.sessionId}`;
    } catch (e) {
      el<HTMLSpanElement>("status").textContent = String(e);
    }
  })();
});

el<HTMLButtonElement>("finalize").addEventListener("click", () => {
  void (async () => {
    const msg = await client.finalize();
    const rows = metricsRows(msg.metrics);
    el<HTMLTableSectionElement>("metrics-body").innerHTML = rows
      .map(
        (r) =>
          `<tr><td>${r.game}</td><td>${r.inaccuracy}</td><td>${r.omission}</td><td>${r.time}</td></tr>`,
      )
      .join("");
  })();
});

// Researcher difficulty panel: client-side validation mirrors the engine.
const PARAM_FIELDS = Object.keys(DEFAULT_PARAMS) as Array<keyof DifficultyParams>;
const panel = el<HTMLDivElement>("panel-fields");
for (const field of PARAM_FIELDS) {
  const row = document.createElement("label");
  row.innerHTML = `${field} <input id="fld-${field}" value="${DEFAULT_PARAMS[field]}" size="6">`;
  panel.appendChild(row);
}

el<HTMLButtonElement>("apply-difficulty").addEventListener("click", () => {
  void (async () => {
    const params = { ...DEFAULT_PARAMS };
    for (const field of PARAM_FIELDS) {
      params[field] = Number(el<HTMLInputElement>(`fld-${field}`).value);
    }
    const problems = validateDifficulty(params);
    const out = el<HTMLSpanElement>("panel-status");
    if (problems.length) {
      out.textContent = problems.join("; ");
      return; // never sent: invalid edits stop client-side
    }
    try {
      await client.setDifficulty(params);
      out.textContent = "applied from next trial";
    } catch (e) {
      out.textContent = String(e);
    }
  })();
});

async function refreshCounts(): Promise<void> {
  if (!client.sessionId) return;
  try {
    const m = await client.metrics();
    const lines = Object.entries(m.counts).map(
      ([game, c]) =>
        `${game}: ${c.correct} ok / ${c.inaccuracy} wrong / ${c.omission} missed`,
    );
    el<HTMLDivElement>("progress").textContent = lines.join("   ");
  } catch {
    // transient; panel keeps the previous numbers
  }
}
setInterval(() => void refreshCounts(), 2000);

function loop(): void {
  paint(ctx, client.view, mapping);
  requestAnimationFrame(loop);
}
loop();
