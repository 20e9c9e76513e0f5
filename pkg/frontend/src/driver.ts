// Scripted pointer driver: plays all three games end to end through the same
// pointer pipeline a human uses (mapping -> frames -> stream), reading only
// snapshots. Runs against a non-realtime server, stamping its own session
// clock, so a full session takes milliseconds of wall time.

import { SessionClient } from "./client.js";
import { FrameSource, PointerMapping } from "./mapping.js";
import { GameState, minimalChange, TICK_MS } from "./protocol.js";

export interface DriverReport {
  framesSent: number;
  gamesCompleted: string[];
}

export class ScriptedDriver {
  private tMs: number;
  private frames = 0;
  private source: FrameSource;

  constructor(
    private client: SessionClient,
    private mapping: PointerMapping,
    startMs = TICK_MS,
  ) {
    this.tMs = startMs;
    this.source = new FrameSource(mapping);
  }

  private send(msgFactory: (src: FrameSource, px: number, py: number, t: number) => unknown, x: number, y: number): void {
    const { px, py } = this.mapping.toCanvas(x, y);
    this.client.sendFrame(msgFactory(this.source, px, py, this.tMs / 1000) as any);
    this.frames += 1;
    this.tMs += TICK_MS;
  }

  private down(x: number, y: number): void {
    this.send((s, px, py, t) => s.pointerDown(px, py, t), x, y);
  }

  private move(x: number, y: number): void {
    this.send((s, px, py, t) => s.pointerMove(px, py, t), x, y);
  }

  private up(x: number, y: number): void {
    this.send((s, px, py, t) => s.pointerUp(px, py, t), x, y);
  }

  /** Drag from one normalized point to another: down, carry, up. */
  private pickPlace(from: { x: number; y: number }, to: { x: number; y: number }): void {
    this.move(from.x, from.y);
    this.down(from.x, from.y);
    this.move(to.x, to.y);
    this.up(to.x, to.y);
  }

  private async idle(ms: number): Promise<void> {
    // One open-hand frame is enough to advance the server clock.
    const steps = Math.max(1, Math.round(ms / TICK_MS));
    this.tMs += (steps - 1) * TICK_MS;
    this.move(0, -0.95);
    try {
      await this.client.waitForSnapshot(this.tMs / 1000 - 0.1, 2000);
    } catch {
      // The session may have ended mid-wait (no further snapshots); the run
      // loop's metrics poll decides what to do next.
    }
  }

  private zoneCenter(state: GameState, name: string): { x: number; y: number } {
    const z = state.zones[name];
    if (!z) throw new Error(`snapshot missing zone ${name}`);
    return { x: (z[0] + z[2]) / 2, y: (z[1] + z[3]) / 2 };
  }

  /** Play the whole session; resolves once every game has completed. */
  async run(maxSteps = 20_000): Promise<DriverReport> {
    const completed: string[] = [];
    let lastGame = "";
    for (let step = 0; step < maxSteps; step++) {
      const snap = this.client.view.snapshot;
      if (!snap) {
        await this.idle(100);
        continue;
      }
      const state = snap.state;
      if (snap.game !== lastGame && lastGame) completed.push(lastGame);
      lastGame = snap.game;
      if (this.client.view.metrics?.finalized) break;
      if (state.phase === "complete") {
        // Completed snapshots for the final game stop arriving once the
        // engine is done; poll metrics to notice the session ended.
        const m = await this.client.metrics();
        if (Object.keys(m.metrics).length === 3) {
          completed.push(lastGame);
          return { framesSent: this.frames, gamesCompleted: [...new Set(completed)] };
        }
        await this.idle(100);
        continue;
      }
      if (state.phase === "tutorial") {
        // A grasp skips the tutorial.
        const p = { x: 0, y: -0.95 };
        this.down(p.x, p.y);
        this.up(p.x, p.y);
        await this.idle(100);
        continue;
      }
      if (snap.game === "dimsum") {
        await this.playDimsum(state);
      } else if (snap.game === "steamer") {
        await this.playSteamer(state);
      } else {
        await this.playCashier(state);
      }
    }
    return { framesSent: this.frames, gamesCompleted: [...new Set(completed)] };
  }

  private async playDimsum(state: GameState): Promise<void> {
    if (state.phase === "memorize" || !state.remaining?.length) {
      await this.idle(200);
      return;
    }
    const targetId = state.remaining[0];
    const item = state.items?.find((i) => i.id === targetId);
    if (!item) {
      await this.idle(100);
      return;
    }
    this.pickPlace(item, this.zoneCenter(state, "table"));
    await this.idle(100);
  }

  private async playSteamer(state: GameState): Promise<void> {
    const items = state.items ?? [];
    const inCart = items.find((i) => i.stage === "in_cart");
    if (inCart) {
      this.pickPlace(inCart, this.zoneCenter(state, "steamer"));
      await this.idle(100);
      return;
    }
    const ready = items.find((i) => i.stage === "ready");
    if (ready) {
      this.pickPlace(ready, this.zoneCenter(state, "serving"));
      await this.idle(100);
      return;
    }
    // Waiting on cook timers.
    await this.idle(500);
  }

  private async playCashier(state: GameState): Promise<void> {
    const trial = state.trial;
    if (!trial || trial.status !== "active") {
      await this.idle(100);
      return;
    }
    const remaining = trial.payment - trial.bill - trial.placed_sum;
    if (remaining <= 0) {
      await this.idle(100);
      return;
    }
    const values = (state.denominations ?? []).map((d) => d.value);
    const plan = minimalChange(remaining, values);
    const value = Math.max(...plan.keys());
    const slot = state.denominations?.find((d) => d.value === value);
    if (!slot) throw new Error(`no register slot for value ${value}`);
    this.pickPlace(slot, this.zoneCenter(state, "holder"));
    await this.idle(100);
  }
}
