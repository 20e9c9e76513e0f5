// Canvas <-> normalized interaction-box mapping, and pointer-to-frame
// conversion. Pointer down maps to full grab strength, up to zero; the z
// plane is fixed at 0.

import { FrameMsg, TICK_MS } from "./protocol.js";

export class PointerMapping {
  constructor(
    public width: number,
    public height: number,
  ) {}

  /** Canvas pixels to normalized [-1, 1] coordinates (y flipped: canvas grows
   * downward, the interaction box grows upward). */
  toNorm(px: number, py: number): { x: number; y: number } {
    return {
      x: (2 * px) / this.width - 1,
      y: 1 - (2 * py) / this.height,
    };
  }

  /** Inverse of toNorm; exact up to float rounding. */
  toCanvas(x: number, y: number): { px: number; py: number } {
    return {
      px: ((x + 1) * this.width) / 2,
      py: ((1 - y) * this.height) / 2,
    };
  }

  /** Scale a normalized length to pixels along x. */
  scaleX(dx: number): number {
    return (dx * this.width) / 2;
  }

  scaleY(dy: number): number {
    return (dy * this.height) / 2;
  }
}

/** Round a session time up onto the engine's tick grid. */
export function quantizeT(tMs: number, tickMs: number = TICK_MS): number {
  return Math.ceil(tMs / tickMs) * tickMs;
}

/** Tracks pointer state and turns pointer events into frame messages. */
export class FrameSource {
  private down = false;

  constructor(private mapping: PointerMapping) {}

  get grabbing(): boolean {
    return this.down;
  }

  pointerDown(px: number, py: number, tS?: number): FrameMsg {
    this.down = true;
    return this.frame(px, py, tS);
  }

  pointerMove(px: number, py: number, tS?: number): FrameMsg {
    return this.frame(px, py, tS);
  }

  pointerUp(px: number, py: number, tS?: number): FrameMsg {
    this.down = false;
    return this.frame(px, py, tS);
  }

  handLost(tS?: number): FrameMsg {
    this.down = false;
    const msg: FrameMsg = { type: "frame", x: 0, y: 0, z: 0, grab: 0, hand: false };
    if (tS !== undefined) msg.t = tS;
    return msg;
  }

  private frame(px: number, py: number, tS?: number): FrameMsg {
    const { x, y } = this.mapping.toNorm(px, py);
    const msg: FrameMsg = {
      type: "frame",
      x,
      y,
      z: 0,
      grab: this.down ? 1.0 : 0.0,
      hand: true,
    };
    if (tS !== undefined) msg.t = tS;
    return msg;
  }
}
