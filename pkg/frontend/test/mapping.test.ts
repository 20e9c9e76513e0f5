import { describe, expect, it } from "vitest";

import { FrameSource, PointerMapping, quantizeT } from "../src/mapping.js";

describe("PointerMapping", () => {
  const m = new PointerMapping(800, 600);

  it("maps canvas corners to the normalized box", () => {
    expect(m.toNorm(0, 0)).toEqual({ x: -1, y: 1 });
    expect(m.toNorm(800, 600)).toEqual({ x: 1, y: -1 });
    expect(m.toNorm(400, 300)).toEqual({ x: 0, y: 0 });
  });

  it("is affine and invertible within the canvas", () => {
    for (let i = 0; i < 50; i++) {
      const px = (i * 37) % 800;
      const py = (i * 53) % 600;
      const n = m.toNorm(px, py);
      const back = m.toCanvas(n.x, n.y);
      expect(back.px).toBeCloseTo(px, 9);
      expect(back.py).toBeCloseTo(py, 9);
    }
  });

  it("flips the y axis (canvas grows down, box grows up)", () => {
    expect(m.toNorm(400, 0).y).toBe(1);
    expect(m.toNorm(400, 600).y).toBe(-1);
  });
});

describe("quantizeT", () => {
  it("rounds up onto the 50 ms grid", () => {
    expect(quantizeT(0)).toBe(0);
    expect(quantizeT(1)).toBe(50);
    expect(quantizeT(50)).toBe(50);
    expect(quantizeT(51)).toBe(100);
  });
});

describe("FrameSource", () => {
  const m = new PointerMapping(800, 600);

  it("maps pointer down to full grab and up to zero", () => {
    const src = new FrameSource(m);
    const down = src.pointerDown(400, 300, 1.0);
    expect(down.grab).toBe(1.0);
    expect(down.t).toBe(1.0);
    expect(src.grabbing).toBe(true);
    const move = src.pointerMove(500, 300);
    expect(move.grab).toBe(1.0);
    expect(move.t).toBeUndefined();
    const up = src.pointerUp(500, 300);
    expect(up.grab).toBe(0.0);
    expect(src.grabbing).toBe(false);
  });

  it("emits a hand-lost frame", () => {
    const src = new FrameSource(m);
    src.pointerDown(10, 10);
    const lost = src.handLost(2.5);
    expect(lost.hand).toBe(false);
    expect(lost.t).toBe(2.5);
    expect(src.grabbing).toBe(false);
  });

  it("produces coordinates inside the interaction box", () => {
    const src = new FrameSource(m);
    const f = src.pointerMove(799, 1);
    expect(Math.abs(f.x)).toBeLessThanOrEqual(1);
    expect(Math.abs(f.y)).toBeLessThanOrEqual(1);
  });
});
