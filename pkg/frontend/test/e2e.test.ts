// End-to-end tests against the real live service: a scripted stream client
// replaying a bundled script must reproduce the offline run exactly, and the
// scripted pointer driver must play all three games to completion through the
// client pipeline.

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { SessionClient, WsLike } from "../src/client.js";
import { PointerMapping } from "../src/mapping.js";
import { ScriptedDriver } from "../src/driver.js";
import { DEFAULT_PARAMS, FrameMsg } from "../src/protocol.js";

const ROOT = resolve(__dirname, "..", "..");
const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

const PROFILE = {
  participant_id: "p001",
  age: 67,
  gender: "female" as const,
  education_band: "10-12y",
  moca_score: 27,
};

const FAST_PARAMS = {
  ...DEFAULT_PARAMS,
  dimsum_item_count: 3,
  memorize_duration_s: 1.0,
  dimsum_time_limit_s: 20.0,
  steamer_item_count: 2,
  cook_time_s: 2.0,
  overcook_time_s: 4.0,
  steamer_time_limit_s: 30.0,
  cashier_trial_count: 2,
  cashier_time_limit_s: 10.0,
};

let server: ChildProcess;
let workdir: string;

const wsFactory = (url: string) => new WebSocket(url) as unknown as WsLike;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/api/sessions/_probe/metrics`);
      if (resp.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "teahouse-e2e-"));
  server = spawn(
    "python3",
    ["-m", "teahouse.cli", "serve", "--port", String(PORT), "--no-realtime"],
    { cwd: ROOT, stdio: "ignore" },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

interface ScriptFrame {
  t: number;
  x: number;
  y: number;
  z: number;
  grab: number;
  hand: number;
}

function loadBundledScript(name: string): ScriptFrame[] {
  const path = join(ROOT, "src", "teahouse", "data", "scripts", `${name}.jsonl`);
  const lines = readFileSync(path, "utf-8").trim().split("\n");
  return lines.slice(1).map((line) => JSON.parse(line) as ScriptFrame);
}

describe("online/offline equivalence", () => {
  it("replaying a bundled script through the stream matches the offline run", async () => {
    // Offline reference record via the headless CLI.
    const profilePath = join(workdir, "profile.json");
    writeFileSync(profilePath, JSON.stringify(PROFILE));
    const offlinePath = join(workdir, "offline.json");
    execFileSync(
      "python3",
      [
        "-m",
        "teahouse.cli",
        "simulate",
        "--profile",
        profilePath,
        "--script",
        join(ROOT, "src", "teahouse", "data", "scripts", "session_errors.jsonl"),
        "--seed",
        "42",
        "--out",
        offlinePath,
      ],
      { cwd: ROOT },
    );
    const offline = JSON.parse(readFileSync(offlinePath, "utf-8"));

    // Same script over the live stream.
    const client = new SessionClient(BASE, { wsFactory });
    await client.create(PROFILE, {}, 42, 30_000);
    await client.connect();
    for (const f of loadBundledScript("session_errors")) {
      const frame: FrameMsg = {
        type: "frame",
        t: f.t,
        x: f.x,
        y: f.y,
        z: f.z,
        grab: f.grab,
        hand: f.hand !== 0,
      };
      client.sendFrame(frame);
    }
    // Finalize over the stream so it is ordered after every frame, then
    // fetch the (idempotent) finalized record over HTTP.
    client.sendFinalize();
    await client.waitForMetrics();
    const finalMsg = await client.finalize();
    client.close();

    expect(finalMsg.finalized).toBe(true);
    const online = finalMsg.record as Record<string, unknown>;
    expect(online.events).toEqual(offline.events);
    expect(online.metrics).toEqual(offline.metrics);
    expect(online.seed).toBe(offline.seed);
    const metrics = online.metrics as Record<string, { omission_pct: number }>;
    expect(metrics.steamer.omission_pct).toBeCloseTo(62.5, 6);
  });
});

describe("playability", () => {
  it("the scripted pointer driver completes all three games end to end", async () => {
    const client = new SessionClient(BASE, { wsFactory });
    await client.create(PROFILE, FAST_PARAMS, 7, 2000);
    await client.connect();
    const driver = new ScriptedDriver(client, new PointerMapping(800, 600));

    // Mid-session difficulty edit once the steamer is underway.
    const editApplied = (async () => {
      for (let i = 0; i < 2000; i++) {
        if (client.view.snapshot?.game === "steamer") {
          await client.setDifficulty({ ...FAST_PARAMS, max_change_amount: 50 });
          return true;
        }
        await new Promise((r) => setTimeout(r, 20));
      }
      return false;
    })();

    const report = await driver.run();
    expect(await editApplied).toBe(true);
    const finalMsg = await client.finalize();
    client.close();

    expect(report.gamesCompleted).toEqual(["dimsum", "steamer", "cashier"]);
    expect(finalMsg.finalized).toBe(true);
    // Perfect scripted play: nothing missed, nothing wrong.
    for (const game of ["dimsum", "steamer", "cashier"]) {
      expect(finalMsg.metrics[game].omission_pct).toBe(0);
      expect(finalMsg.metrics[game].inaccuracy_pct).toBe(0);
    }
    // The difficulty edit is recorded in the finalized session config.
    const record = finalMsg.record as { params: { max_change_amount: number } };
    expect(record.params.max_change_amount).toBe(50);
  });

  it("difficulty edits apply from the next trial", async () => {
    const client = new SessionClient(BASE, { wsFactory });
    await client.create(PROFILE, FAST_PARAMS, 11, 1000);
    await client.connect();
    // Let the trials time out with a shortened limit applied mid-session.
    await client.setDifficulty({ ...FAST_PARAMS, cashier_time_limit_s: 4.0 });
    const finalMsg = await client.finalize();
    client.close();

    const record = finalMsg.record as {
      params: { cashier_time_limit_s: number };
      events: Array<{ kind: string; game: string; t: number }>;
    };
    expect(record.params.cashier_time_limit_s).toBe(4.0);
    const trialStarts = record.events
      .filter((e) => e.game === "cashier" && e.kind === "trial_start")
      .map((e) => e.t);
    expect(trialStarts.length).toBe(2);
    // Both trials run under the new 4 s limit (timeout spacing).
    expect(trialStarts[1]! - trialStarts[0]!).toBeCloseTo(4.0, 6);
  });

  it("the post-session metrics view matches the engine record", async () => {
    const client = new SessionClient(BASE, { wsFactory });
    await client.create(PROFILE, FAST_PARAMS, 13, 1000);
    await client.connect();
    const finalMsg = await client.finalize();
    client.close();

    const { metricsRows } = await import("../src/viewmodel.js");
    const rows = metricsRows(finalMsg.metrics);
    const record = finalMsg.record as {
      metrics: Record<string, { omission_pct: number; total_time_s: number }>;
    };
    for (const row of rows) {
      const key = row.game === "Dim Sum" ? "dimsum" : row.game.toLowerCase();
      expect(row.omission).toBe(record.metrics[key]!.omission_pct.toFixed(1));
      expect(row.time).toBe(record.metrics[key]!.total_time_s.toFixed(1));
    }
  });
});
