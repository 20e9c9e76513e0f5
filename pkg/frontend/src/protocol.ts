// Wire protocol spoken by the live session service. Every message carries a
// `type` field; the full set is: create, created, frame, snapshot, scent,
// set_difficulty, metrics, finalize, error.

export const TICK_MS = 50;
export const SNAPSHOT_MS = 100;

export type GameName = "dimsum" | "steamer" | "cashier";

export interface DifficultyParams {
  dimsum_item_count: number;
  memorize_duration_s: number;
  dimsum_time_limit_s: number;
  steamer_item_count: number;
  cook_time_s: number;
  overcook_time_s: number;
  steamer_time_limit_s: number;
  cashier_trial_count: number;
  cashier_time_limit_s: number;
  max_change_amount: number;
}

export interface Profile {
  participant_id: string;
  age: number;
  gender: "male" | "female" | "other";
  education_band: string;
  moca_score: number;
}

export interface CreatedMsg {
  type: "created";
  session_id: string;
  tick_ms: number;
  snapshot_ms: number;
  tutorial_ms: number;
  params: DifficultyParams;
}

export interface FrameMsg {
  type: "frame";
  t?: number; // omitted in realtime mode: the server stamps arrival ticks
  x: number;
  y: number;
  z: number;
  grab: number;
  hand: boolean;
}

export type Zone = [number, number, number, number]; // x0, y0, x1, y1

export interface ItemState {
  id: string;
  x: number;
  y: number;
  target?: boolean;
  placed?: boolean;
  stage?: string;
  cue?: "none" | "green" | "red";
  steam_clock_s?: number | null;
  served_state?: string | null;
}

export interface DenomSlot {
  value: number;
  kind: "coin" | "note";
  x: number;
  y: number;
}

export interface TrialState {
  index: number;
  bill: number;
  payment: number;
  placed: number[];
  placed_sum: number;
  status: "active" | "completed" | "timed_out";
  remaining_s: number;
}

export interface GameState {
  game: GameName;
  phase: string;
  clock_s: number;
  items?: ItemState[];
  remaining?: string[];
  held?: string | { value: number; kind: string } | null;
  held_pos?: number[] | null;
  show_targets?: boolean;
  zones: Record<string, Zone>;
  trial?: TrialState | null;
  trials_done?: number;
  trial_count?: number;
  denominations?: DenomSlot[];
}

export interface SnapshotMsg {
  type: "snapshot";
  session_id: string;
  seq: number;
  t: number;
  game: GameName;
  state: GameState;
}

export interface ScentMsg {
  type: "scent";
  session_id: string;
  t: number;
  scent_id: string;
  duration_ms: number;
  merged: number;
  status: string;
}

export interface TaskMetrics {
  game: GameName;
  required_actions: number;
  incorrect_actions: number;
  missed_actions: number;
  total_time_s: number;
  inaccuracy_pct: number;
  omission_pct: number;
}

export interface MetricsMsg {
  type: "metrics";
  session_id: string;
  finalized: boolean;
  t: number;
  metrics: Record<string, TaskMetrics>;
  counts: Record<string, { correct: number; inaccuracy: number; omission: number }>;
  record?: Record<string, unknown>;
}

export interface ErrorMsg {
  type: "error";
  code: string;
  message: string;
}

export type ServerMsg = SnapshotMsg | ScentMsg | MetricsMsg | ErrorMsg;

const SERVER_TYPES = new Set(["snapshot", "scent", "metrics", "error"]);

export function parseServerMsg(data: string): ServerMsg {
  const msg = JSON.parse(data) as { type?: string };
  if (!msg.type || !SERVER_TYPES.has(msg.type)) {
    throw new Error(`unexpected server message type: ${String(msg.type)}`);
  }
  return msg as ServerMsg;
}

export const DEFAULT_PARAMS: DifficultyParams = {
  dimsum_item_count: 6,
  memorize_duration_s: 10,
  dimsum_time_limit_s: 120,
  steamer_item_count: 4,
  cook_time_s: 20,
  overcook_time_s: 35,
  steamer_time_limit_s: 300,
  cashier_trial_count: 5,
  cashier_time_limit_s: 90,
  max_change_amount: 100,
};

// Client-side mirror of the engine's parameter checks, so the researcher
// panel can reject bad edits without a round trip.
export function validateDifficulty(p: DifficultyParams): string[] {
  const problems: string[] = [];
  const positive: Array<[keyof DifficultyParams, string]> = [
    ["memorize_duration_s", "memorize duration"],
    ["dimsum_time_limit_s", "selection time limit"],
    ["cook_time_s", "cook time"],
    ["steamer_time_limit_s", "steamer time limit"],
    ["cashier_time_limit_s", "trial time limit"],
    ["max_change_amount", "max change"],
  ];
  for (const [key, label] of positive) {
    if (!(p[key] > 0)) problems.push(`${label} must be positive`);
  }
  if (!(Number.isInteger(p.dimsum_item_count) && p.dimsum_item_count >= 1)) {
    problems.push("item count must be an integer >= 1");
  }
  if (!(Number.isInteger(p.steamer_item_count) && p.steamer_item_count >= 1)) {
    problems.push("steamer item count must be an integer >= 1");
  }
  if (!(Number.isInteger(p.cashier_trial_count) && p.cashier_trial_count >= 1)) {
    problems.push("trial count must be an integer >= 1");
  }
  if (!(p.overcook_time_s > p.cook_time_s)) {
    problems.push("overcook time must exceed cook time");
  }
  return problems;
}

// Greedy largest-first change set over the register's denomination values;
// used for tutorial hints and by the scripted pointer driver.
export function minimalChange(change: number, values: number[]): Map<number, number> {
  if (change < 0 || !Number.isInteger(change)) throw new Error(`bad change amount ${change}`);
  const sorted = [...new Set(values)].sort((a, b) => b - a);
  const out = new Map<number, number>();
  let rest = change;
  for (const v of sorted) {
    if (rest <= 0) break;
    const q = Math.floor(rest / v);
    if (q > 0) {
      out.set(v, q);
      rest -= q * v;
    }
  }
  if (rest !== 0) throw new Error(`change ${change} not representable`);
  return out;
}
