// Client-side session view. The engine is the single source of truth: this
// model only mirrors the latest snapshot (discarding stale sequence numbers),
// active scent badges, and the last metrics message. Reloading mid-session
// loses nothing that the next snapshot does not restore.

import { MetricsMsg, ScentMsg, SnapshotMsg, TaskMetrics } from "./protocol.js";

export interface ScentBadge {
  scentId: string;
  startT: number;
  untilT: number;
}

export class SessionView {
  snapshot: SnapshotMsg | null = null;
  metrics: MetricsMsg | null = null;
  badges: ScentBadge[] = [];
  staleDropped = 0;
  lastError: string | null = null;

  get seq(): number {
    return this.snapshot ? this.snapshot.seq : 0;
  }

  /** Returns false (and drops the message) if it is not newer than the
   * current snapshot, e.g. a replayed catch-up after reconnect. */
  applySnapshot(msg: SnapshotMsg): boolean {
    if (this.snapshot && msg.seq <= this.snapshot.seq) {
      this.staleDropped += 1;
      return false;
    }
    this.snapshot = msg;
    this.expireBadges(msg.t);
    return true;
  }

  applyScent(msg: ScentMsg): void {
    this.badges.push({
      scentId: msg.scent_id,
      startT: msg.t,
      untilT: msg.t + msg.duration_ms / 1000,
    });
  }

  applyMetrics(msg: MetricsMsg): void {
    this.metrics = msg;
  }

  applyError(message: string): void {
    this.lastError = message;
  }

  activeBadges(t: number): ScentBadge[] {
    return this.badges.filter((b) => b.startT <= t && t < b.untilT);
  }

  private expireBadges(t: number): void {
    this.badges = this.badges.filter((b) => t < b.untilT + 5); // linger briefly
  }
}

export interface MetricsRow {
  game: string;
  inaccuracy: string;
  omission: string;
  time: string;
}

const GAME_LABELS: Record<string, string> = {
  dimsum: "Dim Sum",
  steamer: "Steamer",
  cashier: "Cashier",
};

/** Rows for the post-session metrics table, one per task, formatted the same
 * way as the engine's reports (one decimal place). */
export function metricsRows(metrics: Record<string, TaskMetrics>): MetricsRow[] {
  return Object.entries(metrics).map(([game, m]) => ({
    game: GAME_LABELS[game] ?? game,
    inaccuracy: m.inaccuracy_pct.toFixed(1),
    omission: m.omission_pct.toFixed(1),
    time: m.total_time_s.toFixed(1),
  }));
}

/** Deci-units to a display currency string (one deci-unit = 10 cents). */
export function money(deciUnits: number): string {
  return `$${(deciUnits / 10).toFixed(1)}`;
}
