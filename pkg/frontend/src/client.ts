// Session client: request/response endpoints plus the frame/snapshot stream.
// Works against both browser WebSocket and any compatible implementation
// injected for tests. Reconnects keep the same session; stale snapshots are
// discarded by sequence number.

import {
  CreatedMsg,
  DifficultyParams,
  ErrorMsg,
  FrameMsg,
  MetricsMsg,
  Profile,
  parseServerMsg,
  ServerMsg,
} from "./protocol.js";
import { SessionView } from "./viewmodel.js";

export interface WsLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type WsFactory = (url: string) => WsLike;

export interface ClientOptions {
  wsFactory?: WsFactory;
  fetchImpl?: typeof fetch;
  reconnectDelayMs?: number;
  maxReconnects?: number;
}

export class ServiceError extends Error {
  constructor(
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function expectJson<T>(resp: Response): Promise<T> {
  const body = (await resp.json()) as T | ErrorMsg;
  if (typeof body === "object" && body !== null && (body as ErrorMsg).type === "error") {
    const err = body as ErrorMsg;
    throw new ServiceError(err.code, err.message);
  }
  return body as T;
}

export class SessionClient {
  readonly view = new SessionView();
  sessionId: string | null = null;
  created: CreatedMsg | null = null;
  onMessage: ((msg: ServerMsg) => void) | null = null;
  private ws: WsLike | null = null;
  private wsFactory: WsFactory;
  private fetchImpl: typeof fetch;
  private reconnectDelayMs: number;
  private maxReconnects: number;
  private reconnects = 0;
  private closed = false;
  private snapshotWaiters: Array<() => void> = [];

  constructor(
    private baseUrl: string,
    opts: ClientOptions = {},
  ) {
    this.wsFactory =
      opts.wsFactory ?? ((url) => new (globalThis as any).WebSocket(url) as WsLike);
    this.fetchImpl = opts.fetchImpl ?? fetch.bind(globalThis);
    this.reconnectDelayMs = opts.reconnectDelayMs ?? 500;
    this.maxReconnects = opts.maxReconnects ?? 5;
  }

  async create(
    profile: Profile,
    params?: Partial<DifficultyParams>,
    seed = 0,
    tutorialMs = 30_000,
  ): Promise<CreatedMsg> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        type: "create",
        profile,
        params: params ?? {},
        seed,
        tutorial_ms: tutorialMs,
      }),
    });
    const created = await expectJson<CreatedMsg>(resp);
    this.sessionId = created.session_id;
    this.created = created;
    return created;
  }

  get streamUrl(): string {
    const ws = this.baseUrl.replace(/^http/, "ws");
    return `${ws}/api/sessions/${this.sessionId}/stream`;
  }

  connect(): Promise<void> {
    if (!this.sessionId) throw new ServiceError("state", "create a session first");
    this.closed = false;
    return this.openSocket();
  }

  private openSocket(): Promise<void> {
    return new Promise((resolve, reject) => {
      const ws = this.wsFactory(this.streamUrl);
      this.ws = ws;
      ws.onopen = () => {
        this.reconnects = 0;
        resolve();
      };
      ws.onmessage = (ev) => this.handleMessage(String(ev.data));
      ws.onerror = () => {
        reject(new ServiceError("stream", "stream connection failed"));
      };
      ws.onclose = () => {
        if (this.closed) return;
        if (this.reconnects < this.maxReconnects) {
          this.reconnects += 1;
          setTimeout(() => void this.openSocket().catch(() => undefined), this.reconnectDelayMs);
        }
      };
    });
  }

  private handleMessage(data: string): void {
    const msg = parseServerMsg(data);
    switch (msg.type) {
      case "snapshot":
        if (this.view.applySnapshot(msg)) this.notifySnapshot();
        break;
      case "scent":
        this.view.applyScent(msg);
        break;
      case "metrics":
        this.view.applyMetrics(msg);
        this.notifySnapshot(); // metrics also unblocks waiters at session end
        break;
      case "error":
        this.view.applyError(msg.message);
        break;
    }
    this.onMessage?.(msg);
  }

  private notifySnapshot(): void {
    const waiters = this.snapshotWaiters;
    this.snapshotWaiters = [];
    for (const w of waiters) w();
  }

  /** Resolves when the view holds a snapshot at or past session time tS (or
   * a metrics message arrives, meaning the session ran out). */
  waitForSnapshot(tS: number, timeoutMs = 10_000): Promise<void> {
    if (this.view.snapshot && this.view.snapshot.t >= tS) return Promise.resolve();
    if (this.view.metrics?.finalized) return Promise.resolve();
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new ServiceError("timeout", `no snapshot at t=${tS}`)),
        timeoutMs,
      );
      const check = () => {
        if (
          (this.view.snapshot && this.view.snapshot.t >= tS) ||
          this.view.metrics !== null
        ) {
          clearTimeout(timer);
          resolve();
        } else {
          this.snapshotWaiters.push(check);
        }
      };
      this.snapshotWaiters.push(check);
    });
  }

  sendFrame(frame: FrameMsg): void {
    if (!this.ws) throw new ServiceError("state", "stream not connected");
    this.ws.send(JSON.stringify(frame));
  }

  /** Finalize over the stream: ordered after every frame already sent. */
  sendFinalize(): void {
    if (!this.ws) throw new ServiceError("state", "stream not connected");
    this.ws.send(JSON.stringify({ type: "finalize" }));
  }

  /** Resolves once a metrics message has arrived (e.g. after sendFinalize). */
  waitForMetrics(timeoutMs = 60_000): Promise<MetricsMsg> {
    if (this.view.metrics) return Promise.resolve(this.view.metrics);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new ServiceError("timeout", "no metrics message")),
        timeoutMs,
      );
      const check = () => {
        if (this.view.metrics) {
          clearTimeout(timer);
          resolve(this.view.metrics);
        } else {
          this.snapshotWaiters.push(check);
        }
      };
      this.snapshotWaiters.push(check);
    });
  }

  async setDifficulty(params: DifficultyParams): Promise<void> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/api/sessions/${this.sessionId}/difficulty`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ type: "set_difficulty", params }),
      },
    );
    await expectJson<{ type: "set_difficulty"; ok: boolean }>(resp);
  }

  async metrics(): Promise<MetricsMsg> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/sessions/${this.sessionId}/metrics`);
    return expectJson<MetricsMsg>(resp);
  }

  async finalize(): Promise<MetricsMsg> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/api/sessions/${this.sessionId}/finalize`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ type: "finalize" }),
      },
    );
    const msg = await expectJson<MetricsMsg>(resp);
    this.view.applyMetrics(msg);
    return msg;
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
    this.ws = null;
  }
}
