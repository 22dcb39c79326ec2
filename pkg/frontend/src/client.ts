// Session client and view-state reducer. All game knowledge displayed by the
// UI is a direct render of server payloads; this module only accumulates them.
import type {
  CreateSessionResponse,
  PlayerId,
  QuestionPayload,
  StatePayload,
  StreamEvent,
} from "./types.js";

export interface Bubble {
  speaker: string; // "P1" | "P2" | "agent"
  text: string;
}

export interface GameControls {
  strategy: "procedural" | "diarised";
  threshold: number;
  pConfusion: number;
}

export interface SessionView {
  sessionId: string | null;
  connected: boolean;
  connectionError: string | null;
  controlsLocked: boolean;
  controls: GameControls;
  phase: string;
  round: number; // 1-based for display
  totalRounds: number;
  score: number;
  question: QuestionPayload | null;
  feed: Bubble[];
  finished: boolean;
  resultText: string | null;
}

export interface SocketLike {
  onmessage: ((event: { data: unknown }) => void) | null;
  onerror: ((event: unknown) => void) | null;
  onclose: ((event: unknown) => void) | null;
  close(): void;
}

export interface Transport {
  baseUrl: string; // e.g. "http://127.0.0.1:8000"
  fetchFn: (url: string, init?: RequestInit) => Promise<Response>;
  createSocket: (url: string) => SocketLike;
}

export function initialView(): SessionView {
  return {
    sessionId: null,
    connected: false,
    connectionError: null,
    controlsLocked: false,
    controls: { strategy: "procedural", threshold: 3, pConfusion: 0 },
    phase: "idle",
    round: 0,
    totalRounds: 3,
    score: 0,
    question: null,
    feed: [],
    finished: false,
    resultText: null,
  };
}

function applyState(view: SessionView, state: StatePayload, question: QuestionPayload): void {
  view.phase = state.phase;
  view.round = state.round + 1;
  view.score = state.score;
  view.finished = state.finished;
  view.question = question;
}

/** Fold one stream event into the view. Unknown events are ignored so a
 * noisy or newer server can never crash the client. */
export function applyEvent(view: SessionView, event: unknown): SessionView {
  if (typeof event !== "object" || event === null || !("type" in event)) {
    return view;
  }
  const message = event as StreamEvent;
  if (message.type === "error") {
    view.connectionError = message.detail ?? "stream error";
    return view;
  }
  if (message.type === "state") {
    applyState(view, message.state, message.question);
    if (message.utterance) {
      view.feed.push({ speaker: "agent", text: message.utterance });
    }
    return view;
  }
  if (message.type === "turn") {
    view.feed.push({ speaker: message.speaker, text: message.text });
    for (const action of message.actions ?? []) {
      view.feed.push({ speaker: "agent", text: action.text });
      if (action.act === "announce_result") {
        view.resultText = action.text;
      }
    }
    applyState(view, message.state, message.question);
    return view;
  }
  return view;
}

export function flagToCountryCode(flag: string): string {
  const base = 0x1f1e6;
  const letters: string[] = [];
  for (const symbol of flag) {
    const point = symbol.codePointAt(0);
    if (point === undefined || point < base || point >= base + 26) {
      throw new Error(`not a flag glyph: ${flag}`);
    }
    letters.push(String.fromCharCode(65 + point - base));
  }
  return letters.join("");
}

export class GameClient {
  private view: SessionView = initialView();
  private socket: SocketLike | null = null;
  private listeners: Array<(view: SessionView) => void> = [];

  constructor(private transport: Transport) {}

  getView(): SessionView {
    return this.view;
  }

  onChange(listener: (view: SessionView) => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.view);
    }
  }

  private wsUrl(sessionId: string): string {
    const http = this.transport.baseUrl;
    const ws = http.replace(/^http/, "ws");
    return `${ws}/sessions/${sessionId}/stream`;
  }

  async start(controls: GameControls): Promise<void> {
    if (this.view.sessionId !== null) {
      throw new Error("a game is already running");
    }
    this.view.controls = { ...controls };
    let response: Response;
    try {
      response = await this.transport.fetchFn(`${this.transport.baseUrl}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({
          strategy: controls.strategy,
          threshold: controls.threshold,
          p_confusion: controls.pConfusion,
        }),
      });
    } catch (error) {
      this.view.connectionError = `cannot reach the game server: ${error}`;
      this.notify();
      throw error;
    }
    if (!response.ok) {
      this.view.connectionError = `server rejected the game: HTTP ${response.status}`;
      this.notify();
      throw new Error(this.view.connectionError);
    }
    const created = (await response.json()) as CreateSessionResponse;
    this.view.sessionId = created.session_id;
    this.openStream(created.session_id);
    this.notify();
  }

  private openStream(sessionId: string): void {
    const socket = this.transport.createSocket(this.wsUrl(sessionId));
    this.socket = socket;
    socket.onmessage = (event) => {
      let parsed: unknown;
      try {
        parsed = JSON.parse(String(event.data));
      } catch {
        return;
      }
      applyEvent(this.view, parsed);
      this.view.connected = true;
      this.notify();
    };
    socket.onerror = () => {
      this.view.connectionError = "stream connection failed";
      this.notify();
    };
    socket.onclose = () => {
      this.view.connected = false;
      this.notify();
    };
  }

  /** Client-side gate only for obviously empty input; everything else is the
   * server's call. Returns false when the input was rejected locally. */
  async send(player: PlayerId, text: string): Promise<boolean> {
    const trimmed = text.trim();
    if (!trimmed || this.view.sessionId === null || this.view.finished) {
      return false;
    }
    this.view.controlsLocked = true;
    const response = await this.transport.fetchFn(
      `${this.transport.baseUrl}/sessions/${this.view.sessionId}/utterances`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ speaker: player, text: trimmed }),
      },
    );
    if (!response.ok) {
      this.view.connectionError = `utterance rejected: HTTP ${response.status}`;
      this.notify();
      return false;
    }
    // The feed updates when the stream echoes the turn; nothing optimistic.
    return true;
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}
