export function initialView() {
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
function applyState(view, state, question) {
    view.phase = state.phase;
    view.round = state.round + 1;
    view.score = state.score;
    view.finished = state.finished;
    view.question = question;
}
/** Fold one stream event into the view. Unknown events are ignored so a
 * noisy or newer server can never crash the client. */
export function applyEvent(view, event) {
    if (typeof event !== "object" || event === null || !("type" in event)) {
        return view;
    }
    const message = event;
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
export function flagToCountryCode(flag) {
    const base = 0x1f1e6;
    const letters = [];
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
    constructor(transport) {
        this.transport = transport;
        this.view = initialView();
        this.socket = null;
        this.listeners = [];
    }
    getView() {
        return this.view;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    notify() {
        for (const listener of this.listeners) {
            listener(this.view);
        }
    }
    wsUrl(sessionId) {
        const http = this.transport.baseUrl;
        const ws = http.replace(/^http/, "ws");
        return `${ws}/sessions/${sessionId}/stream`;
    }
    async start(controls) {
        if (this.view.sessionId !== null) {
            throw new Error("a game is already running");
        }
        this.view.controls = { ...controls };
        let response;
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
        }
        catch (error) {
            this.view.connectionError = `cannot reach the game server: ${error}`;
            this.notify();
            throw error;
        }
        if (!response.ok) {
            this.view.connectionError = `server rejected the game: HTTP ${response.status}`;
            this.notify();
            throw new Error(this.view.connectionError);
        }
        const created = (await response.json());
        this.view.sessionId = created.session_id;
        this.openStream(created.session_id);
        this.notify();
    }
    openStream(sessionId) {
        const socket = this.transport.createSocket(this.wsUrl(sessionId));
        this.socket = socket;
        socket.onmessage = (event) => {
            let parsed;
            try {
                parsed = JSON.parse(String(event.data));
            }
            catch {
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
    async send(player, text) {
        const trimmed = text.trim();
        if (!trimmed || this.view.sessionId === null || this.view.finished) {
            return false;
        }
        this.view.controlsLocked = true;
        const response = await this.transport.fetchFn(`${this.transport.baseUrl}/sessions/${this.view.sessionId}/utterances`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ speaker: player, text: trimmed }),
        });
        if (!response.ok) {
            this.view.connectionError = `utterance rejected: HTTP ${response.status}`;
            this.notify();
            return false;
        }
        // The feed updates when the stream echoes the turn; nothing optimistic.
        return true;
    }
    close() {
        this.socket?.close();
        this.socket = null;
    }
}
