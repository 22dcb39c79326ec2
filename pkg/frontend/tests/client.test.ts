import assert from "node:assert/strict";
import { test } from "node:test";

import {
  GameClient,
  SocketLike,
  Transport,
  applyEvent,
  flagToCountryCode,
  initialView,
} from "../src/client.js";
import type { QuestionPayload, StatePayload } from "../src/types.js";

function statePayload(overrides: Partial<StatePayload> = {}): StatePayload {
  return {
    phase: "listening",
    round: 0,
    score: 0,
    strategy: "procedural",
    disagreement_count: 0,
    pending_candidate: null,
    clue_offered: false,
    system_question_pending: false,
    strategy_state: {},
    finished: false,
    ...overrides,
  };
}

function questionPayload(): QuestionPayload {
  return {
    round: 0,
    flag: "\u{1F1E8}\u{1F1FD}",
    options: ["Christmas Island", "Montserrat", "Czechia", "Antigua and Barbuda"],
    option_codes: ["CX", "MS", "CZ", "AG"],
  };
}

function turnEvent(text: string, speaker = "P1", actions: Array<{ act: string; text: string }> = []) {
  return {
    type: "turn",
    session_id: "s",
    turn_id: 1,
    speaker,
    observed_speaker: speaker,
    text,
    nlu: { intent: "out_of_scope", entity: null, match_score: null, matched_surface: null },
    actions: actions.map((a) => ({ ...a, payload: {} })),
    state: statePayload(),
    question: questionPayload(),
  };
}

test("snapshot then turns build the feed in stream order", () => {
  const view = initialView();
  applyEvent(view, {
    type: "state",
    session_id: "s",
    utterance: "Here is the first question",
    state: statePayload(),
    question: questionPayload(),
  });
  applyEvent(view, turnEvent("hello there"));
  applyEvent(view, turnEvent("is it Czechia?", "P2", [{ act: "confirm_answer", text: "Final answer?" }]));
  assert.deepEqual(
    view.feed.map((b) => `${b.speaker}:${b.text}`),
    [
      "agent:Here is the first question",
      "P1:hello there",
      "P2:is it Czechia?",
      "agent:Final answer?",
    ],
  );
  assert.equal(view.round, 1);
  assert.equal(view.question?.options.length, 4);
});

test("announce_result fills the result banner", () => {
  const view = initialView();
  applyEvent(
    view,
    turnEvent("yes", "P1", [
      { act: "feedback_correct", text: "Correct!" },
      { act: "announce_result", text: "Final score: 3 out of 3." },
    ]),
  );
  assert.equal(view.resultText, "Final score: 3 out of 3.");
});

test("fuzzed junk events never crash the reducer and never reorder the feed", () => {
  const view = initialView();
  let seed = 1234567;
  const rand = () => {
    // Small deterministic LCG; keeps the fuzz reproducible.
    seed = (seed * 1103515245 + 12345) % 2147483648;
    return seed / 2147483648;
  };
  const expected: string[] = [];
  for (let i = 0; i < 2000; i++) {
    const roll = rand();
    if (roll < 0.25) {
      applyEvent(view, { type: "mystery", anything: i });
    } else if (roll < 0.4) {
      applyEvent(view, null);
    } else if (roll < 0.5) {
      applyEvent(view, "garbage");
    } else if (roll < 0.6) {
      applyEvent(view, { type: "error", detail: `boom ${i}` });
    } else {
      const text = `msg-${i}`;
      applyEvent(view, turnEvent(text));
      expected.push(text);
    }
  }
  const playerTexts = view.feed.filter((b) => b.speaker === "P1").map((b) => b.text);
  assert.deepEqual(playerTexts, expected);
});

interface Recorded {
  url: string;
  body: unknown;
}

function fakeTransport(): { transport: Transport; calls: Recorded[]; sockets: SocketLike[] } {
  const calls: Recorded[] = [];
  const sockets: SocketLike[] = [];
  const transport: Transport = {
    baseUrl: "http://test",
    fetchFn: async (url, init) => {
      calls.push({ url, body: init?.body ? JSON.parse(String(init.body)) : null });
      const payload = url.endsWith("/sessions")
        ? {
            session_id: "abc",
            utterance: "welcome",
            question: questionPayload(),
            state: statePayload(),
          }
        : { ok: true };
      return new Response(JSON.stringify(payload), { status: 200 });
    },
    createSocket: () => {
      const socket: SocketLike = { onmessage: null, onerror: null, onclose: null, close: () => {} };
      sockets.push(socket);
      return socket;
    },
  };
  return { transport, calls, sockets };
}

test("start opens the stream and locks controls after the first utterance", async () => {
  const { transport, calls, sockets } = fakeTransport();
  const client = new GameClient(transport);
  await client.start({ strategy: "diarised", threshold: 4, pConfusion: 0.2 });
  assert.equal(client.getView().sessionId, "abc");
  assert.equal(sockets.length, 1);
  assert.deepEqual(calls[0]!.body, { strategy: "diarised", threshold: 4, p_confusion: 0.2 });
  assert.equal(client.getView().controlsLocked, false);

  const accepted = await client.send("P1", "I think it's Czechia");
  assert.equal(accepted, true);
  assert.equal(client.getView().controlsLocked, true);
  await assert.rejects(() => client.start({ strategy: "procedural", threshold: 3, pConfusion: 0 }));
});

test("empty input is rejected client-side without any request", async () => {
  const { transport, calls } = fakeTransport();
  const client = new GameClient(transport);
  await client.start({ strategy: "procedural", threshold: 3, pConfusion: 0 });
  const before = calls.length;
  assert.equal(await client.send("P1", "   "), false);
  assert.equal(await client.send("P2", ""), false);
  assert.equal(calls.length, before);
});

test("an unreachable server surfaces a visible connection error", async () => {
  const transport: Transport = {
    baseUrl: "http://down",
    fetchFn: async () => {
      throw new Error("ECONNREFUSED");
    },
    createSocket: () => ({ onmessage: null, onerror: null, onclose: null, close: () => {} }),
  };
  const client = new GameClient(transport);
  await assert.rejects(() => client.start({ strategy: "procedural", threshold: 3, pConfusion: 0 }));
  assert.match(client.getView().connectionError ?? "", /cannot reach/);
});

test("flag glyphs decode back to country codes", () => {
  assert.equal(flagToCountryCode("\u{1F1EB}\u{1F1F7}"), "FR");
  assert.equal(flagToCountryCode("\u{1F1E8}\u{1F1FD}"), "CX");
  assert.throws(() => flagToCountryCode("xy"));
});
