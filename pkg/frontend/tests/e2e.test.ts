// Scripted two-player walkthrough against a real server instance: the worked
// dialogue produces the confirmation prompt after the fifth player message,
// then the remaining rounds are played out to the final result screen.
import assert from "node:assert/strict";
import { spawn, type ChildProcess } from "node:child_process";
import { after, before, test } from "node:test";
import WebSocket from "ws";

import {
  GameClient,
  flagToCountryCode,
  type SessionView,
  type SocketLike,
} from "../src/client.js";

const PORT = 18000 + (process.pid % 2000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function serverReady(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/sessions/probe/state`);
      if (response.status === 404) return;
    } catch {
      // not yet listening
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("server did not come up in time");
}

before(async () => {
  server = spawn(
    "python3",
    ["-m", "flagquiz.cli", "serve", "--port", String(PORT), "--host", "127.0.0.1",
     "--log-dir", "dist-test/game_logs"],
    { stdio: "ignore" },
  );
  await serverReady();
});

after(async () => {
  server.kill("SIGTERM");
  const gone = new Promise<void>((resolve) => server.once("exit", () => resolve()));
  const grace = new Promise<void>((resolve) => setTimeout(resolve, 3000).unref());
  await Promise.race([gone, grace]);
  if (server.exitCode === null) {
    server.kill("SIGKILL");
  }
});

function makeClient(): GameClient {
  return new GameClient({
    baseUrl: BASE,
    fetchFn: (url, init) => fetch(url, init),
    createSocket: (url) => new WebSocket(url) as unknown as SocketLike,
  });
}

async function waitFor(
  client: GameClient,
  predicate: (view: SessionView) => boolean,
  what: string,
  timeoutMs = 10000,
): Promise<SessionView> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate(client.getView())) return client.getView();
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error(`timed out waiting for ${what}`);
}

function agentBubbles(view: SessionView): string[] {
  return view.feed.filter((b) => b.speaker === "agent").map((b) => b.text);
}

function currentTargetName(view: SessionView): string {
  const question = view.question;
  assert.ok(question, "question must be present");
  const code = flagToCountryCode(question.flag);
  const index = question.option_codes.indexOf(code);
  assert.notEqual(index, -1, "flag must belong to one of the options");
  return question.options[index]!;
}

test("worked two-player walkthrough to the final result screen", async () => {
  const client = makeClient();
  await client.start({ strategy: "procedural", threshold: 3, pConfusion: 0 });
  let view = await waitFor(client, (v) => v.question !== null && v.feed.length > 0, "opening question");
  assert.equal(view.round, 1);
  assert.equal(view.question!.options.length, 4);

  const walkthrough: Array<["P1" | "P2", string]> = [
    ["P1", "Hello!"],
    ["P1", "I'm pretty sure it is not Antigua and Barbuda."],
    ["P2", "Yeah no way it's Antigua and Barbuda."],
    ["P1", "I would rather go for Christmas Island, what do you think?"],
    ["P2", "Sure, let's go for Christmas Island"],
  ];
  for (const [index, [player, text]] of walkthrough.entries()) {
    assert.equal(await client.send(player, text), true);
    await waitFor(
      client,
      (v) => v.feed.filter((b) => b.speaker !== "agent").length === index + 1,
      `player message ${index + 1}`,
    );
    const confirmations = agentBubbles(client.getView()).filter((text) =>
      text.includes("final answer?"),
    );
    if (index < walkthrough.length - 1) {
      assert.equal(confirmations.length, 0, "no confirmation before the fifth message");
    }
  }
  view = client.getView();
  const confirmations = agentBubbles(view).filter((text) => text.includes("final answer?"));
  assert.equal(confirmations.length, 1, "confirmation prompt after the fifth player message");
  assert.match(confirmations[0]!, /Christmas Island/);

  // Answer the confirmation; the engine scores it and moves to round 2.
  await client.send("P1", "yes");
  view = await waitFor(client, (v) => v.round === 2, "round 2");

  for (const round of [2, 3]) {
    const name = currentTargetName(client.getView());
    await client.send("P1", `I think it's ${name}`);
    await client.send("P2", "Yes, I agree.");
    await waitFor(
      client,
      (v) => agentBubbles(v).filter((t) => t.includes("final answer?")).length === round,
      `confirmation in round ${round}`,
    );
    await client.send("P1", "yes");
    await waitFor(
      client,
      (v) => (round < 3 ? v.round === round + 1 : v.finished),
      `end of round ${round}`,
    );
  }

  view = client.getView();
  assert.equal(view.finished, true, "three rounds complete the game");
  assert.ok(view.resultText, "final result screen is shown");
  assert.match(view.resultText!, /out of 3/);
  assert.ok(view.score >= 2, "the two scripted rounds are always correct");
  client.close();
});

test("two concurrent browser sessions stay isolated", async () => {
  const clientA = makeClient();
  const clientB = makeClient();
  await clientA.start({ strategy: "procedural", threshold: 3, pConfusion: 0 });
  await clientB.start({ strategy: "diarised", threshold: 3, pConfusion: 0 });
  await waitFor(clientA, (v) => v.feed.length > 0, "A opening");
  await waitFor(clientB, (v) => v.feed.length > 0, "B opening");

  await clientA.send("P1", "only in game A");
  await waitFor(clientA, (v) => v.feed.some((b) => b.text === "only in game A"), "A echo");
  await new Promise((resolve) => setTimeout(resolve, 200));
  assert.ok(!clientB.getView().feed.some((b) => b.text === "only in game A"));
  clientA.close();
  clientB.close();
});
