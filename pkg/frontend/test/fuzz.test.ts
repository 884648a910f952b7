// Fuzz against a scripted wire.  The properties under test: the client
// submits moves exactly as staged (no filtering, sorting, or legality
// screening) and renders whatever the server answers, however implausible.
// Every legality decision therefore lives on the server.

import { describe, expect, test } from "vitest";
import { DraftIncompleteError, Playground } from "../src/controller.js";
import type { FetchLike } from "../src/api.js";
import type { GameStatePayload } from "../src/protocol.js";
import { mulberry32, randInt, shuffle } from "./rng.js";

interface RecordedCall {
  url: string;
  method: string;
  body: string | null;
}

class MockWire {
  calls: RecordedCall[] = [];
  private queue: { status: number; body: unknown }[] = [];

  reply(status: number, body: unknown): this {
    this.queue.push({ status, body });
    return this;
  }

  fetchFn: FetchLike = async (url, init) => {
    this.calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? init.body : null,
    });
    const next = this.queue.shift();
    if (!next) throw new Error(`mock wire: unscripted request ${url}`);
    return new Response(JSON.stringify(next.body), {
      status: next.status,
      headers: { "content-type": "application/json" },
    });
  };

  get last(): RecordedCall {
    const call = this.calls[this.calls.length - 1];
    if (!call) throw new Error("mock wire: no calls recorded");
    return call;
  }
}

function fab(partial: Partial<GameStatePayload> = {}): GameStatePayload {
  return {
    n: 2,
    round: 0,
    phase: "awaiting_partition",
    alive: [2, 3, 4],
    picks: [1],
    discarded: [],
    pending: null,
    roles: { player1: "engine", player2: "human" },
    winner: null,
    transcript: [["pick", 1]],
    ...partial,
  };
}

async function started(
  wire: MockWire,
  state: GameStatePayload,
): Promise<Playground> {
  const pg = new Playground("http://mock", wire.fetchFn);
  wire.reply(201, { id: "s1", state });
  await pg.create({ n: state.n, human_seat: 2 });
  return pg;
}

describe("verbatim submission", () => {
  test("session creation sends the request body untouched", async () => {
    const wire = new MockWire();
    const pg = new Playground("http://mock", wire.fetchFn);
    const instance = { kind: "long_choice", n: 3, predicates: [] };
    wire.reply(201, { id: "s1", state: fab() });
    await pg.create({ n: 3, human_seat: 2, instance });
    expect(wire.last.method).toBe("POST");
    expect(wire.last.url).toBe("http://mock/api/sessions");
    expect(wire.last.body).toBe(
      JSON.stringify({ n: 3, human_seat: 2, instance }),
    );
  });

  test("picks cross the wire as given, alive or not", async () => {
    const rand = mulberry32(0xbeef);
    for (let round = 0; round < 200; round++) {
      const wire = new MockWire();
      const n = randInt(rand, 2, 8);
      const board = 2 ** n;
      const alive = shuffle(
        rand,
        Array.from({ length: board }, (_, i) => i + 1),
      ).slice(0, randInt(rand, 1, board));
      const state = fab({ n, alive, phase: "awaiting_pick" });
      const pg = await started(wire, state);

      // frequently a dead, picked, or out-of-range stone
      const stone = randInt(rand, 1, board + 4);
      const accepted = rand() < 0.6;
      const after = fab({ n, alive: alive.slice(1), picks: [stone] });
      if (accepted) wire.reply(200, { state: after });
      else wire.reply(409, { error: { code: "stone_not_alive", detail: "dead" } });

      const ok = await pg.submitPick(stone);
      expect(wire.last.method).toBe("POST");
      expect(wire.last.url).toBe("http://mock/api/sessions/s1/pick");
      expect(wire.last.body).toBe(JSON.stringify({ stone }));
      expect(ok).toBe(accepted);
      if (accepted) {
        expect(pg.view!.state).toEqual(after);
        expect(pg.view!.notice).toBeNull();
      } else {
        expect(pg.view!.state).toEqual(state);
        expect(pg.view!.notice).toEqual({ code: "stone_not_alive", detail: "dead" });
      }
    }
  });

  test("drafts submit exactly the staged group 0, in board order", async () => {
    const rand = mulberry32(0xcafe);
    for (let round = 0; round < 200; round++) {
      const wire = new MockWire();
      const n = randInt(rand, 2, 6);
      const alive = shuffle(
        rand,
        Array.from({ length: 2 ** n }, (_, i) => i + 1),
      ).slice(0, randInt(rand, 1, 2 ** n));
      const pg = await started(wire, fab({ n, alive }));

      const expected: number[] = [];
      for (const stone of alive) {
        const side = rand() < 0.5 ? 0 : 1;
        pg.draft!.assign(stone, side);
        if (side === 0) expected.push(stone);
      }
      wire.reply(200, { state: fab({ n, alive: [] }) });
      const ok = await pg.submitDraft();
      expect(ok).toBe(true);
      expect(wire.last.url).toBe("http://mock/api/sessions/s1/partition");
      expect(wire.last.body).toBe(JSON.stringify({ group0: expected }));
    }
  });

  test("an empty group 0 is submitted, not short-circuited", async () => {
    const wire = new MockWire();
    const pg = await started(wire, fab());
    for (const stone of pg.view!.state.alive) pg.draft!.assign(stone, 1);
    wire.reply(200, { state: fab({ alive: [3, 4] }) });
    await pg.submitDraft();
    expect(wire.last.body).toBe(JSON.stringify({ group0: [] }));
  });

  test("engine-step posts no body and keeps the reported move", async () => {
    const wire = new MockWire();
    const pg = await started(wire, fab({ phase: "awaiting_pick" }));
    const move = { type: "pick" as const, stone: 7 };
    wire.reply(200, { state: fab(), move });
    const got = await pg.engineStep();
    expect(wire.last.url).toBe("http://mock/api/sessions/s1/engine-step");
    expect(wire.last.body).toBeNull();
    expect(got).toEqual(move);
    expect(pg.view!.lastEngineMove).toEqual(move);
  });
});

describe("the completeness gate is the only client-side check", () => {
  test("incomplete drafts never reach the wire", async () => {
    const rand = mulberry32(0x5eed);
    for (let round = 0; round < 100; round++) {
      const wire = new MockWire();
      const alive = Array.from({ length: randInt(rand, 2, 9) }, (_, i) => i + 1);
      const pg = await started(wire, fab({ alive }));
      const skipped = alive[randInt(rand, 0, alive.length - 1)]!;
      for (const stone of alive) {
        if (stone !== skipped) pg.draft!.assign(stone, rand() < 0.5 ? 0 : 1);
      }
      const before = wire.calls.length;
      await expect(pg.submitDraft()).rejects.toThrow(DraftIncompleteError);
      expect(wire.calls.length).toBe(before);
      expect(pg.draft!.missing).toEqual([skipped]);
    }
  });

  test("direct partitions skip the gate and go out verbatim", async () => {
    // scripted callers may send anything; the server is the referee
    const wire = new MockWire();
    const pg = await started(wire, fab({ alive: [2, 3, 4] }));
    wire.reply(409, { error: { code: "not_alive", detail: "9 is not on the board" } });
    const ok = await pg.submitPartition([9, 9, 1]);
    expect(ok).toBe(false);
    expect(wire.last.body).toBe(JSON.stringify({ group0: [9, 9, 1] }));
  });
});

describe("the view is a pure projection of the last payload", () => {
  test("whatever the server says replaces the view wholesale", async () => {
    const wire = new MockWire();
    const pg = await started(wire, fab());
    // implausible payload: picks overlap alive, round runs backwards
    const weird = fab({
      round: -3,
      alive: [1, 1, 2],
      picks: [1, 2],
      winner: "player2",
      pending: { group0: [9], group1: [] },
    });
    wire.reply(200, { state: weird });
    await pg.submitPartition([2]);
    expect(pg.view!.state).toEqual(weird);
    expect(pg.view!.legalMoves).toBeNull();

    // hints are rendered verbatim too
    const hints = { pick: [99, -1] };
    wire.reply(200, { state: weird, legal_moves: hints });
    await pg.refresh();
    expect(pg.view!.legalMoves).toEqual(hints);
  });

  test("a rejection leaves the view exactly as it was", async () => {
    const wire = new MockWire();
    const initial = fab();
    const pg = await started(wire, initial);
    wire.reply(409, { error: { code: "wrong_phase", detail: "not now" } });
    await pg.submitPick(2);
    expect(pg.view!.state).toEqual(initial);
    expect(pg.view!.notice).toEqual({ code: "wrong_phase", detail: "not now" });

    wire.reply(200, { state: fab({ round: 1 }) });
    await pg.submitPartition([]);
    expect(pg.view!.notice).toBeNull();
  });

  test("a 404 flips the expired banner and keeps the last state", async () => {
    const wire = new MockWire();
    const initial = fab();
    const pg = await started(wire, initial);
    wire.reply(404, { error: { code: "unknown_session", detail: "s1" } });
    await pg.refresh();
    expect(pg.view!.expired).toBe(true);
    expect(pg.view!.notice!.code).toBe("unknown_session");
    expect(pg.view!.state).toEqual(initial);
  });

  test("transport faults propagate instead of becoming banners", async () => {
    const pg = new Playground("http://mock", async () => {
      throw new TypeError("connection refused");
    });
    await expect(pg.create({ n: 2 })).rejects.toThrow(TypeError);
  });
});
