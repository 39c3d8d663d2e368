import { describe, expect, it } from "vitest";

import {
  applyAssume,
  applyResolve,
  asReply,
  Client,
  failed,
  goal,
  httpPoster,
  listRules,
  ProtocolError,
  qed,
} from "../src/protocol.js";

const state = {
  proofId: 3,
  thy: "IPL",
  goal: "Tr(A --> A)",
  pretty: "|- ?G1",
  ngoals: 1,
  subgoals: [
    {
      pretty: "Tr(A) ==> Tr(A)",
      params: [],
      asms: ["Tr(A)"],
      concl: "Tr(A)",
    },
  ],
  done: false,
};

describe("command constructors", () => {
  it("build the documented shapes", () => {
    expect(goal("IPL", "Tr(A)")).toEqual({
      cmd: "goal",
      thy: "IPL",
      prop: "Tr(A)",
    });
    expect(applyAssume(2, 1)).toEqual({
      cmd: "apply",
      proofId: 2,
      tactic: { assume: true, subgoal: 1 },
    });
    expect(qed(2, "thin")).toEqual({ cmd: "qed", proofId: 2, name: "thin" });
    expect(listRules("IFOL")).toEqual({ cmd: "list_rules", thy: "IFOL" });
  });

  it("only sends inst when there is something in it", () => {
    expect(applyResolve(1, ["conjI"], 1)).toEqual({
      cmd: "apply",
      proofId: 1,
      tactic: { resolve: ["conjI"], subgoal: 1 },
    });
    expect(applyResolve(1, ["conjI"], 1, {})).toEqual({
      cmd: "apply",
      proofId: 1,
      tactic: { resolve: ["conjI"], subgoal: 1 },
    });
    expect(applyResolve(1, ["conjE1"], 2, { "?B": "B" })).toEqual({
      cmd: "apply",
      proofId: 1,
      tactic: { resolve: ["conjE1"], subgoal: 2, inst: { "?B": "B" } },
    });
  });
});

describe("asReply", () => {
  it("accepts each documented reply shape", () => {
    expect(asReply({ ok: false, error: "parse" })).toEqual({
      ok: false,
      error: "parse",
    });
    const st = asReply({ ok: true, proofId: 3, state });
    expect(st).toMatchObject({ ok: true, proofId: 3 });
    expect(asReply({ ok: true, state })).toMatchObject({ ok: true });
    expect(
      asReply({ ok: true, name: "t", pretty: "|- Tr(?A --> ?A)" }),
    ).toEqual({ ok: true, name: "t", pretty: "|- Tr(?A --> ?A)" });
    expect(
      asReply({
        ok: true,
        thy: "IPL",
        rules: [{ name: "mp", kind: "axiom", pretty: "|- x" }],
      }),
    ).toMatchObject({ ok: true, thy: "IPL" });
    expect(asReply({ ok: true, thy: "NegX" })).toEqual({
      ok: true,
      thy: "NegX",
    });
  });

  it("rejects everything else", () => {
    const bad = [
      null,
      42,
      "ok",
      {},
      { ok: "yes" },
      { ok: false },
      { ok: true },
      { ok: true, state: { ...state, subgoals: "none" } },
      { ok: true, state: { ...state, subgoals: [{ pretty: 1 }] } },
      { ok: true, thy: "IPL", rules: [{ name: "mp", kind: "rule", pretty: "" }] },
      { ok: true, name: "t" },
    ];
    for (const raw of bad) {
      expect(() => asReply(raw), JSON.stringify(raw)).toThrow(ProtocolError);
    }
  });

  it("keeps failure narrowing simple", () => {
    const r = asReply({ ok: false, error: "UnknownId: 9" });
    expect(failed(r)).toBe(true);
    const ok = asReply({ ok: true, thy: "IPL" });
    expect(failed(ok)).toBe(false);
  });
});

describe("httpPoster", () => {
  it("POSTs the command as JSON and decodes the body", async () => {
    const seen: { url: string; init: RequestInit }[] = [];
    const fakeFetch = (async (url: string | URL | Request, init?: RequestInit) => {
      seen.push({ url: String(url), init: init ?? {} });
      return new Response(JSON.stringify({ ok: true, thy: "IPL" }), {
        headers: { "Content-Type": "application/json" },
      });
    }) as typeof fetch;
    const post = httpPoster("/api", fakeFetch);
    const raw = await post(listRules("IPL"));
    expect(raw).toEqual({ ok: true, thy: "IPL" });
    expect(seen).toHaveLength(1);
    expect(seen[0].url).toBe("/api");
    expect(seen[0].init.method).toBe("POST");
    expect(JSON.parse(String(seen[0].init.body))).toEqual({
      cmd: "list_rules",
      thy: "IPL",
    });
  });
});

describe("Client", () => {
  it("validates replies before handing them out", async () => {
    const script: unknown[] = [
      { ok: true, proofId: 1, state },
      { not: "a reply" },
    ];
    const client = new Client(async () => script.shift());
    const first = await client.goal("IPL", "Tr(A --> A)");
    expect(first.ok).toBe(true);
    await expect(client.applyAssume(1, 1)).rejects.toThrow(ProtocolError);
  });
});
