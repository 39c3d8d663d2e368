/** End-to-end checks against the real prover over HTTP.
 *
 * A fresh server is spawned once for the file (`python3 -m metaproof
 * --serve 0`), and the tests drive it exactly the way main.ts does:
 * Client for the wire, viewstate transitions for the mirror, render
 * for what the user would see.
 */

import { spawn, type ChildProcess } from "node:child_process";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import {
  asProofState,
  Client,
  failed,
  httpPoster,
  type ProofState,
  type Reply,
} from "../src/protocol.js";
import { escapeHtml, renderProofPane, renderRules } from "../src/render.js";
import * as V from "../src/viewstate.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const SRC = path.resolve(HERE, "..", "..", "src");

let proc: ChildProcess;
let base = "";
let client: Client;

function waitForPort(child: ChildProcess): Promise<number> {
  return new Promise((resolve, reject) => {
    let out = "";
    let err = "";
    const timer = setTimeout(
      () => reject(new Error(`server never announced a port\n${err}`)),
      20000,
    );
    child.stdout?.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/SERVING (\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    child.stderr?.on("data", (chunk: Buffer) => {
      err += chunk.toString();
    });
    child.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited with ${code}\n${err}`));
    });
  });
}

beforeAll(async () => {
  proc = spawn("python3", ["-m", "metaproof", "--serve", "0"], {
    env: { ...process.env, PYTHONPATH: SRC },
    stdio: ["ignore", "pipe", "pipe"],
  });
  const port = await waitForPort(proc);
  base = `http://127.0.0.1:${port}`;
  client = new Client(httpPoster(`${base}/api`));
}, 30000);

afterAll(() => {
  proc?.kill();
});

function okState(reply: Reply): ProofState {
  if (failed(reply)) throw new Error(`unexpected failure: ${reply.error}`);
  if (!("state" in reply)) throw new Error("reply carries no state");
  return reply.state;
}

/** The view must show exactly what the server printed. */
function expectRendered(view: V.View): void {
  const state = V.current(view);
  expect(state).not.toBeNull();
  const html = renderProofPane(view);
  for (const sg of state!.subgoals) {
    expect(html).toContain(`<code>${escapeHtml(sg.pretty)}</code>`);
  }
  if (state!.done) {
    expect(html).toContain("no subgoals");
    expect(html).toContain(escapeHtml(state!.pretty));
  }
}

describe("a proof that goes through", () => {
  it("runs from goal to stored theorem", async () => {
    let view = V.theoryPicked(V.initialView, "IFOL");

    view = V.proofStarted(
      view,
      okState(await client.goal("IFOL", "Tr(ALL x. EX y. x = y)")),
    );
    const pid = V.current(view)!.proofId;
    expect(V.current(view)!.ngoals).toBe(1);
    expectRendered(view);

    for (const rule of ["allI", "exI", "refl"]) {
      view = V.stepApplied(
        view,
        okState(await client.applyResolve(pid, [rule], 1)),
      );
      expectRendered(view);
    }
    expect(V.current(view)!.done).toBe(true);
    expect(view.notice).toBeNull();

    const reply = await client.qed(pid, "all_ex_demo");
    if (failed(reply) || !("name" in reply)) {
      throw new Error("qed did not store the theorem");
    }
    expect(reply.pretty.startsWith("|- ")).toBe(true);
    view = V.theoremStored(view, reply);
    expect(view.proofId).toBeNull();

    const listing = await client.listRules("IFOL");
    if (failed(listing) || !("rules" in listing)) {
      throw new Error("rule listing failed");
    }
    view = V.rulesListed(view, listing.rules);
    const mine = view.rules.find((r) => r.name === "all_ex_demo");
    expect(mine?.kind).toBe("theorem");
    expect(renderRules(view.rules)).toContain('data-rule="all_ex_demo"');
  }, 30000);
});

describe("a proof that gets stuck", () => {
  it("reports the failure and leaves the state alone", async () => {
    let view = V.theoryPicked(V.initialView, "IFOL");
    view = V.proofStarted(
      view,
      okState(await client.goal("IFOL", "Tr(EX y. ALL x. x = y)")),
    );
    const pid = V.current(view)!.proofId;

    for (const rule of ["exI", "allI"]) {
      view = V.stepApplied(
        view,
        okState(await client.applyResolve(pid, [rule], 1)),
      );
    }
    const before = JSON.parse(JSON.stringify(view.trail));
    const beforeTrail = view.trail;

    const reply = await client.applyResolve(pid, ["refl"], 1);
    if (!failed(reply)) throw new Error("refl should not unify here");
    expect(reply.error).toBe(
      "TacticFailed: no rule in ['refl'] unifies with subgoal 1",
    );

    view = V.commandFailed(view, reply.error);
    expect(view.trail).toBe(beforeTrail);
    expect(view.trail).toEqual(before);

    const html = renderProofPane(view);
    expect(html).toContain("notice error");
    expect(html).toContain(escapeHtml(reply.error));
    expect(html).toContain(
      `<code>${escapeHtml(V.current(view)!.subgoals[0].pretty)}</code>`,
    );

    const stateReply = await fetch(`${base}/api`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ cmd: "state", proofId: pid }),
    }).then((r) => r.json());
    const onServer = asProofState((stateReply as { state: unknown }).state);
    expect(onServer).toEqual(V.current(view));
  }, 30000);
});

describe("transport edges", () => {
  it("answers malformed bodies and odd endpoints as data", async () => {
    const parse = await fetch(`${base}/api`, {
      method: "POST",
      body: "not json at all",
    }).then((r) => r.json());
    expect(parse).toEqual({ error: "parse", ok: false });

    const lost = await fetch(`${base}/nowhere`, {
      method: "POST",
      body: "{}",
    }).then((r) => r.json());
    expect(lost).toEqual({ error: "no such endpoint '/nowhere'", ok: false });
  }, 30000);
});
