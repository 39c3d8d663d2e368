/** Typed client for the prover's JSON command protocol.
 *
 * Every request is one command object POSTed to the server; every
 * response is `{ok: true, ...}` or `{ok: false, error}`. This module
 * owns the wire types, the command constructors, and a validator that
 * refuses to hand malformed server output to the rest of the client.
 */

export type Tactic =
  | { assume: true; subgoal: number }
  | { resolve: string[]; subgoal: number; inst?: Record<string, string> };

export type Command =
  | { cmd: "goal"; thy: string; prop: string }
  | { cmd: "apply"; proofId: number; tactic: Tactic }
  | { cmd: "back"; proofId: number }
  | { cmd: "undo"; proofId: number }
  | { cmd: "state"; proofId: number }
  | { cmd: "qed"; proofId: number; name: string }
  | { cmd: "list_rules"; thy: string }
  | { cmd: "load_theory"; path: string };

export interface Param {
  name: string;
  type: string;
}

export interface Subgoal {
  pretty: string;
  params: Param[];
  asms: string[];
  concl: string;
}

export interface ProofState {
  proofId: number;
  thy: string;
  goal: string;
  pretty: string;
  ngoals: number;
  subgoals: Subgoal[];
  done: boolean;
}

export interface RuleInfo {
  name: string;
  kind: "axiom" | "theorem";
  pretty: string;
}

export interface Failure {
  ok: false;
  error: string;
}

export interface StateReply {
  ok: true;
  state: ProofState;
  proofId?: number;
}

export interface QedReply {
  ok: true;
  name: string;
  pretty: string;
}

export interface RulesReply {
  ok: true;
  thy: string;
  rules: RuleInfo[];
}

export interface LoadReply {
  ok: true;
  thy: string;
}

export type Reply = Failure | StateReply | QedReply | RulesReply | LoadReply;

export class ProtocolError extends Error {}

export function goal(thy: string, prop: string): Command {
  return { cmd: "goal", thy, prop };
}

export function applyResolve(
  proofId: number,
  rules: string[],
  subgoal: number,
  inst?: Record<string, string>,
): Command {
  const tactic: Tactic = inst && Object.keys(inst).length > 0
    ? { resolve: rules, subgoal, inst }
    : { resolve: rules, subgoal };
  return { cmd: "apply", proofId, tactic };
}

export function applyAssume(proofId: number, subgoal: number): Command {
  return { cmd: "apply", proofId, tactic: { assume: true, subgoal } };
}

export function back(proofId: number): Command {
  return { cmd: "back", proofId };
}

export function undo(proofId: number): Command {
  return { cmd: "undo", proofId };
}

export function qed(proofId: number, name: string): Command {
  return { cmd: "qed", proofId, name };
}

export function listRules(thy: string): Command {
  return { cmd: "list_rules", thy };
}

// ------------------------------------------------------- validation

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null && !Array.isArray(x);
}

function isStringArray(x: unknown): x is string[] {
  return Array.isArray(x) && x.every((e) => typeof e === "string");
}

function asParam(x: unknown): Param {
  if (!isRecord(x) || typeof x.name !== "string" || typeof x.type !== "string") {
    throw new ProtocolError("malformed subgoal parameter");
  }
  return { name: x.name, type: x.type };
}

function asSubgoal(x: unknown): Subgoal {
  if (
    !isRecord(x) ||
    typeof x.pretty !== "string" ||
    !Array.isArray(x.params) ||
    !isStringArray(x.asms) ||
    typeof x.concl !== "string"
  ) {
    throw new ProtocolError("malformed subgoal");
  }
  return {
    pretty: x.pretty,
    params: x.params.map(asParam),
    asms: x.asms,
    concl: x.concl,
  };
}

export function asProofState(x: unknown): ProofState {
  if (
    !isRecord(x) ||
    typeof x.proofId !== "number" ||
    typeof x.thy !== "string" ||
    typeof x.goal !== "string" ||
    typeof x.pretty !== "string" ||
    typeof x.ngoals !== "number" ||
    !Array.isArray(x.subgoals) ||
    typeof x.done !== "boolean"
  ) {
    throw new ProtocolError("malformed proof state");
  }
  return {
    proofId: x.proofId,
    thy: x.thy,
    goal: x.goal,
    pretty: x.pretty,
    ngoals: x.ngoals,
    subgoals: x.subgoals.map(asSubgoal),
    done: x.done,
  };
}

function asRule(x: unknown): RuleInfo {
  if (
    !isRecord(x) ||
    typeof x.name !== "string" ||
    (x.kind !== "axiom" && x.kind !== "theorem") ||
    typeof x.pretty !== "string"
  ) {
    throw new ProtocolError("malformed rule entry");
  }
  return { name: x.name, kind: x.kind, pretty: x.pretty };
}

/** Check a decoded server response and narrow it to a Reply.
 *
 * Raises ProtocolError when the payload does not have one of the
 * documented shapes; a server that answers nonsense should look like
 * a bug, not like an empty proof.
 */
export function asReply(raw: unknown): Reply {
  if (!isRecord(raw) || typeof raw.ok !== "boolean") {
    throw new ProtocolError("response is not a protocol object");
  }
  if (!raw.ok) {
    if (typeof raw.error !== "string") {
      throw new ProtocolError("failure without an error message");
    }
    return { ok: false, error: raw.error };
  }
  if ("state" in raw) {
    const reply: StateReply = { ok: true, state: asProofState(raw.state) };
    if (typeof raw.proofId === "number") reply.proofId = raw.proofId;
    return reply;
  }
  if ("rules" in raw) {
    if (typeof raw.thy !== "string" || !Array.isArray(raw.rules)) {
      throw new ProtocolError("malformed rule listing");
    }
    return { ok: true, thy: raw.thy, rules: raw.rules.map(asRule) };
  }
  if ("name" in raw) {
    if (typeof raw.name !== "string" || typeof raw.pretty !== "string") {
      throw new ProtocolError("malformed qed reply");
    }
    return { ok: true, name: raw.name, pretty: raw.pretty };
  }
  if (typeof raw.thy === "string") {
    return { ok: true, thy: raw.thy };
  }
  throw new ProtocolError("unrecognized reply shape");
}

export function failed(r: Reply): r is Failure {
  return !r.ok;
}

// ---------------------------------------------------------- transport

export type PostJson = (cmd: Command) => Promise<unknown>;

/** POST one command per request to `endpoint` and decode the JSON. */
export function httpPoster(
  endpoint: string,
  fetchImpl: typeof fetch = fetch,
): PostJson {
  return async (cmd: Command) => {
    const resp = await fetchImpl(endpoint, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(cmd),
    });
    return resp.json();
  };
}

/** The drivers' whole command set, one checked method per command. */
export class Client {
  constructor(private readonly post: PostJson) {}

  private async run(cmd: Command): Promise<Reply> {
    return asReply(await this.post(cmd));
  }

  goal(thy: string, prop: string): Promise<Reply> {
    return this.run(goal(thy, prop));
  }

  applyResolve(
    proofId: number,
    rules: string[],
    subgoal: number,
    inst?: Record<string, string>,
  ): Promise<Reply> {
    return this.run(applyResolve(proofId, rules, subgoal, inst));
  }

  applyAssume(proofId: number, subgoal: number): Promise<Reply> {
    return this.run(applyAssume(proofId, subgoal));
  }

  back(proofId: number): Promise<Reply> {
    return this.run(back(proofId));
  }

  undo(proofId: number): Promise<Reply> {
    return this.run(undo(proofId));
  }

  qed(proofId: number, name: string): Promise<Reply> {
    return this.run(qed(proofId, name));
  }

  listRules(thy: string): Promise<Reply> {
    return this.run(listRules(thy));
  }
}
