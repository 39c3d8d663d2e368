/** Pure client state and its transitions.
 *
 * The server owns the proof; the view keeps a mirror of the state
 * after every accepted step (the trail) so the interface can show
 * where a proof came from. Failures never touch the trail: they only
 * set the notice. Every transition returns a fresh View.
 */

import type { ProofState, QedReply, RuleInfo } from "./protocol.js";

export interface Notice {
  kind: "error" | "info";
  text: string;
}

export interface StoredTheorem {
  name: string;
  pretty: string;
}

export interface View {
  thy: string;
  proofId: number | null;
  trail: ProofState[];
  rules: RuleInfo[];
  stored: StoredTheorem[];
  notice: Notice | null;
  subgoal: number;
}

export const initialView: View = {
  thy: "IPL",
  proofId: null,
  trail: [],
  rules: [],
  stored: [],
  notice: null,
  subgoal: 1,
};

export function current(v: View): ProofState | null {
  return v.trail.length > 0 ? v.trail[v.trail.length - 1] : null;
}

/** Keep the selected subgoal within the state's range. */
function clampSubgoal(n: number, state: ProofState): number {
  if (state.ngoals === 0) return 1;
  return Math.min(Math.max(1, n), state.ngoals);
}

export function proofStarted(v: View, state: ProofState): View {
  return {
    ...v,
    proofId: state.proofId,
    trail: [state],
    notice: null,
    subgoal: 1,
  };
}

export function stepApplied(v: View, state: ProofState): View {
  return {
    ...v,
    trail: [...v.trail, state],
    notice: null,
    subgoal: clampSubgoal(v.subgoal, state),
  };
}

export function stepUndone(v: View, state: ProofState): View {
  const trail = v.trail.slice(0, Math.max(0, v.trail.length - 1));
  if (trail.length === 0) trail.push(state);
  return { ...v, trail, notice: null, subgoal: clampSubgoal(v.subgoal, state) };
}

export function alternativeTaken(v: View, state: ProofState): View {
  const trail = [...v.trail.slice(0, Math.max(0, v.trail.length - 1)), state];
  return { ...v, trail, notice: null, subgoal: clampSubgoal(v.subgoal, state) };
}

/** A rejected command: the server kept the proof as it was, so the
 * trail is carried over untouched and only the notice changes. */
export function commandFailed(v: View, error: string): View {
  return { ...v, notice: { kind: "error", text: error } };
}

export function rulesListed(v: View, rules: RuleInfo[]): View {
  return { ...v, rules };
}

export function theoremStored(v: View, reply: QedReply): View {
  return {
    ...v,
    proofId: null,
    trail: [],
    stored: [...v.stored, { name: reply.name, pretty: reply.pretty }],
    notice: { kind: "info", text: `stored ${reply.name}: ${reply.pretty}` },
    subgoal: 1,
  };
}

export function subgoalPicked(v: View, n: number): View {
  const state = current(v);
  return { ...v, subgoal: state ? clampSubgoal(n, state) : Math.max(1, n) };
}

export function theoryPicked(v: View, thy: string): View {
  return { ...v, thy };
}

/** Parse the instantiation box: semicolon-separated `?Name = TERM`
 * pairs. The term language never uses `;`, so the split is safe.
 * Returns null (and no pairs) when a key is not a schematic name.
 */
export function parseInstList(
  text: string,
): Record<string, string> | null {
  const inst: Record<string, string> = {};
  for (const piece of text.split(";")) {
    const item = piece.trim();
    if (!item) continue;
    const eq = item.indexOf("=");
    if (eq <= 0) return null;
    const key = item.slice(0, eq).trim();
    const val = item.slice(eq + 1).trim();
    if (!/^\?[A-Za-z_][A-Za-z0-9_']*(\.[0-9]+)?$/.test(key) || !val) {
      return null;
    }
    inst[key] = val;
  }
  return inst;
}
