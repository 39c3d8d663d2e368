/** Browser entry point: wires the DOM to the protocol client.
 *
 * The module keeps one View and re-renders the panes after every
 * transition. All prover interaction goes through Client, so this
 * file is only event plumbing; the logic lives in viewstate.ts and
 * is tested there.
 */

import { Client, failed, httpPoster } from "./protocol.js";
import type { Failure, Reply } from "./protocol.js";
import * as V from "./viewstate.js";
import { renderProofPane, renderRules } from "./render.js";

const client = new Client(httpPoster("/api"));

let view = V.initialView;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const proofPane = el<HTMLElement>("proof-pane");
const rulesPane = el<HTMLElement>("rules-pane");
const thySelect = el<HTMLSelectElement>("thy");
const propInput = el<HTMLInputElement>("prop");
const subgoalInput = el<HTMLInputElement>("subgoal");
const instInput = el<HTMLInputElement>("inst");
const qedInput = el<HTMLInputElement>("qed-name");

function redraw(): void {
  proofPane.innerHTML = renderProofPane(view);
  rulesPane.innerHTML = renderRules(view.rules);
  subgoalInput.value = String(view.subgoal);
}

function update(next: V.View): void {
  view = next;
  redraw();
}

function oops(text: string): void {
  update(V.commandFailed(view, text));
}

/** Run a server call and fold its reply into the view. */
async function call(
  action: () => Promise<Reply>,
  onOk: (v: V.View, reply: Exclude<Reply, Failure>) => V.View,
): Promise<void> {
  try {
    const reply = await action();
    if (failed(reply)) {
      oops(reply.error);
    } else {
      update(onOk(view, reply));
    }
  } catch (e) {
    oops(e instanceof Error ? e.message : String(e));
  }
}

async function refreshRules(): Promise<void> {
  await call(
    () => client.listRules(view.thy),
    (v, r) => ("rules" in r ? V.rulesListed(v, r.rules) : v),
  );
}

function openProofId(): number | null {
  if (view.proofId === null) {
    update({ ...view, notice: { kind: "info", text: "no open proof" } });
    return null;
  }
  return view.proofId;
}

function currentInst(): Record<string, string> | null {
  const inst = V.parseInstList(instInput.value);
  if (inst === null) {
    oops("bad instantiation list; write ?A = TERM; ?B = TERM");
  }
  return inst;
}

el<HTMLFormElement>("goal-form").addEventListener("submit", (ev) => {
  ev.preventDefault();
  const prop = propInput.value.trim();
  if (!prop) return;
  void call(
    () => client.goal(thySelect.value, prop),
    (v, r) => ("state" in r ? V.proofStarted(v, r.state) : v),
  );
});

thySelect.addEventListener("change", () => {
  update(V.theoryPicked(view, thySelect.value));
  void refreshRules();
});

rulesPane.addEventListener("click", (ev) => {
  const button = (ev.target as HTMLElement).closest("button[data-rule]");
  if (!button) return;
  const pid = openProofId();
  if (pid === null) return;
  const inst = currentInst();
  if (inst === null) return;
  const name = (button as HTMLButtonElement).dataset.rule ?? "";
  void call(
    () => client.applyResolve(pid, [name], view.subgoal, inst),
    (v, r) => ("state" in r ? V.stepApplied(v, r.state) : v),
  );
});

proofPane.addEventListener("click", (ev) => {
  const item = (ev.target as HTMLElement).closest("li[data-subgoal]");
  if (!item) return;
  const n = Number((item as HTMLElement).dataset.subgoal);
  if (Number.isFinite(n)) update(V.subgoalPicked(view, n));
});

subgoalInput.addEventListener("change", () => {
  const n = Number(subgoalInput.value);
  if (Number.isFinite(n)) update(V.subgoalPicked(view, n));
});

el<HTMLButtonElement>("assume").addEventListener("click", () => {
  const pid = openProofId();
  if (pid === null) return;
  void call(
    () => client.applyAssume(pid, view.subgoal),
    (v, r) => ("state" in r ? V.stepApplied(v, r.state) : v),
  );
});

el<HTMLButtonElement>("back").addEventListener("click", () => {
  const pid = openProofId();
  if (pid === null) return;
  void call(
    () => client.back(pid),
    (v, r) => ("state" in r ? V.alternativeTaken(v, r.state) : v),
  );
});

el<HTMLButtonElement>("undo").addEventListener("click", () => {
  const pid = openProofId();
  if (pid === null) return;
  void call(
    () => client.undo(pid),
    (v, r) => ("state" in r ? V.stepUndone(v, r.state) : v),
  );
});

el<HTMLButtonElement>("qed").addEventListener("click", () => {
  const pid = openProofId();
  if (pid === null) return;
  const name = qedInput.value.trim();
  if (!name) {
    oops("give the theorem a name first");
    return;
  }
  void (async () => {
    const before = view.stored.length;
    await call(
      () => client.qed(pid, name),
      (v, r) => ("name" in r ? V.theoremStored(v, r) : v),
    );
    if (view.stored.length > before) {
      qedInput.value = "";
      await refreshRules();
    }
  })();
});

redraw();
void refreshRules();
