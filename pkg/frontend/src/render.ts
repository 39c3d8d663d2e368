/** HTML rendering for the view state.
 *
 * Everything here builds strings, so it can be tested without a DOM.
 * All prover output passes through escapeHtml on the way in; terms
 * are full of `&`, `-->`, and `|`, none of which may reach the page
 * raw. Buttons carry data- attributes for the event delegation in
 * main.ts.
 */

import type { ProofState, RuleInfo, Subgoal } from "./protocol.js";
import { current, View } from "./viewstate.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function subgoalBlock(sg: Subgoal, index: number, selected: boolean): string {
  const cls = selected ? "subgoal selected" : "subgoal";
  const parts: string[] = [];
  parts.push(
    `<li class="${cls}" data-subgoal="${index}">` +
      `<span class="subgoal-number">${index}.</span> ` +
      `<code>${escapeHtml(sg.pretty)}</code>`,
  );
  if (sg.params.length > 0) {
    const ps = sg.params
      .map((p) => `${escapeHtml(p.name)} :: ${escapeHtml(p.type)}`)
      .join(", ");
    parts.push(`<div class="detail">params <code>${ps}</code></div>`);
  }
  for (const a of sg.asms) {
    parts.push(`<div class="detail">asm <code>${escapeHtml(a)}</code></div>`);
  }
  if (sg.params.length > 0 || sg.asms.length > 0) {
    parts.push(
      `<div class="detail">show <code>${escapeHtml(sg.concl)}</code></div>`,
    );
  }
  parts.push("</li>");
  return parts.join("");
}

export function renderState(state: ProofState, selected: number): string {
  const head =
    `<header class="state-head">proof ${state.proofId} ` +
    `(${escapeHtml(state.thy)}): <code>${escapeHtml(state.goal)}</code>` +
    `</header>`;
  if (state.done) {
    return (
      head +
      `<p class="done">no subgoals; store the theorem with qed</p>` +
      `<p class="done-pretty"><code>${escapeHtml(state.pretty)}</code></p>`
    );
  }
  const items = state.subgoals
    .map((sg, i) => subgoalBlock(sg, i + 1, i + 1 === selected))
    .join("");
  return head + `<ol class="subgoals">${items}</ol>`;
}

export function renderTrail(v: View): string {
  if (v.trail.length <= 1) return "";
  const steps = v.trail
    .slice(0, -1)
    .map(
      (s, i) =>
        `<li value="${i}"><code>${escapeHtml(
          s.done ? "no subgoals" : s.subgoals[0].pretty,
        )}</code> <span class="count">(${s.ngoals})</span></li>`,
    )
    .join("");
  return `<details open><summary>${v.trail.length - 1} step(s)</summary>` +
    `<ol class="trail" start="0">${steps}</ol></details>`;
}

export function renderRules(rules: RuleInfo[]): string {
  if (rules.length === 0) {
    return `<p class="empty">no rules listed yet</p>`;
  }
  const rows = rules
    .map(
      (r) =>
        `<li><button type="button" data-rule="${escapeHtml(r.name)}">` +
        `${escapeHtml(r.name)}</button>` +
        `<span class="kind">${r.kind}</span> ` +
        `<code>${escapeHtml(r.pretty)}</code></li>`,
    )
    .join("");
  return `<ul class="rules">${rows}</ul>`;
}

export function renderNotice(v: View): string {
  if (!v.notice) return "";
  const cls = v.notice.kind === "error" ? "notice error" : "notice info";
  return `<p class="${cls}">${escapeHtml(v.notice.text)}</p>`;
}

export function renderStored(v: View): string {
  if (v.stored.length === 0) return "";
  const rows = v.stored
    .map(
      (t) =>
        `<li><strong>${escapeHtml(t.name)}</strong> ` +
        `<code>${escapeHtml(t.pretty)}</code></li>`,
    )
    .join("");
  return `<h2>stored theorems</h2><ul class="stored">${rows}</ul>`;
}

/** The proof pane: notice, current state, and the step trail. */
export function renderProofPane(v: View): string {
  const state = current(v);
  const body = state
    ? renderState(state, v.subgoal)
    : `<p class="empty">no open proof; state a goal above</p>`;
  return renderNotice(v) + body + renderTrail(v) + renderStored(v);
}
