"""Backwards proof: proof states, tactics, and tacticals.

A proof state is an ordinary theorem [|s_1; ...; s_n|] ==> goal together
with the count n of leading premises that are open subgoals.  The count
matters because the goal itself may be a meta-implication, so the split
cannot be recovered from the proposition alone.  A tactic maps a state to
a lazy stream of successor states; an empty stream signals failure.
Every successor is a kernel theorem, so a tactic cannot promise more than
it can deliver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from . import kernel as K
from . import rule as R
from . import term as T
from .kernel import Theorem
from .term import TermExpr

REPEAT_CAP = 1000


class TacticError(K.KernelError):
    pass


class SubgoalsRemain(TacticError):
    pass


class UnresolvedFlexFlex(TacticError):
    pass


@dataclass(frozen=True)
class ProofState:
    """A theorem whose first `ngoals` premises are the open subgoals."""

    thm: Theorem
    ngoals: int

    def __post_init__(self):
        if not isinstance(self.thm, Theorem):
            raise TacticError("proof state requires a kernel theorem")
        prems, _ = T.strip_imp(self.thm.prop)
        if not 0 <= self.ngoals <= len(prems):
            raise TacticError(
                f"state claims {self.ngoals} subgoals, prop has "
                f"{len(prems)} premises"
            )

    @property
    def subgoals(self) -> tuple[TermExpr, ...]:
        prems, _ = T.strip_imp(self.thm.prop)
        return tuple(prems[: self.ngoals])

    @property
    def goal(self) -> TermExpr:
        prems, concl = T.strip_imp(self.thm.prop)
        return T.list_imp(prems[self.ngoals:], concl)

    @property
    def done(self) -> bool:
        return self.ngoals == 0


Tactic = Callable[[ProofState], Iterator[ProofState]]


def initial_state(thy, goal: TermExpr) -> ProofState:
    """The trivial state goal ==> goal with one subgoal."""
    th = K.implies_intr(goal, K.assume(thy, goal))
    return ProofState(th, 1)


def resolve_tac(rules: list[Theorem], i: int,
                depth: int | None = None) -> Tactic:
    """Refine subgoal i with each rule in turn, concatenating the
    streams of alternative unifiers."""

    def tac(state: ProofState) -> Iterator[ProofState]:
        if not 1 <= i <= state.ngoals:
            return
        for rule in rules:
            m = R.count_premises(rule.prop)
            for th in R.resolve(rule, i, state.thm, depth=depth):
                yield ProofState(th, state.ngoals - 1 + m)

    return tac


def assume_tac(i: int, depth: int | None = None) -> Tactic:
    """Close subgoal i against one of its own assumptions."""

    def tac(state: ProofState) -> Iterator[ProofState]:
        if not 1 <= i <= state.ngoals:
            return
        for th in R.assumption(i, state.thm, depth=depth):
            yield ProofState(th, state.ngoals - 1)

    return tac


def fail_tac(state: ProofState) -> Iterator[ProofState]:
    return iter(())


def all_tac(state: ProofState) -> Iterator[ProofState]:
    yield state


def then_(t1: Tactic, t2: Tactic) -> Tactic:
    """Apply t1, then t2 to every result; backtracks through both."""

    def tac(state: ProofState) -> Iterator[ProofState]:
        for s1 in t1(state):
            yield from t2(s1)

    return tac


def orelse(t1: Tactic, t2: Tactic) -> Tactic:
    """t1's stream if it has any result, otherwise t2's."""

    def tac(state: ProofState) -> Iterator[ProofState]:
        it = t1(state)
        first = next(it, None)
        if first is None:
            yield from t2(state)
            return
        yield first
        yield from it

    return tac


def repeat(t: Tactic, cap: int = REPEAT_CAP) -> Tactic:
    """Apply t as often as it succeeds, following the first alternative
    each time, and yield the last state reached.  Never fails; raises
    TacticError after `cap` applications to bound divergence."""

    def tac(state: ProofState) -> Iterator[ProofState]:
        cur = state
        for _ in range(cap):
            nxt = next(t(cur), None)
            if nxt is None:
                yield cur
                return
            cur = nxt
        raise TacticError(f"repeat passed {cap} applications; giving up")

    return tac


def _close_flexflex(th: Theorem) -> Theorem:
    """Discharge deferred unification pairs by the cheapest solution:
    both heads become constant functions returning one shared fresh
    schematic, making the two sides identical."""
    while th.flexflex:
        before = len(th.flexflex)
        p = th.flexflex[0]
        ha, aargs = T.spine(p.lhs)
        hb, bargs = T.spine(p.rhs)
        if not isinstance(ha, T.Schematic) or not isinstance(hb, T.Schematic):
            raise UnresolvedFlexFlex(
                f"constraint is no longer flex-flex: {p!r}"
            )
        base = T.type_of(p.lhs, p.ctx)
        h = T.Schematic("H", th.max_index() + 1, base)
        sub = {}
        for head, args in ((ha, aargs), (hb, bargs)):
            doms, _ = T.strip_type(head.type)
            image: TermExpr = h
            for ty in reversed(doms[: len(args)]):
                image = T.Abs("u", ty, image)
            sub[head] = image
        th = K.instantiate(sub, th)
        if len(th.flexflex) >= before:
            raise UnresolvedFlexFlex(
                f"constraint resisted closing: {p!r}"
            )
    return th


def finalize(state: ProofState) -> Theorem:
    """Certify a finished proof: no subgoals, deferred pairs closed,
    free variables generalized to schematics."""
    if state.ngoals:
        raise SubgoalsRemain(f"{state.ngoals} subgoals remain")
    th = _close_flexflex(state.thm)
    return K.varify(th)
