"""Resolution: refining one premise of a proof state with a rule.

A proof state is an ordinary theorem [|psi_1; ...; psi_n|] ==> phi whose
premises are the open subgoals.  `resolve` unifies a rule's conclusion with
one subgoal's conclusion and replaces that subgoal by the rule's premises.
Subgoals may carry a prefix of !!-parameters and ==> -assumptions in any
interleaving; the rule is first lifted over that prefix, so its schematics
become functions of the parameters and its premises inherit the
assumptions.

Everything here manipulates open terms in place of the bound parameters,
so unification can never leak a parameter into an outer schematic: an
image containing a loose bound index is simply not producible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import kernel as K
from . import term as T
from . import unify as U
from .kernel import Theorem
from .term import Abs, App, Bound, Free, Schematic, TermExpr, TypeExpr


class NoSubgoal(K.KernelError):
    pass


def count_premises(prop: TermExpr) -> int:
    return len(T.strip_imp(prop)[0])


def _eta_body(t: TermExpr) -> TermExpr:
    if isinstance(t, Abs):
        return t.body
    return App(T.shift(t, 1), Bound(0))


def _prefix_items(psi: TermExpr):
    """Split a subgoal into its parameter/assumption prefix and conclusion.

    Returns (items, concl) where items is a list of ("param", hint, type)
    and ("asm", term) entries in source order; assumption terms and the
    conclusion are open, with Bound indexes referring to the parameters
    already passed."""
    items: list[tuple] = []
    t = psi
    while True:
        d = T.dest_all(t)
        if d is not None:
            ty, arg = d
            hint = arg.hint if isinstance(arg, Abs) else "x"
            items.append(("param", hint, ty))
            t = _eta_body(arg)
            continue
        im = T.dest_imp(t)
        if im is not None:
            a, t = im
            items.append(("asm", a))
            continue
        return items, t


def _param_types(items) -> list[TypeExpr]:
    return [it[2] for it in items if it[0] == "param"]


@dataclass(frozen=True)
class SubgoalView:
    """A subgoal split into parameters, assumptions, and conclusion.

    `params` are (display name, type) pairs, outermost first, with names
    freshened against the subgoal's free variables.  `asms` and `concl`
    are open terms whose loose bound indexes refer to the full parameter
    list.  `items` keeps the original parameter/assumption interleaving
    so `assemble` can reproduce the subgoal exactly."""

    params: tuple[tuple[str, TypeExpr], ...]
    asms: tuple[TermExpr, ...]
    concl: TermExpr
    items: tuple = ()

    def assemble(self) -> TermExpr:
        return _rebuild(list(self.items), self.concl, None)


def subgoal_view(psi: TermExpr, avoid=()) -> SubgoalView:
    items, concl = _prefix_items(psi)
    n = len(_param_types(items))
    taken = {f.name for f in T.free_vars(psi)} | set(avoid)
    params: list[tuple[str, TypeExpr]] = []
    asms: list[TermExpr] = []
    depth = 0
    for it in items:
        if it[0] == "param":
            base = it[1] if it[1] and it[1].isidentifier() else "x"
            name = base
            k = 0
            while name in taken:
                k += 1
                name = f"{base}{k}"
            taken.add(name)
            params.append((name, it[2]))
            depth += 1
        else:
            asms.append(T.shift(it[1], n - depth))
    return SubgoalView(tuple(params), tuple(asms), concl, tuple(items))


def _lift_term(t: TermExpr, n: int, new_vars: dict, depth: int = 0) -> TermExpr:
    """Apply every schematic to the n enclosing parameters (outermost
    first); `depth` is the number of binders already between `t` and the
    parameters."""
    if isinstance(t, Schematic):
        v = new_vars[t]
        return T.app(v, *[Bound(depth + n - 1 - j) for j in range(n)])
    if isinstance(t, Abs):
        return Abs(t.hint, t.var_type, _lift_term(t.body, n, new_vars, depth + 1))
    if isinstance(t, App):
        return App(_lift_term(t.fun, n, new_vars, depth),
                   _lift_term(t.arg, n, new_vars, depth))
    return t


def _collect_schematics(th: Theorem) -> list[Schematic]:
    out = T.schematic_vars(th.prop)
    for p in th.flexflex:
        for v in T.schematic_vars(p.lhs) + T.schematic_vars(p.rhs):
            if v not in out:
                out.append(v)
    return out


def _lifted_vars(vars_: list[Schematic], ptys: list[TypeExpr]) -> dict:
    return {
        v: Schematic(v.name, v.index, T.fun_type(ptys, v.type)) for v in vars_
    }


def rename_apart(th: Theorem, inc: int) -> Theorem:
    """Shift every schematic index in `th` up by `inc`."""
    if inc < 0:
        raise K.KernelError("index shift must not be negative")
    sub = {v: Schematic(v.name, v.index + inc, v.type)
           for v in _collect_schematics(th)}
    return K.instantiate(sub, th) if sub else th


def _rebuild(items, core: TermExpr, env: U.Env | None) -> TermExpr:
    """Wrap an open conclusion back into the subgoal's prefix."""
    cur = core
    for it in reversed(items):
        if it[0] == "asm":
            a = env.apply(it[1]) if env is not None else it[1]
            cur = T.mk_imp(a, cur)
        else:
            _, hint, ty = it
            cur = App(T.all_const(ty), Abs(hint, ty, cur))
    return T.norm(cur)


def resolve_with_env(rule: Theorem, i: int, state: Theorem,
                     depth: int | None = None
                     ) -> Iterator[tuple[Theorem, U.UnifyResult]]:
    """Like `resolve`, but pairs each new state with the unifier that
    produced it."""
    if rule.thy_name != state.thy_name:
        raise K.TheoryMismatch(
            f"rule is of {rule.thy_name!r}, state of {state.thy_name!r}"
        )
    prems, goal = T.strip_imp(state.prop)
    if not 1 <= i <= len(prems):
        raise NoSubgoal(f"state has {len(prems)} premises, asked for {i}")
    psi = prems[i - 1]

    inc = state.max_index() + 1
    rule_r = rename_apart(rule, inc)

    s_items, concl = _prefix_items(psi)
    rprems, rconcl = T.strip_imp(rule_r.prop)

    # A rule whose conclusion carries its own parameter/assumption prefix
    # (one lifted by hand) accounts for that many of the subgoal's
    # innermost prefix items itself; only the rest is lifted over.
    own = len(_prefix_items(rconcl)[0])
    cut = max(len(s_items) - own, 0)
    items = s_items[:cut]
    target = _rebuild(s_items[cut:], concl, None)

    ptys = _param_types(items)
    n = len(ptys)

    rff = list(rule_r.flexflex)
    if n:
        new_vars = _lifted_vars(_collect_schematics(rule_r), ptys)
        rconcl = _lift_term(rconcl, n, new_vars)
        rprems = [_lift_term(p, n, new_vars) for p in rprems]
        ext = tuple(reversed(ptys))
        rff = [
            U.DisagreementPair(p.ctx + ext,
                               _lift_term(p.lhs, n, new_vars, len(p.ctx)),
                               _lift_term(p.rhs, n, new_vars, len(p.ctx)))
            for p in rff
        ]

    ctx = tuple(reversed(ptys))
    pairs = ([U.DisagreementPair(ctx, rconcl, target)]
             + list(state.flexflex) + rff)
    env0 = U.Env({}, max(state.max_index(), rule_r.max_index()) + 1)
    thy = K.lookup_theory(state.thy_name)
    stream = U.unify(thy, pairs, env=env0,
                     depth=U.DEFAULT_DEPTH if depth is None else depth)

    for res in stream:
        new_subs = [_rebuild(items, res.env.apply(rp), res.env)
                    for rp in rprems]
        new_prems = ([res.env.apply(p) for p in prems[:i - 1]]
                     + new_subs
                     + [res.env.apply(p) for p in prems[i:]])
        new_prop = T.norm(T.list_imp(new_prems, res.env.apply(goal)))
        th = K._mk(state.thy_name, state.hyps + rule_r.hyps,
                   res.flexflex, new_prop)
        yield th, res


def resolve(rule: Theorem, i: int, state: Theorem,
            depth: int | None = None) -> Iterator[Theorem]:
    """Refine premise i of the state with the rule: each unifier of the
    rule's lifted conclusion against the subgoal's conclusion yields a new
    state whose premise i is replaced by the rule's lifted premises."""
    for th, _res in resolve_with_env(rule, i, state, depth):
        yield th


def assumption(i: int, state: Theorem,
               depth: int | None = None) -> Iterator[Theorem]:
    """Close premise i by unifying its conclusion with one of its own
    assumptions: for each assumption that unifies, the first unifier
    yields a new state with that premise gone."""
    prems, goal = T.strip_imp(state.prop)
    if not 1 <= i <= len(prems):
        raise NoSubgoal(f"state has {len(prems)} premises, asked for {i}")
    psi = prems[i - 1]
    items, concl = _prefix_items(psi)
    n = len(_param_types(items))
    ctx = tuple(reversed(_param_types(items)))
    thy = K.lookup_theory(state.thy_name)

    d = 0
    for it in items:
        if it[0] == "param":
            d += 1
            continue
        a_full = T.shift(it[1], n - d)
        pairs = ([U.DisagreementPair(ctx, a_full, concl)]
                 + list(state.flexflex))
        env0 = U.Env({}, state.max_index() + 1)
        stream = U.unify(thy, pairs, env=env0,
                         depth=U.DEFAULT_DEPTH if depth is None else depth)
        res = next(iter(stream), None)
        if res is None:
            continue
        new_prems = ([res.env.apply(p) for p in prems[:i - 1]]
                     + [res.env.apply(p) for p in prems[i:]])
        new_prop = T.norm(T.list_imp(new_prems, res.env.apply(goal)))
        yield K._mk(state.thy_name, state.hyps, res.flexflex, new_prop)


def lift_over_assumption(a: TermExpr, th: Theorem) -> Theorem:
    """From [|t_1; ...; t_m|] ==> t derive
    [|a ==> t_1; ...; a ==> t_m|] ==> (a ==> t)."""
    a = T.norm(a)
    if T.type_of(a) != T.PROP:
        raise T.IllTyped(f"assumption is not a prop: {a!r}")
    thy = K.lookup_theory(th.thy_name)
    if thy is not None:
        thy.check_term(a)
    prems, concl = T.strip_imp(th.prop)
    new = T.list_imp([T.mk_imp(a, p) for p in prems], T.mk_imp(a, concl))
    return K._mk(th.thy_name, th.hyps, th.flexflex, T.norm(new))


def lift_over_params(params: list[Free], th: Theorem) -> Theorem:
    """From [|t_1; ...; t_m|] ==> t derive
    [|!!xs. t_1'; ...; !!xs. t_m'|] ==> (!!xs. t'), where each schematic
    becomes a function of the parameters xs and existing occurrences of
    the parameters are bound.

    The parameters must not occur in any hypothesis or deferred
    constraint."""
    if not params:
        return th
    for x in params:
        if not isinstance(x, Free):
            raise K.EigenvariableViolation(f"not a free variable: {x!r}")
        for h in th.hyps:
            if T.occurs_free(x, h):
                raise K.EigenvariableViolation(
                    f"{x.name} occurs in hypothesis {h!r}"
                )
        for p in th.flexflex:
            if T.occurs_free(x, p.lhs) or T.occurs_free(x, p.rhs):
                raise K.EigenvariableViolation(
                    f"{x.name} occurs in a deferred constraint"
                )
    if len({(x.name, x.type) for x in params}) != len(params):
        raise K.EigenvariableViolation("parameters must be distinct")

    ptys = [x.type for x in params]
    n = len(params)
    vars_ = _collect_schematics(th)
    new_vars = _lifted_vars(vars_, ptys)
    sub = {v: T.app(new_vars[v], *params) for v in vars_}

    def lift_part(t: TermExpr) -> TermExpr:
        t = T.apply_subst(sub, t) if sub else t
        for x in reversed(params):
            t = T.mk_all(x, t)
        return T.norm(t)

    prems, concl = T.strip_imp(th.prop)
    new_prop = T.norm(T.list_imp([lift_part(p) for p in prems],
                                 lift_part(concl)))
    ext = tuple(reversed(ptys))
    ff = tuple(
        U.DisagreementPair(p.ctx + ext,
                           _lift_term(p.lhs, n, new_vars, len(p.ctx)),
                           _lift_term(p.rhs, n, new_vars, len(p.ctx)))
        for p in th.flexflex
    )
    return K._mk(th.thy_name, th.hyps, ff, new_prop)
