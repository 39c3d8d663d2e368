"""Independent oracles the suite checks the package against.

Nothing in this file calls the package's normalization, type checker,
unifier, or proof machinery.  Only the plain term constructors are shared;
every judgement (typing, reduction, unification, equivalence) is
reimplemented from scratch, so agreement between package and oracle is
meaningful evidence rather than a tautology.
"""

from __future__ import annotations

import random

from metaproof.term import (
    Abs,
    App,
    Basic,
    Bound,
    Const,
    Free,
    Fun,
    Schematic,
    TermExpr,
    TypeExpr,
)

TERM = Basic("term")
FORM = Basic("form")
PROP = Basic("prop")


class OracleError(Exception):
    pass


# ------------------------------------------------ independent de Bruijn ops


def o_shift(t: TermExpr, by: int, cutoff: int = 0) -> TermExpr:
    if isinstance(t, Bound):
        if t.offset >= cutoff:
            if t.offset + by < 0:
                raise OracleError("negative offset")
            return Bound(t.offset + by)
        return t
    if isinstance(t, Abs):
        return Abs(t.hint, t.var_type, o_shift(t.body, by, cutoff + 1))
    if isinstance(t, App):
        return App(o_shift(t.fun, by, cutoff), o_shift(t.arg, by, cutoff))
    return t


def o_subst(body: TermExpr, arg: TermExpr, depth: int = 0) -> TermExpr:
    """Replace Bound(depth) in body by arg, adjusting loose offsets."""
    if isinstance(body, Bound):
        if body.offset == depth:
            return o_shift(arg, depth)
        if body.offset > depth:
            return Bound(body.offset - 1)
        return body
    if isinstance(body, Abs):
        return Abs(body.hint, body.var_type, o_subst(body.body, arg, depth + 1))
    if isinstance(body, App):
        return App(o_subst(body.fun, arg, depth), o_subst(body.arg, arg, depth))
    return body


def _mentions(t: TermExpr, depth: int) -> bool:
    if isinstance(t, Bound):
        return t.offset == depth
    if isinstance(t, Abs):
        return _mentions(t.body, depth + 1)
    if isinstance(t, App):
        return _mentions(t.fun, depth) or _mentions(t.arg, depth)
    return False


# ------------------------------------------- two independent normalizers


def _step_outermost(t: TermExpr) -> TermExpr | None:
    """One leftmost-outermost beta step, or None if beta-normal."""
    if isinstance(t, App):
        if isinstance(t.fun, Abs):
            return o_subst(t.fun.body, t.arg)
        f = _step_outermost(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = _step_outermost(t.arg)
        if a is not None:
            return App(t.fun, a)
        return None
    if isinstance(t, Abs):
        b = _step_outermost(t.body)
        return None if b is None else Abs(t.hint, t.var_type, b)
    return None


def _step_innermost(t: TermExpr) -> TermExpr | None:
    """One rightmost-innermost beta step, or None if beta-normal."""
    if isinstance(t, App):
        a = _step_innermost(t.arg)
        if a is not None:
            return App(t.fun, a)
        f = _step_innermost(t.fun)
        if f is not None:
            return App(f, t.arg)
        if isinstance(t.fun, Abs):
            return o_subst(t.fun.body, t.arg)
        return None
    if isinstance(t, Abs):
        b = _step_innermost(t.body)
        return None if b is None else Abs(t.hint, t.var_type, b)
    return None


def _eta_pass(t: TermExpr) -> TermExpr:
    if isinstance(t, Abs):
        b = _eta_pass(t.body)
        if isinstance(b, App) and b.arg == Bound(0) and not _mentions(b.fun, 0):
            return o_shift(b.fun, -1)
        return Abs(t.hint, t.var_type, b)
    if isinstance(t, App):
        return App(_eta_pass(t.fun), _eta_pass(t.arg))
    return t


def _beta_eta(t: TermExpr, step) -> TermExpr:
    for _ in range(100000):
        nxt = step(t)
        if nxt is None:
            break
        t = nxt
    else:
        raise OracleError("reduction did not terminate")
    for _ in range(100000):
        nxt = _eta_pass(t)
        if nxt == t:
            return t
        t = nxt
    raise OracleError("eta did not terminate")


def nf_outermost(t: TermExpr) -> TermExpr:
    return _beta_eta(t, _step_outermost)


def nf_innermost(t: TermExpr) -> TermExpr:
    return _beta_eta(t, _step_innermost)


def alpha_eq(a: TermExpr, b: TermExpr) -> bool:
    """Structural equality ignoring binder hints, written out longhand."""
    if isinstance(a, Abs) and isinstance(b, Abs):
        return a.var_type == b.var_type and alpha_eq(a.body, b.body)
    if isinstance(a, App) and isinstance(b, App):
        return alpha_eq(a.fun, b.fun) and alpha_eq(a.arg, b.arg)
    if type(a) is not type(b):
        return False
    return a == b


# ------------------------------------------------ independent type checker


def check_type(t: TermExpr, ctx: tuple = ()) -> TypeExpr:
    if isinstance(t, (Const, Free, Schematic)):
        return t.type
    if isinstance(t, Bound):
        if t.offset >= len(ctx):
            raise OracleError(f"dangling bound {t.offset}")
        return ctx[t.offset]
    if isinstance(t, Abs):
        return Fun(t.var_type, check_type(t.body, (t.var_type,) + ctx))
    if isinstance(t, App):
        ft = check_type(t.fun, ctx)
        if not isinstance(ft, Fun) or ft.dom != check_type(t.arg, ctx):
            raise OracleError("ill-typed application")
        return ft.cod
    raise OracleError(f"not a term: {t!r}")


# --------------------------------------------------- random well-typed terms


def gen_type(rng: random.Random, depth: int = 2) -> TypeExpr:
    if depth <= 0 or rng.random() < 0.55:
        return rng.choice((TERM, FORM))
    return Fun(gen_type(rng, depth - 1), gen_type(rng, depth - 1))


def _pooled_atom(rng: random.Random, pool: dict, kind: str, ty: TypeExpr):
    """A Free or Schematic of type ty, reusing names consistently.

    Within one generated term every (name, index) pair keeps a single
    type, the convention the concrete syntax relies on."""
    table = pool[kind]
    fits = [key for key, kty in table.items() if kty == ty]
    if fits and rng.random() < 0.7:
        key = rng.choice(fits)
    elif kind == "free":
        key = f"v{len(table)}"
        table[key] = ty
    else:
        key = (f"V{len(table)}", rng.randrange(3))
        table[key] = ty
    if kind == "free":
        return Free(key, ty)
    return Schematic(key[0], key[1], ty)


def gen_term(rng: random.Random, ty: TypeExpr, ctx: tuple = (),
             fuel: int = 30, _pool: dict | None = None) -> TermExpr:
    """A well-typed term of type ty; Abs/App cases create beta-redexes."""
    if _pool is None:
        _pool = {"free": {}, "schem": {}}
    hits = [k for k, cty in enumerate(ctx) if cty == ty]
    if fuel <= 1:
        if hits and rng.random() < 0.7:
            return Bound(rng.choice(hits))
        if rng.random() < 0.25:
            return _pooled_atom(rng, _pool, "schem", ty)
        return _pooled_atom(rng, _pool, "free", ty)
    r = rng.random()
    if r < 0.25 and hits:
        return Bound(rng.choice(hits))
    if r < 0.30:
        return _pooled_atom(rng, _pool, "schem", ty)
    if r < 0.38:
        return _pooled_atom(rng, _pool, "free", ty)
    if isinstance(ty, Fun) and r < 0.75:
        body = gen_term(rng, ty.cod, (ty.dom,) + ctx, fuel - 1, _pool)
        return Abs("x", ty.dom, body)
    sigma = gen_type(rng, 1)
    cut = rng.randrange(1, fuel)
    fun = gen_term(rng, Fun(sigma, ty), ctx, cut, _pool)
    arg = gen_term(rng, sigma, ctx, fuel - cut, _pool)
    return App(fun, arg)


def term_size(t: TermExpr) -> int:
    if isinstance(t, Abs):
        return 1 + term_size(t.body)
    if isinstance(t, App):
        return 1 + term_size(t.fun) + term_size(t.arg)
    return 1


# ------------------------------------------ Robinson first-order unification
#
# First-order fragment: applications of Const/Free heads, with 0-ary
# Schematics as the unification variables.  No binders.


def fo_walk(s: dict, t: TermExpr) -> TermExpr:
    while isinstance(t, Schematic) and t in s:
        t = s[t]
    return t


def _fo_occurs(s: dict, v: Schematic, t: TermExpr) -> bool:
    t = fo_walk(s, t)
    if t == v:
        return True
    if isinstance(t, App):
        return _fo_occurs(s, v, t.fun) or _fo_occurs(s, v, t.arg)
    return False


def fo_unify(pairs: list) -> dict | None:
    """Most general unifier of first-order pairs, or None."""
    s: dict = {}
    work = list(pairs)
    while work:
        a, b = work.pop()
        a = fo_walk(s, a)
        b = fo_walk(s, b)
        if a == b:
            continue
        if isinstance(a, Schematic) or isinstance(b, Schematic):
            if not isinstance(a, Schematic):
                a, b = b, a
            if _fo_occurs(s, a, b):
                return None
            s[a] = b
            continue
        if isinstance(a, App) and isinstance(b, App):
            work.append((a.fun, b.fun))
            work.append((a.arg, b.arg))
            continue
        return None
    return s


def fo_apply(s: dict, t: TermExpr) -> TermExpr:
    t = fo_walk(s, t)
    if isinstance(t, App):
        return App(fo_apply(s, t.fun), fo_apply(s, t.arg))
    return t


def gen_fo_term(rng: random.Random, fuel: int = 6) -> TermExpr:
    """Random first-order term over a tiny fixed signature.

    Constants a, b; unary f; binary g; variables ?x0..?x2.  Everything has
    the base type ``term`` (functions curried from it).
    """
    if fuel <= 1:
        r = rng.random()
        if r < 0.45:
            return Schematic(f"x{rng.randrange(3)}", 0, TERM)
        return Const(rng.choice("ab"), TERM)
    r = rng.random()
    if r < 0.3:
        return gen_fo_term(rng, 1)
    if r < 0.65:
        return App(Const("f", Fun(TERM, TERM)), gen_fo_term(rng, fuel - 1))
    cut = rng.randrange(1, fuel)
    return App(
        App(Const("g", Fun(TERM, Fun(TERM, TERM))), gen_fo_term(rng, cut)),
        gen_fo_term(rng, fuel - cut),
    )


# ------------------------------------------- random ground rules over IPL

TR_C = Const("Tr", Fun(FORM, PROP))
IMP_C = Const("==>", Fun(PROP, Fun(PROP, PROP)))
_CONNECTIVES = ("&", "|", "-->")


def o_tr(f: TermExpr) -> TermExpr:
    return App(TR_C, f)


def o_imp(a: TermExpr, b: TermExpr) -> TermExpr:
    return App(App(IMP_C, a), b)


def gen_form(rng: random.Random, fuel: int = 4) -> TermExpr:
    """Random closed propositional formula over atoms P, Q, R."""
    if fuel <= 1 or rng.random() < 0.4:
        return Free(rng.choice("PQR"), FORM)
    c = Const(rng.choice(_CONNECTIVES), Fun(FORM, Fun(FORM, FORM)))
    cut = rng.randrange(1, fuel)
    return App(App(c, gen_form(rng, cut)), gen_form(rng, fuel - cut))


def gen_ground_prop(rng: random.Random) -> TermExpr:
    """A schematic-free prop: a truth judgement or a short implication."""
    p = o_tr(gen_form(rng))
    for _ in range(rng.randrange(0, 2)):
        p = o_imp(o_tr(gen_form(rng)), p)
    return p


def gen_ground_rule_prop(rng: random.Random, max_prems: int = 3) -> TermExpr:
    prop = o_tr(gen_form(rng))
    for _ in range(rng.randrange(0, max_prems + 1)):
        prop = o_imp(gen_ground_prop(rng), prop)
    return prop


# ----------------------------------- equality up to renaming of schematics


def aconv_mod_schematics(a: TermExpr, b: TermExpr) -> bool:
    """Alpha-equality up to a bijective renaming of schematic variables.

    Types must match exactly; the bijection is over (name, index) pairs.
    """
    fwd: dict = {}
    bwd: dict = {}

    def go(x: TermExpr, y: TermExpr) -> bool:
        if isinstance(x, Schematic) and isinstance(y, Schematic):
            if x.type != y.type:
                return False
            kx, ky = (x.name, x.index), (y.name, y.index)
            if kx in fwd:
                return fwd[kx] == ky
            if ky in bwd:
                return False
            fwd[kx] = ky
            bwd[ky] = kx
            return True
        if isinstance(x, Abs) and isinstance(y, Abs):
            return x.var_type == y.var_type and go(x.body, y.body)
        if isinstance(x, App) and isinstance(y, App):
            return go(x.fun, y.fun) and go(x.arg, y.arg)
        if type(x) is not type(y):
            return False
        return x == y

    return go(a, b)
