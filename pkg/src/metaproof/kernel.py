"""Proof kernel.

A Theorem means: the proposition holds in the named theory under the listed
hypotheses, provided some instance of every flex-flex constraint makes its
two sides equal.  Theorem values can only be produced by the rules in this
module (and by the resolution module, which is part of the trusted code and
is validated against these primitives).  Hypotheses contain no schematic
variables, so instantiation never touches them.
"""

from __future__ import annotations

from typing import Iterable

from . import term as T
from .term import (
    Abs,
    App,
    Bound,
    Const,
    Free,
    IllTyped,
    PROP,
    Schematic,
    TermExpr,
    aconv,
    apply_subst,
    max_index,
    norm,
    type_of,
)
from .unify import DisagreementPair


class KernelError(T.TermError):
    pass


class TheoryMismatch(KernelError):
    pass


class SchematicInHyp(KernelError):
    pass


class NotImplication(KernelError):
    pass


class PremiseMismatch(KernelError):
    pass


class EigenvariableViolation(KernelError):
    pass


class NotQuantified(KernelError):
    pass


class NotEquality(KernelError):
    pass


class MiddleMismatch(KernelError):
    pass


class Mismatch(KernelError):
    pass


class UnknownAxiom(KernelError):
    pass


class HasHypotheses(KernelError):
    pass


_SEAL = object()

# Theories register themselves here on construction so rules that introduce
# brand-new terms can check them against the signature by name.
_THEORIES: dict[str, object] = {}


def register_theory(thy) -> None:
    _THEORIES[thy.name] = thy


def lookup_theory(name: str):
    return _THEORIES.get(name)


class Theorem:
    """Sealed judgement  hyps |- prop  (with deferred flex-flex pairs)."""

    __slots__ = ("thy_name", "hyps", "flexflex", "prop")

    def __init__(self, thy_name, hyps, flexflex, prop, *, _seal=None):
        if _seal is not _SEAL:
            raise KernelError("Theorem values are created by kernel rules only")
        object.__setattr__(self, "thy_name", thy_name)
        object.__setattr__(self, "hyps", hyps)
        object.__setattr__(self, "flexflex", flexflex)
        object.__setattr__(self, "prop", prop)

    def __setattr__(self, name, value):
        raise AttributeError("Theorem is immutable")

    def __repr__(self) -> str:
        hyps = ", ".join(repr(h) for h in self.hyps)
        pre = f"{hyps} " if hyps else ""
        return f"<{pre}|- {self.prop!r} [{self.thy_name}]>"

    def max_index(self) -> int:
        m = max_index(self.prop)
        for p in self.flexflex:
            m = max(m, max_index(p.lhs), max_index(p.rhs))
        return m


def _dedup(hyps: Iterable[TermExpr]) -> tuple[TermExpr, ...]:
    out: list[TermExpr] = []
    for h in hyps:
        if not any(aconv(h, g) for g in out):
            out.append(h)
    return tuple(out)


def _check_hyp(h: TermExpr) -> TermExpr:
    if T.schematic_vars(h):
        raise SchematicInHyp(f"hypothesis contains schematics: {h!r}")
    if type_of(h) != PROP:
        raise IllTyped(f"hypothesis is not a prop: {h!r}")
    return h


def _mk(thy_name: str, hyps, flexflex, prop: TermExpr) -> Theorem:
    if type_of(prop) != PROP:
        raise IllTyped(f"proposition is not a prop: {prop!r}")
    hs = _dedup(_check_hyp(h) for h in hyps)
    return Theorem(thy_name, hs, tuple(flexflex), prop, _seal=_SEAL)


def _check_in_theory(thy, t: TermExpr) -> None:
    """Every constant of t must be declared in thy (meta-constants at a
    legal type instance) and every basic type must exist there."""
    thy.check_term(t)


def _same_theory(th1: Theorem, th2: Theorem) -> str:
    if th1.thy_name != th2.thy_name:
        raise TheoryMismatch(
            f"cannot combine theorems of {th1.thy_name!r} and {th2.thy_name!r}"
        )
    return th1.thy_name


# ------------------------------------------------------------ basic rules


def assume(thy, phi: TermExpr) -> Theorem:
    """phi |- phi."""
    phi = norm(phi)
    if type_of(phi) != PROP:
        raise IllTyped(f"assumption is not a prop: {phi!r}")
    if T.schematic_vars(phi):
        raise SchematicInHyp(f"cannot assume a schematic prop: {phi!r}")
    _check_in_theory(thy, phi)
    return _mk(thy.name, (phi,), (), phi)


def implies_intr(phi: TermExpr, th: Theorem) -> Theorem:
    """Discharge phi:  (hyps - phi) |- phi ==> prop."""
    phi = norm(phi)
    if type_of(phi) != PROP:
        raise IllTyped(f"discharged formula is not a prop: {phi!r}")
    if T.schematic_vars(phi):
        raise SchematicInHyp(f"cannot discharge a schematic prop: {phi!r}")
    thy = lookup_theory(th.thy_name)
    if thy is not None:
        _check_in_theory(thy, phi)
    hyps = tuple(h for h in th.hyps if not aconv(h, phi))
    return _mk(th.thy_name, hyps, th.flexflex, T.mk_imp(phi, th.prop))


def implies_elim(th_imp: Theorem, th_arg: Theorem) -> Theorem:
    """From phi ==> psi and phi, conclude psi; hyps union, flexflex concat."""
    name = _same_theory(th_imp, th_arg)
    d = T.dest_imp(th_imp.prop)
    if d is None:
        raise NotImplication(f"not an implication: {th_imp.prop!r}")
    phi, psi = d
    if not aconv(phi, th_arg.prop):
        raise PremiseMismatch(
            f"premise {phi!r} does not match argument {th_arg.prop!r}"
        )
    return _mk(
        name,
        th_imp.hyps + th_arg.hyps,
        th_imp.flexflex + th_arg.flexflex,
        psi,
    )


def forall_intr(x: Free, th: Theorem) -> Theorem:
    """Generalize the free variable x:  hyps |- !!x. prop.

    x must not occur in any hypothesis or deferred constraint."""
    if not isinstance(x, Free):
        raise EigenvariableViolation(f"can only generalize a free variable, got {x!r}")
    for h in th.hyps:
        if T.occurs_free(x, h):
            raise EigenvariableViolation(
                f"{x.name} occurs in hypothesis {h!r}"
            )
    for p in th.flexflex:
        if T.occurs_free(x, p.lhs) or T.occurs_free(x, p.rhs):
            raise EigenvariableViolation(
                f"{x.name} occurs in a deferred constraint"
            )
    return _mk(th.thy_name, th.hyps, th.flexflex, norm(T.mk_all(x, th.prop)))


def forall_elim(t: TermExpr, th: Theorem) -> Theorem:
    """From !!x. phi(x) conclude phi(t)."""
    d = T.dest_all(th.prop)
    if d is None:
        raise NotQuantified(f"not a !!-quantification: {th.prop!r}")
    ty, arg = d
    if type_of(t) != ty:
        raise IllTyped(f"instance {t!r} has wrong type for binder {ty!r}")
    thy = lookup_theory(th.thy_name)
    if thy is not None:
        _check_in_theory(thy, t)
    return _mk(th.thy_name, th.hyps, th.flexflex, norm(App(arg, t)))


def instantiate(s: T.Subst, th: Theorem) -> Theorem:
    """Substitute for schematics in prop and constraints; hyps untouched.

    Constraints whose sides become equal are discharged."""
    prop = apply_subst(s, th.prop)
    ff: list[DisagreementPair] = []
    for p in th.flexflex:
        a = apply_subst(s, p.lhs)
        b = apply_subst(s, p.rhs)
        if not aconv(a, b):
            ff.append(DisagreementPair(p.ctx, a, b))
    return _mk(th.thy_name, th.hyps, ff, prop)


# --------------------------------------------------------- equality rules


def reflexive(thy, a: TermExpr) -> Theorem:
    """|- a == a."""
    a = norm(a)
    _check_in_theory(thy, a)
    return _mk(thy.name, (), (), T.mk_eq(a, a))


def symmetric(th: Theorem) -> Theorem:
    d = T.dest_eq(th.prop)
    if d is None:
        raise NotEquality(f"not an equality: {th.prop!r}")
    a, b = d
    return _mk(th.thy_name, th.hyps, th.flexflex, T.mk_eq(b, a, type_of(a)))


def transitive(th1: Theorem, th2: Theorem) -> Theorem:
    name = _same_theory(th1, th2)
    d1 = T.dest_eq(th1.prop)
    d2 = T.dest_eq(th2.prop)
    if d1 is None or d2 is None:
        raise NotEquality("transitive needs two equalities")
    a, b = d1
    b2, c = d2
    if not aconv(b, b2):
        raise MiddleMismatch(f"middle terms differ: {b!r} vs {b2!r}")
    return _mk(
        name,
        th1.hyps + th2.hyps,
        th1.flexflex + th2.flexflex,
        T.mk_eq(a, c, type_of(a)),
    )


def abstract_rule(x: Free, th: Theorem) -> Theorem:
    """From a == b conclude (%x. a) == (%x. b); x fresh for the hyps."""
    d = T.dest_eq(th.prop)
    if d is None:
        raise NotEquality(f"not an equality: {th.prop!r}")
    for h in th.hyps:
        if T.occurs_free(x, h):
            raise EigenvariableViolation(f"{x.name} occurs in hypothesis {h!r}")
    for p in th.flexflex:
        if T.occurs_free(x, p.lhs) or T.occurs_free(x, p.rhs):
            raise EigenvariableViolation(f"{x.name} occurs in a deferred constraint")
    a, b = d
    la = T.abstract_over(x, a)
    lb = T.abstract_over(x, b)
    return _mk(th.thy_name, th.hyps, th.flexflex, T.mk_eq(la, lb, type_of(la)))


def combination(th_fun: Theorem, th_arg: Theorem) -> Theorem:
    """From f == g and a == b conclude f(a) == g(b)."""
    name = _same_theory(th_fun, th_arg)
    df = T.dest_eq(th_fun.prop)
    da = T.dest_eq(th_arg.prop)
    if df is None or da is None:
        raise NotEquality("combination needs two equalities")
    f, g = df
    a, b = da
    ft = type_of(f)
    if not isinstance(ft, T.Fun) or ft.dom != type_of(a):
        raise IllTyped(f"cannot apply {f!r} to {a!r}")
    return _mk(
        name,
        th_fun.hyps + th_arg.hyps,
        th_fun.flexflex + th_arg.flexflex,
        T.mk_eq(App(f, a), App(g, b), ft.cod),
    )


def equal_intr(th1: Theorem, th2: Theorem) -> Theorem:
    """From phi |- psi and psi |- phi conclude |- phi == psi
    (each premise discharged from the other side's hypotheses)."""
    name = _same_theory(th1, th2)
    phi, psi = th2.prop, th1.prop
    hyps1 = tuple(h for h in th1.hyps if not aconv(h, phi))
    hyps2 = tuple(h for h in th2.hyps if not aconv(h, psi))
    return _mk(
        name,
        hyps1 + hyps2,
        th1.flexflex + th2.flexflex,
        T.mk_eq(phi, psi, PROP),
    )


def equal_elim(th_eq: Theorem, th: Theorem) -> Theorem:
    """From phi == psi and phi conclude psi."""
    name = _same_theory(th_eq, th)
    d = T.dest_eq(th_eq.prop)
    if d is None:
        raise NotEquality(f"not an equality: {th_eq.prop!r}")
    phi, psi = d
    if type_of(phi) != PROP:
        raise IllTyped("equal_elim needs an equality between props")
    if not aconv(phi, th.prop):
        raise Mismatch(f"{phi!r} does not match {th.prop!r}")
    return _mk(name, th_eq.hyps + th.hyps, th_eq.flexflex + th.flexflex, psi)


def beta_eta_conversion(thy, t: TermExpr) -> Theorem:
    """|- t == norm(t).  The left side keeps its redexes; that equation is
    the rule's whole content."""
    _check_in_theory(thy, t)
    ty = type_of(t)
    return _mk(thy.name, (), (), T.mk_eq(t, norm(t), ty))


# ------------------------------------------------------------ axiom entry


def _schematize_outer(prop: TermExpr) -> TermExpr:
    """Replace outer !!-binders by schematics (index 0, bumped on clash)."""
    existing = {(v.name, v.index) for v in T.schematic_vars(prop)}
    while (d := T.dest_all(prop)) is not None:
        ty, arg = d
        hint = arg.hint if isinstance(arg, Abs) else "x"
        idx = 0
        while (hint, idx) in existing:
            idx += 1
        existing.add((hint, idx))
        v = Schematic(hint, idx, ty)
        prop = norm(App(arg, v)) if not isinstance(arg, Abs) else norm(
            T.subst_bound(arg.body, v)
        )
    return prop


def axiom(thy, name: str) -> Theorem:
    """Look up an axiom; outer !!-quantifiers become fresh schematics."""
    prop = thy.axiom_prop(name)
    if prop is None:
        raise UnknownAxiom(f"no axiom {name!r} in theory {thy.name!r}")
    return _mk(thy.name, (), (), _schematize_outer(prop))


def def_axiom(thy, const_name: str) -> Theorem:
    """|- K == rhs for a defined constant K."""
    d = thy.def_rhs(const_name)
    if d is None:
        raise UnknownAxiom(f"no definition for {const_name!r} in {thy.name!r}")
    ty = thy.const_type(const_name)
    return _mk(thy.name, (), (), T.mk_eq(Const(const_name, ty), d, ty))


def varify(th: Theorem) -> Theorem:
    """Turn every free variable of a closed theorem into a schematic."""
    if th.hyps:
        raise HasHypotheses("cannot varify a theorem with hypotheses")
    frees = T.free_vars(th.prop)
    for p in th.flexflex:
        for f in T.free_vars(p.lhs) + T.free_vars(p.rhs):
            if f not in frees:
                frees.append(f)
    taken = {(v.name, v.index) for v in T.schematic_vars(th.prop)}
    s: dict[Free, Schematic] = {}
    for f in frees:
        idx = 0
        while (f.name, idx) in taken:
            idx += 1
        taken.add((f.name, idx))
        s[f] = Schematic(f.name, idx, f.type)

    def rep(t: TermExpr) -> TermExpr:
        if isinstance(t, Free):
            return s.get(t, t)
        if isinstance(t, Abs):
            return Abs(t.hint, t.var_type, rep(t.body))
        if isinstance(t, App):
            return App(rep(t.fun), rep(t.arg))
        return t

    ff = tuple(
        DisagreementPair(p.ctx, rep(p.lhs), rep(p.rhs)) for p in th.flexflex
    )
    return _mk(th.thy_name, (), ff, rep(th.prop))
