"""Typed lambda-terms: the syntax shared by the meta-logic and every
object-logic declared on top of it.

Bound variables are de Bruijn offsets, so alpha-equivalence is plain
structural equality and binder hints are display-only.  Free and schematic
variables are named; a schematic additionally carries an integer index so a
whole rule can be renamed apart in one sweep.  Types are always explicit on
the nodes that need them, and the identity of a variable includes its type.

Terms handed to the kernel are kept beta-normal and eta-contracted; `norm`
computes that form.  Substitution images may contain no loose bound
variables, which makes `apply_subst` capture-avoiding by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union


class TermError(Exception):
    """Base class for errors raised by term-level operations."""


class IllTyped(TermError):
    pass


class DanglingBound(TermError):
    pass


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Basic:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fun:
    dom: "TypeExpr"
    cod: "TypeExpr"

    def __repr__(self) -> str:
        d = f"({self.dom!r})" if isinstance(self.dom, Fun) else repr(self.dom)
        return f"{d} -> {self.cod!r}"


TypeExpr = Union[Basic, Fun]

PROP = Basic("prop")


def fun_type(doms, cod: TypeExpr) -> TypeExpr:
    """tau1 -> ... -> taun -> cod, right-nested."""
    ty = cod
    for d in reversed(list(doms)):
        ty = Fun(d, ty)
    return ty


def strip_type(ty: TypeExpr) -> tuple[list[TypeExpr], Basic]:
    """Split tau1 -> ... -> taun -> b into ([tau1..taun], b)."""
    doms: list[TypeExpr] = []
    while isinstance(ty, Fun):
        doms.append(ty.dom)
        ty = ty.cod
    return doms, ty


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Const:
    name: str
    type: TypeExpr

    def __repr__(self) -> str:
        return f"Const({self.name})"


@dataclass(frozen=True)
class Free:
    name: str
    type: TypeExpr

    def __repr__(self) -> str:
        return f"Free({self.name})"


@dataclass(frozen=True)
class Schematic:
    name: str
    index: int
    type: TypeExpr

    def __repr__(self) -> str:
        return f"?{self.name}.{self.index}"


@dataclass(frozen=True)
class Bound:
    offset: int

    def __repr__(self) -> str:
        return f"B{self.offset}"


class Abs:
    """Lambda abstraction.  `hint` is a display name only: it takes no part
    in equality or hashing, so `==` on terms is alpha-equivalence."""

    __slots__ = ("hint", "var_type", "body")

    def __init__(self, hint: str, var_type: TypeExpr, body: "TermExpr"):
        object.__setattr__(self, "hint", hint)
        object.__setattr__(self, "var_type", var_type)
        object.__setattr__(self, "body", body)

    def __setattr__(self, name, value):
        raise AttributeError("Abs is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Abs)
            and self.var_type == other.var_type
            and self.body == other.body
        )

    def __hash__(self) -> int:
        return hash(("abs", self.var_type, self.body))

    def __repr__(self) -> str:
        return f"Abs({self.hint}, {self.body!r})"


@dataclass(frozen=True)
class App:
    fun: "TermExpr"
    arg: "TermExpr"

    def __repr__(self) -> str:
        return f"App({self.fun!r}, {self.arg!r})"


TermExpr = Union[Const, Free, Schematic, Bound, Abs, App]

Subst = Mapping[Schematic, TermExpr]


def app(head: TermExpr, *args: TermExpr) -> TermExpr:
    t = head
    for a in args:
        t = App(t, a)
    return t


def spine(t: TermExpr) -> tuple[TermExpr, list[TermExpr]]:
    """Unwind applications: spine(f(a)(b)) == (f, [a, b])."""
    args: list[TermExpr] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


# ---------------------------------------------------------------- typing


def type_of(t: TermExpr, ctx: tuple[TypeExpr, ...] = ()) -> TypeExpr:
    """Type of `t` under a binder context listed innermost-first.

    Raises DanglingBound for an offset past the context and IllTyped for a
    malformed application.
    """
    if isinstance(t, (Const, Free, Schematic)):
        return t.type
    if isinstance(t, Bound):
        if t.offset >= len(ctx):
            raise DanglingBound(f"bound variable {t.offset} outside context")
        return ctx[t.offset]
    if isinstance(t, Abs):
        return Fun(t.var_type, type_of(t.body, (t.var_type,) + ctx))
    if isinstance(t, App):
        ft = type_of(t.fun, ctx)
        at = type_of(t.arg, ctx)
        if not isinstance(ft, Fun):
            raise IllTyped(f"applying non-function {t.fun!r} : {ft!r}")
        if ft.dom != at:
            raise IllTyped(
                f"argument type {at!r} does not match domain {ft.dom!r} in {t!r}"
            )
        return ft.cod
    raise TermError(f"not a term: {t!r}")


def aconv(t: TermExpr, u: TermExpr) -> bool:
    """Alpha-equivalence; structural because bounds are de Bruijn."""
    return t == u


# ------------------------------------------------------------- reduction


def shift(t: TermExpr, by: int, cutoff: int = 0) -> TermExpr:
    """Add `by` to every loose bound offset >= cutoff."""
    if isinstance(t, Bound):
        if t.offset >= cutoff:
            off = t.offset + by
            if off < 0:
                raise DanglingBound(f"shift below zero in {t!r}")
            return Bound(off)
        return t
    if isinstance(t, Abs):
        return Abs(t.hint, t.var_type, shift(t.body, by, cutoff + 1))
    if isinstance(t, App):
        return App(shift(t.fun, by, cutoff), shift(t.arg, by, cutoff))
    return t


def subst_bound(body: TermExpr, arg: TermExpr) -> TermExpr:
    """Replace Bound(0) in `body` by `arg` (one beta step, no normalization)."""

    def go(t: TermExpr, depth: int) -> TermExpr:
        if isinstance(t, Bound):
            if t.offset == depth:
                return shift(arg, depth)
            if t.offset > depth:
                return Bound(t.offset - 1)
            return t
        if isinstance(t, Abs):
            return Abs(t.hint, t.var_type, go(t.body, depth + 1))
        if isinstance(t, App):
            return App(go(t.fun, depth), go(t.arg, depth))
        return t

    return go(body, 0)


def _loose_at(t: TermExpr, k: int) -> bool:
    if isinstance(t, Bound):
        return t.offset == k
    if isinstance(t, Abs):
        return _loose_at(t.body, k + 1)
    if isinstance(t, App):
        return _loose_at(t.fun, k) or _loose_at(t.arg, k)
    return False


def norm(t: TermExpr) -> TermExpr:
    """Beta-normal, eta-contracted form.

    Terminates on well-typed terms; the result is the unique canonical
    representative of the beta-eta class.
    """
    if isinstance(t, App):
        f = norm(t.fun)
        if isinstance(f, Abs):
            return norm(subst_bound(f.body, t.arg))
        return App(f, norm(t.arg))
    if isinstance(t, Abs):
        b = norm(t.body)
        if isinstance(b, App) and b.arg == Bound(0) and not _loose_at(b.fun, 0):
            return shift(b.fun, -1)
        return Abs(t.hint, t.var_type, b)
    return t


# ---------------------------------------------------------- substitution


def apply_subst(s: Subst, t: TermExpr) -> TermExpr:
    """Replace schematics per `s` and renormalize.

    Each image must be closed with respect to bound variables and have the
    key's type; violations raise IllTyped.  Capture cannot occur: images have
    no loose bounds and frees are never bound by Abs.
    """
    if not s:
        return norm(t)
    for v, img in s.items():
        if not isinstance(v, Schematic):
            raise IllTyped(f"substitution key {v!r} is not a schematic")
        if type_of(img) != v.type:
            raise IllTyped(
                f"image for {v!r} has type {type_of(img)!r}, wanted {v.type!r}"
            )

    def rep(t: TermExpr) -> TermExpr:
        if isinstance(t, Schematic):
            return s.get(t, t)
        if isinstance(t, Abs):
            return Abs(t.hint, t.var_type, rep(t.body))
        if isinstance(t, App):
            return App(rep(t.fun), rep(t.arg))
        return t

    return norm(rep(t))


def abstract_over(v: Free, t: TermExpr) -> Abs:
    """Bind every occurrence of the free variable `v`: returns %v. t."""

    def go(t: TermExpr, depth: int) -> TermExpr:
        if isinstance(t, Free):
            return Bound(depth) if t == v else t
        if isinstance(t, Bound):
            return Bound(t.offset + 1) if t.offset >= depth else t
        if isinstance(t, Abs):
            return Abs(t.hint, t.var_type, go(t.body, depth + 1))
        if isinstance(t, App):
            return App(go(t.fun, depth), go(t.arg, depth))
        return t

    return Abs(v.name, v.type, go(t, 0))


# ------------------------------------------------------------ traversals


def subterms(t: TermExpr) -> Iterator[TermExpr]:
    yield t
    if isinstance(t, Abs):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.fun)
        yield from subterms(t.arg)


def free_vars(t: TermExpr) -> list[Free]:
    """Free variables in first-occurrence order, deduplicated."""
    out: list[Free] = []
    seen: set[Free] = set()
    for u in subterms(t):
        if isinstance(u, Free) and u not in seen:
            seen.add(u)
            out.append(u)
    return out


def schematic_vars(t: TermExpr) -> list[Schematic]:
    """Schematic variables in first-occurrence order, deduplicated."""
    out: list[Schematic] = []
    seen: set[Schematic] = set()
    for u in subterms(t):
        if isinstance(u, Schematic) and u not in seen:
            seen.add(u)
            out.append(u)
    return out


def occurs_free(v: Free, t: TermExpr) -> bool:
    return any(u == v for u in subterms(t) if isinstance(u, Free))


def max_index(t: TermExpr) -> int:
    """Largest schematic index in t, or -1 if there are none."""
    m = -1
    for u in subterms(t):
        if isinstance(u, Schematic) and u.index > m:
            m = u.index
    return m


def incr_indexes(t: TermExpr, k: int) -> TermExpr:
    """Add k to every schematic index (renames a rule apart)."""
    if k == 0:
        return t
    if isinstance(t, Schematic):
        return Schematic(t.name, t.index + k, t.type)
    if isinstance(t, Abs):
        return Abs(t.hint, t.var_type, incr_indexes(t.body, k))
    if isinstance(t, App):
        return App(incr_indexes(t.fun, k), incr_indexes(t.arg, k))
    return t


# ------------------------------------------------- meta-logic connectives
#
# The meta-logic has implication ==> on props, a quantifier family !! with
# one instance (s -> prop) -> prop per type s, and an equality family ==
# with instances s -> s -> prop.

IMP_NAME = "==>"
ALL_NAME = "!!"
EQ_NAME = "=="

IMP_TYPE = Fun(PROP, Fun(PROP, PROP))
IMP = Const(IMP_NAME, IMP_TYPE)


def all_const(ty: TypeExpr) -> Const:
    return Const(ALL_NAME, Fun(Fun(ty, PROP), PROP))


def eq_const(ty: TypeExpr) -> Const:
    return Const(EQ_NAME, Fun(ty, Fun(ty, PROP)))


def mk_imp(a: TermExpr, b: TermExpr) -> TermExpr:
    return App(App(IMP, a), b)


def dest_imp(t: TermExpr) -> tuple[TermExpr, TermExpr] | None:
    if (
        isinstance(t, App)
        and isinstance(t.fun, App)
        and t.fun.fun == IMP
    ):
        return t.fun.arg, t.arg
    return None


def strip_imp(t: TermExpr) -> tuple[list[TermExpr], TermExpr]:
    """Split phi1 ==> ... ==> phin ==> psi into ([phi1..phin], psi)."""
    prems: list[TermExpr] = []
    while (d := dest_imp(t)) is not None:
        prems.append(d[0])
        t = d[1]
    return prems, t


def list_imp(prems, concl: TermExpr) -> TermExpr:
    t = concl
    for p in reversed(list(prems)):
        t = mk_imp(p, t)
    return t


def mk_all(x: Free, body: TermExpr) -> TermExpr:
    """!!x. body, binding the free variable x (not normalized)."""
    return App(all_const(x.type), abstract_over(x, body))


def dest_all(t: TermExpr) -> tuple[TypeExpr, TermExpr] | None:
    """Match !!-quantification: returns (binder type, argument term).

    The argument is usually an Abs but may be eta-contracted.
    """
    if (
        isinstance(t, App)
        and isinstance(t.fun, Const)
        and t.fun.name == ALL_NAME
        and isinstance(t.fun.type, Fun)
        and isinstance(t.fun.type.dom, Fun)
    ):
        return t.fun.type.dom.dom, t.arg
    return None


def open_all(t: TermExpr, x: Free) -> TermExpr:
    """Body of a !!-quantification with the bound variable opened as x."""
    d = dest_all(t)
    if d is None:
        raise TermError(f"not a !!-quantification: {t!r}")
    _, arg = d
    if isinstance(arg, Abs):
        return subst_bound(arg.body, x)
    return norm(App(arg, x))


def mk_eq(a: TermExpr, b: TermExpr, ty: TypeExpr | None = None) -> TermExpr:
    if ty is None:
        ty = type_of(a)
    return App(App(eq_const(ty), a), b)


def dest_eq(t: TermExpr) -> tuple[TermExpr, TermExpr] | None:
    if (
        isinstance(t, App)
        and isinstance(t.fun, App)
        and isinstance(t.fun.fun, Const)
        and t.fun.fun.name == EQ_NAME
    ):
        return t.fun.arg, t.arg
    return None
