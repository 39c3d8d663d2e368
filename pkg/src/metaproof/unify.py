"""Higher-order pre-unification.

Disagreement pairs live under a shared binder context and are compared on
eta-expanded views, though terms are stored eta-contracted.  `unify` yields a
lazy stream of results; each result carries an environment (an idempotent
substitution plus a fresh-index counter) and the flex-flex pairs that were
deferred rather than enumerated.  Branches are explored depth-first with a
bounded number of match steps per path; exhausting the bound marks the
stream instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .term import (
    Abs,
    App,
    Bound,
    Const,
    Free,
    IllTyped,
    Schematic,
    TermExpr,
    TypeExpr,
    app,
    apply_subst,
    aconv,
    fun_type,
    max_index,
    norm,
    shift,
    spine,
    strip_type,
    type_of,
)

DEFAULT_DEPTH = 20


@dataclass(frozen=True)
class DisagreementPair:
    """Two terms of the same type under a shared binder context.

    `ctx` lists the binder types innermost-first, so Bound(k) in either side
    has type ctx[k]."""

    ctx: tuple[TypeExpr, ...]
    lhs: TermExpr
    rhs: TermExpr

    def __iter__(self):
        return iter((self.ctx, self.lhs, self.rhs))


class Env:
    """Substitution under construction plus the next fresh schematic index.

    Treated as immutable: `bind` and `fresh` return new environments.  The
    substitution is kept idempotent by composing every existing image with
    each new binding.
    """

    __slots__ = ("subst", "next_index")

    def __init__(self, subst: dict[Schematic, TermExpr] | None = None,
                 next_index: int = 0):
        self.subst: dict[Schematic, TermExpr] = dict(subst or {})
        self.next_index: int = next_index

    def apply(self, t: TermExpr) -> TermExpr:
        return apply_subst(self.subst, t)

    def bind(self, v: Schematic, image: TermExpr) -> "Env":
        one = {v: image}
        new = {u: apply_subst(one, img) for u, img in self.subst.items()}
        new[v] = norm(image)
        return Env(new, self.next_index)

    def fresh(self, name: str, ty: TypeExpr) -> tuple[Schematic, "Env"]:
        v = Schematic(name, self.next_index, ty)
        e = Env(self.subst, self.next_index + 1)
        return v, e

    def __repr__(self) -> str:
        return f"Env({self.subst!r}, next={self.next_index})"


@dataclass(frozen=True)
class UnifyResult:
    env: Env
    flexflex: tuple[DisagreementPair, ...]


class UnifyStream:
    """Iterator over UnifyResults; `depth_exceeded` is set when some branch
    was cut off by the depth bound (exhaustion then does not prove failure)."""

    def __init__(self):
        self._gen: Iterator[UnifyResult] | None = None
        self.depth_exceeded = False

    def __iter__(self) -> Iterator[UnifyResult]:
        return self

    def __next__(self) -> UnifyResult:
        assert self._gen is not None
        return next(self._gen)


def _eta_body(t: TermExpr) -> TermExpr:
    """Body of t viewed as an abstraction (eta-expanding if necessary)."""
    if isinstance(t, Abs):
        return t.body
    return App(shift(t, 1), Bound(0))


class _Clash(Exception):
    pass


def simpl(
    pairs: Iterable[DisagreementPair], env: Env
) -> tuple[list[DisagreementPair], list[DisagreementPair]] | None:
    """Apply env, normalize and decompose every pair.

    Equal rigid heads decompose into argument pairs under the extended
    context; distinct rigid heads fail (returns None); pairs with equal sides
    are dropped.  The survivors come back classified as
    (flex-rigid, flex-flex), each at base type with the flexible side first.
    """
    fr: list[DisagreementPair] = []
    ff: list[DisagreementPair] = []

    def decomp(a: TermExpr, b: TermExpr, ctx: tuple[TypeExpr, ...]):
        if a == b:
            return
        ta = type_of(a, ctx)
        tb = type_of(b, ctx)
        if ta != tb:
            raise IllTyped(f"disagreement pair at different types: {ta!r} vs {tb!r}")
        from .term import Fun

        while isinstance(ta, Fun):
            a = _eta_body(a)
            b = _eta_body(b)
            ctx = (ta.dom,) + ctx
            ta = ta.cod
        a = norm(a)
        b = norm(b)
        if a == b:
            return
        ha, aargs = spine(a)
        hb, bargs = spine(b)
        fa = isinstance(ha, Schematic)
        fb = isinstance(hb, Schematic)
        if fa and fb:
            ff.append(DisagreementPair(ctx, a, b))
        elif fa:
            fr.append(DisagreementPair(ctx, a, b))
        elif fb:
            fr.append(DisagreementPair(ctx, b, a))
        else:
            if ha != hb:
                raise _Clash
            if len(aargs) != len(bargs):
                raise _Clash  # cannot happen for well-typed base-type spines
            for x, y in zip(aargs, bargs):
                decomp(x, y, ctx)

    try:
        for p in pairs:
            decomp(env.apply(p.lhs), env.apply(p.rhs), p.ctx)
    except _Clash:
        return None
    return fr, ff


def _pattern_image(head: Schematic, args: list, common: list
                   ) -> tuple[list[TypeExpr], TermExpr]:
    """Binder types for `head`'s arguments and the body applying a common
    variable list under them (body is built by the caller around them)."""
    doms, _ = strip_type(head.type)
    doms = doms[: len(args)]
    inner = [Bound(len(args) - 1 - args.index(c)) for c in common]
    return doms, inner


def _solve_determined(ff: list[DisagreementPair], env: Env
                      ) -> tuple[Env, list[DisagreementPair]] | None:
    """Solve the flex-flex shapes that have a unique most general unifier.

    These are the pairs F(xs) =?= G(ys) with distinct heads where every
    argument is a bound variable and no variable common to both sides is
    repeated on either.  Substitution images must stay closed, so each
    head can only use the arguments the two sides share: with H fresh,
    F := %xs. H(common) and G := %ys. H(common) is the unique most
    general solution.  When one side is a bare schematic it is reused as
    H itself (then repeated arguments on the other side are harmless,
    since the image uses none of them).  Returns (new env, remaining
    pairs) or None if no pair has such a shape."""
    for k, p in enumerate(ff):
        ha, aargs = spine(p.lhs)
        hb, bargs = spine(p.rhs)
        if ha == hb or not isinstance(ha, Schematic) \
                or not isinstance(hb, Schematic):
            continue
        if not all(isinstance(x, Bound) for x in aargs + bargs):
            continue
        rest = ff[:k] + ff[k + 1:]

        for bare, fhead, fargs in ((ha, hb, bargs), (hb, ha, aargs)):
            if bare is ha and aargs or bare is hb and bargs:
                continue
            doms, _ = strip_type(fhead.type)
            image: TermExpr = bare
            for ty in reversed(doms[: len(fargs)]):
                image = Abs("u", ty, image)
            return env.bind(fhead, image), rest

        common = [x for x in aargs if x in bargs]
        if any(aargs.count(c) != 1 or bargs.count(c) != 1 for c in common):
            continue
        cdoms = [p.ctx[c.offset] for c in common]
        adoms, aret = strip_type(ha.type)
        base = fun_type(adoms[len(aargs):], aret)
        h, env2 = env.fresh(ha.name, fun_type(cdoms, base))
        for head, args in ((ha, aargs), (hb, bargs)):
            doms, inner = _pattern_image(head, args, common)
            image = app(h, *inner)
            for ty in reversed(doms):
                image = Abs("u", ty, image)
            env2 = env2.bind(head, image)
        return env2, rest
    return None


def occurs_rigidly(v: Schematic, t: TermExpr) -> bool:
    """True when v occurs in t outside the reach of any flexible head.

    Such an occurrence survives every substitution, so a flex-rigid pair
    whose flexible head occurs rigidly in the rigid side has no unifier.
    An occurrence applied to arguments, or inside the arguments of another
    schematic, can be erased by a projection and does not count.
    """
    body = t
    while isinstance(body, Abs):
        body = body.body
    head, args = spine(body)
    if isinstance(head, Schematic):
        return head == v and not args
    return any(occurs_rigidly(v, a) for a in args)


def match_step(pair: DisagreementPair, env: Env) -> Iterator[Env]:
    """Candidate bindings for the head of a flex-rigid pair.

    Imitation (when the rigid head is a constant or a free) comes first,
    then projections in argument order; every candidate introduces fresh
    schematics for the remaining structure.
    """
    lhs, rhs = pair.lhs, pair.rhs
    fhead, _fargs = spine(lhs)
    assert isinstance(fhead, Schematic)
    ftys, base = strip_type(fhead.type)
    rhead, rargs = spine(rhs)

    def hole_args(n: int) -> list[TermExpr]:
        return [Bound(n - 1 - j) for j in range(n)]

    n = len(ftys)

    def close(body: TermExpr) -> TermExpr:
        for ty in reversed(ftys):
            body = Abs("x", ty, body)
        return norm(body)

    if isinstance(rhead, (Const, Free)):
        rtys, rbase = strip_type(rhead.type)
        if rbase == base:
            e = env
            holes: list[TermExpr] = []
            for rty in rtys[: len(rargs)]:
                h, e = e.fresh(fhead.name, fun_type(ftys, rty))
                holes.append(_apply(h, hole_args(n)))
            body: TermExpr = rhead
            for h in holes:
                body = App(body, h)
            yield e.bind(fhead, close(body))

    for i, fty in enumerate(ftys):
        ptys, pbase = strip_type(fty)
        if pbase != base:
            continue
        e = env
        holes = []
        for pty in ptys:
            h, e = e.fresh(fhead.name, fun_type(ftys, pty))
            holes.append(_apply(h, hole_args(n)))
        body = Bound(n - 1 - i)
        for h in holes:
            body = App(body, h)
        yield e.bind(fhead, close(body))


def _apply(head: TermExpr, args: list[TermExpr]) -> TermExpr:
    t = head
    for a in args:
        t = App(t, a)
    return t


def unify(
    thy,
    pairs: Iterable[DisagreementPair],
    env: Env | None = None,
    depth: int = DEFAULT_DEPTH,
) -> UnifyStream:
    """Stream of pre-unifiers for the disagreement set.

    Flex-flex pairs are deferred into each result, never enumerated.  The
    first flex-rigid pair is attacked at every step, trying `match_step`
    candidates in order; `depth` bounds match steps per search path.  The
    `thy` argument fixes the signature terms are drawn from; the algorithm
    itself only consults the types on the terms.
    """
    plist = list(pairs)
    if env is None:
        m = -1
        for p in plist:
            m = max(m, max_index(p.lhs), max_index(p.rhs))
        env = Env({}, m + 1)

    stream = UnifyStream()

    def search(pairs: list[DisagreementPair], env: Env, fuel: int):
        res = simpl(pairs, env)
        if res is None:
            return
        fr, ff = res
        det = _solve_determined(ff, env)
        if det is not None:
            env2, rest = det
            yield from search(fr + rest, env2, fuel)
            return
        if not fr:
            yield UnifyResult(env, tuple(ff))
            return
        pair = fr[0]
        fhead, _ = spine(pair.lhs)
        assert isinstance(fhead, Schematic)
        if occurs_rigidly(fhead, pair.rhs):
            return
        if fuel <= 0:
            stream.depth_exceeded = True
            return
        rest = fr + ff
        for env2 in match_step(pair, env):
            yield from search(rest, env2, fuel - 1)

    stream._gen = search(plist, env, depth)
    return stream
