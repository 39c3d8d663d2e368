"""Theories: named signatures (types, constants with fixity), axiom tables
and constant definitions, arranged in a parent hierarchy.

`Pure` holds only the meta-logic; `IPL` adds intuitionistic propositional
logic as an object logic; `IFOL` adds quantifiers and equality on a domain
of individuals.  Theories are immutable after construction; `extend` never
changes its parent.  Shared ancestors in a diamond are identified by name.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernel
from . import term as T
from .term import (
    Basic,
    Const,
    Fun,
    PROP,
    TermExpr,
    TypeExpr,
    aconv,
    norm,
    spine,
    strip_type,
    type_of,
)


class TheoryError(T.TermError):
    pass


class DuplicateName(TheoryError):
    pass


class IllTypedAxiom(TheoryError):
    pass


class BadDefinition(TheoryError):
    pass


class NoSuchDef(TheoryError):
    pass


class UnknownTheory(TheoryError):
    pass


@dataclass(frozen=True)
class Fixity:
    kind: str = "prefix"  # "prefix" | "infix" | "binder"
    prec: int = 0
    assoc: str = "r"


PREFIX = Fixity("prefix")


def infix(prec: int, assoc: str = "r") -> Fixity:
    return Fixity("infix", prec, assoc)


BINDER = Fixity("binder")


@dataclass(frozen=True)
class ConstDecl:
    name: str
    type: TypeExpr
    fixity: Fixity = PREFIX


@dataclass
class Decls:
    """A batch of declarations for `extend`; axioms arrive already parsed."""

    name: str
    types: list[str] = field(default_factory=list)
    consts: list[ConstDecl] = field(default_factory=list)
    axioms: list[tuple[str, TermExpr]] = field(default_factory=list)
    defs: list[tuple[str, TermExpr]] = field(default_factory=list)


_REGISTRY: dict[str, "Theory"] = {}


def lookup(name: str) -> "Theory | None":
    if name in ("Pure", "IPL", "IFOL") and name not in _REGISTRY:
        builtin(name)
    return _REGISTRY.get(name)


class Theory:
    """Immutable theory node; lookups walk the ancestry."""

    def __init__(self, name: str, parents: tuple["Theory", ...],
                 types: tuple[str, ...], consts: dict[str, ConstDecl],
                 axioms: dict[str, TermExpr], defs: dict[str, TermExpr]):
        self.name = name
        self.parents = parents
        self._types = types
        self._consts = consts
        self._axioms = axioms
        self._defs = defs

    # -- ancestry -------------------------------------------------------

    def ancestry(self) -> list["Theory"]:
        """Ancestors-first linearization, deduplicated by theory name."""
        out: list[Theory] = []
        seen: set[str] = set()

        def walk(thy: Theory):
            for p in thy.parents:
                walk(p)
            if thy.name not in seen:
                seen.add(thy.name)
                out.append(thy)

        walk(self)
        return out

    # -- lookups --------------------------------------------------------

    def type_names(self) -> list[str]:
        out = ["prop"]
        for thy in self.ancestry():
            for t in thy._types:
                if t not in out:
                    out.append(t)
        return out

    def const_items(self) -> list[ConstDecl]:
        out: list[ConstDecl] = []
        for thy in self.ancestry():
            out.extend(thy._consts.values())
        return out

    def const_decl(self, name: str) -> ConstDecl | None:
        for thy in self.ancestry():
            if name in thy._consts:
                return thy._consts[name]
        return None

    def const_type(self, name: str) -> TypeExpr | None:
        d = self.const_decl(name)
        return d.type if d else None

    def axiom_items(self) -> list[tuple[str, TermExpr]]:
        out: list[tuple[str, TermExpr]] = []
        for thy in self.ancestry():
            out.extend(thy._axioms.items())
        return out

    def axiom_prop(self, name: str) -> TermExpr | None:
        for thy in self.ancestry():
            if name in thy._axioms:
                return thy._axioms[name]
        return None

    def def_rhs(self, const_name: str) -> TermExpr | None:
        for thy in self.ancestry():
            if const_name in thy._defs:
                return thy._defs[const_name]
        return None

    def def_items(self) -> list[tuple[str, TermExpr]]:
        out: list[tuple[str, TermExpr]] = []
        for thy in self.ancestry():
            out.extend(thy._defs.items())
        return out

    # -- well-formedness ------------------------------------------------

    def _check_type(self, ty: TypeExpr, what: str) -> None:
        names = self.type_names()
        if isinstance(ty, Basic):
            if ty.name not in names:
                raise IllTypedAxiom(f"{what}: unknown type {ty.name!r}")
        else:
            self._check_type(ty.dom, what)
            self._check_type(ty.cod, what)

    def check_term(self, t: TermExpr) -> None:
        """Signature membership: every constant declared at its exact type
        (meta-constants at a legal instance), every basic type known."""
        for u in T.subterms(t):
            if isinstance(u, Const):
                if u.name == T.IMP_NAME:
                    if u.type != T.IMP_TYPE:
                        raise T.IllTyped(f"bad type for ==>: {u.type!r}")
                elif u.name == T.ALL_NAME:
                    ok = (
                        isinstance(u.type, Fun)
                        and isinstance(u.type.dom, Fun)
                        and u.type.dom.cod == PROP
                        and u.type.cod == PROP
                    )
                    if not ok:
                        raise T.IllTyped(f"bad type for !!: {u.type!r}")
                    self._check_type(u.type.dom.dom, "!!")
                elif u.name == T.EQ_NAME:
                    ok = (
                        isinstance(u.type, Fun)
                        and isinstance(u.type.cod, Fun)
                        and u.type.dom == u.type.cod.dom
                        and u.type.cod.cod == PROP
                    )
                    if not ok:
                        raise T.IllTyped(f"bad type for ==: {u.type!r}")
                    self._check_type(u.type.dom, "==")
                else:
                    ty = self.const_type(u.name)
                    if ty is None:
                        raise T.IllTyped(
                            f"constant {u.name!r} not declared in {self.name!r}"
                        )
                    if ty != u.type:
                        raise T.IllTyped(
                            f"constant {u.name!r} used at {u.type!r}, declared {ty!r}"
                        )
            elif isinstance(u, (T.Free, T.Schematic)):
                self._check_type(u.type, f"variable {u.name}")
            elif isinstance(u, T.Abs):
                self._check_type(u.var_type, "binder")

    def __repr__(self) -> str:
        return f"<Theory {self.name}>"


def _register(thy: Theory) -> Theory:
    _REGISTRY[thy.name] = thy
    kernel.register_theory(thy)
    return thy


def extend(parent: Theory | list[Theory], decls: Decls,
           register: bool = True) -> Theory:
    """Build a child theory; the parent is observationally unchanged.

    Rejects any redeclaration of an inherited or repeated name, ill-typed
    axioms, and non-conservative definitions.
    """
    parents = tuple(parent) if isinstance(parent, (list, tuple)) else (parent,)
    base_types: set[str] = set()
    base_consts: set[str] = set()
    base_axioms: set[str] = set()
    base_defs: set[str] = set()
    for p in parents:
        for a in p.ancestry():
            base_types.update(a._types)
            base_consts.update(a._consts)
            base_axioms.update(a._axioms)
            base_defs.update(a._defs)

    types: list[str] = []
    for ty in decls.types:
        if ty in base_types or ty in types or ty == "prop":
            raise DuplicateName(f"type {ty!r} already declared")
        types.append(ty)

    tmp = Theory(decls.name, parents, tuple(types), {}, {}, {})

    consts: dict[str, ConstDecl] = {}
    for c in decls.consts:
        if c.name in base_consts or c.name in consts or c.name in (
            T.IMP_NAME, T.ALL_NAME, T.EQ_NAME
        ):
            raise DuplicateName(f"constant {c.name!r} already declared")
        tmp._check_type(c.type, f"constant {c.name}")
        if c.fixity.kind == "infix":
            doms, _ = strip_type(c.type)
            if len(doms) < 2:
                raise TheoryError(f"infix constant {c.name!r} needs two arguments")
        if c.fixity.kind == "binder":
            doms, _ = strip_type(c.type)
            if len(doms) != 1 or not isinstance(doms[0], Fun):
                raise TheoryError(
                    f"binder constant {c.name!r} needs exactly one function argument"
                )
        consts[c.name] = c

    tmp = Theory(decls.name, parents, tuple(types), consts, {}, {})

    axioms: dict[str, TermExpr] = {}
    for name, prop in decls.axioms:
        if name in base_axioms or name in axioms:
            raise DuplicateName(f"axiom {name!r} already declared")
        prop = norm(prop)
        try:
            if type_of(prop) != PROP:
                raise IllTypedAxiom(f"axiom {name!r} is not a prop")
            tmp.check_term(prop)
        except T.TermError as e:
            raise IllTypedAxiom(f"axiom {name!r}: {e}") from e
        axioms[name] = prop

    defs: dict[str, TermExpr] = {}
    for label, eqn in decls.defs:
        d = T.dest_eq(norm_def := eqn)
        if d is None:
            raise BadDefinition(f"definition {label!r} is not an equation")
        lhs, rhs = d
        if not isinstance(lhs, Const):
            raise BadDefinition(f"definition {label!r}: left side must be a constant")
        kname = lhs.name
        if kname not in consts and kname not in base_consts:
            raise BadDefinition(f"definition {label!r}: {kname!r} not declared")
        if kname in defs or kname in base_defs:
            raise DuplicateName(f"constant {kname!r} already defined")
        rhs = norm(rhs)
        decl_ty = consts[kname].type if kname in consts else None
        if decl_ty is None:
            for p in parents:
                decl_ty = decl_ty or p.const_type(kname)
        if type_of(rhs) != decl_ty:
            raise BadDefinition(
                f"definition {label!r}: right side type {type_of(rhs)!r} "
                f"does not match {decl_ty!r}"
            )
        if T.free_vars(rhs) or T.schematic_vars(rhs):
            raise BadDefinition(f"definition {label!r}: right side must be closed")
        if any(isinstance(u, Const) and u.name == kname for u in T.subterms(rhs)):
            raise BadDefinition(f"definition {label!r}: {kname!r} occurs in its own body")
        tmp.check_term(rhs)
        defs[kname] = rhs

    thy = Theory(decls.name, parents, tuple(types), consts, axioms, defs)
    if register:
        _register(thy)
    return thy


# -------------------------------------------------------------- builtins


_IPL_CONSTS = [
    ConstDecl("Tr", Fun(Basic("form"), PROP)),
    ConstDecl("False", Basic("form")),
    ConstDecl("&", Fun(Basic("form"), Fun(Basic("form"), Basic("form"))), infix(5)),
    ConstDecl("|", Fun(Basic("form"), Fun(Basic("form"), Basic("form"))), infix(4)),
    ConstDecl("-->", Fun(Basic("form"), Fun(Basic("form"), Basic("form"))), infix(3)),
]

_IPL_AXIOMS = [
    ("conjI", "Tr(?A) ==> Tr(?B) ==> Tr(?A & ?B)"),
    ("conjE1", "Tr(?A & ?B) ==> Tr(?A)"),
    ("conjE2", "Tr(?A & ?B) ==> Tr(?B)"),
    ("disjI1", "Tr(?A) ==> Tr(?A | ?B)"),
    ("disjI2", "Tr(?B) ==> Tr(?A | ?B)"),
    ("disjE", "Tr(?A | ?B) ==> (Tr(?A) ==> Tr(?C)) ==> (Tr(?B) ==> Tr(?C)) ==> Tr(?C)"),
    ("impI", "(Tr(?A) ==> Tr(?B)) ==> Tr(?A --> ?B)"),
    ("mp", "Tr(?A --> ?B) ==> Tr(?A) ==> Tr(?B)"),
    ("FalseE", "Tr(False) ==> Tr(?A)"),
]

_IFOL_CONSTS = [
    ConstDecl("ALL", Fun(Fun(Basic("term"), Basic("form")), Basic("form")), BINDER),
    ConstDecl("EX", Fun(Fun(Basic("term"), Basic("form")), Basic("form")), BINDER),
    ConstDecl("=", Fun(Basic("term"), Fun(Basic("term"), Basic("form"))), infix(6)),
]

_IFOL_AXIOMS = [
    ("allI", "(!!x. Tr(?F(x))) ==> Tr(ALL x. ?F(x))"),
    ("spec", "Tr(ALL x. ?F(x)) ==> Tr(?F(?y))"),
    ("exI", "Tr(?F(?y)) ==> Tr(EX x. ?F(x))"),
    ("exE", "Tr(EX x. ?F(x)) ==> (!!x. Tr(?F(x)) ==> Tr(?B)) ==> Tr(?B)"),
    ("refl", "Tr(?y = ?y)"),
]


def _build(parents, name: str, types: list[str], consts: list[ConstDecl],
           axiom_srcs: list[tuple[str, str]],
           def_srcs: list[tuple[str, str]] | None = None,
           register: bool = True) -> Theory:
    """Two-stage construction: a constants-only draft supplies the parse
    table for the axiom sources, then the real theory is built."""
    from . import syntax

    draft = extend(
        parents, Decls(name=name, types=list(types), consts=list(consts)),
        register=False,
    )
    table = syntax.table_for(draft)
    axioms = [(n, syntax.parse_term(table, src)) for n, src in axiom_srcs]
    defs = [(n, syntax.parse_term(table, src)) for n, src in def_srcs or []]
    return extend(
        parents,
        Decls(name=name, types=list(types), consts=list(consts),
              axioms=axioms, defs=defs),
        register=register,
    )


_builtins: dict[str, Theory] = {}


def builtin(name: str) -> Theory:
    """Pure, IPL or IFOL (cached)."""
    if name in _builtins:
        return _builtins[name]
    if name == "Pure":
        thy = Theory("Pure", (), ("prop",), {}, {}, {})
        _register(thy)
    elif name == "IPL":
        thy = _build([builtin("Pure")], "IPL", ["form"], _IPL_CONSTS, _IPL_AXIOMS)
    elif name == "IFOL":
        thy = _build([builtin("IPL")], "IFOL", ["term"], _IFOL_CONSTS, _IFOL_AXIOMS)
    else:
        raise UnknownTheory(f"no builtin theory {name!r}")
    _builtins[name] = thy
    return thy


# ------------------------------------------------------------ definitions


def _fresh_free(base: str, ty: TypeExpr, avoid: set[str]) -> T.Free:
    name = base
    n = 0
    while name in avoid:
        n += 1
        name = f"{base}{n}"
    avoid.add(name)
    return T.Free(name, ty)


def _congruence(thy: Theory, step, t: TermExpr, avoid: set[str]):
    """Rewrite outermost-first through the term structure.

    `step(t)` returns |- t == t' at a matching position or None; elsewhere
    the walk rebuilds the term with reflexivity, combination and
    abstraction."""
    got = step(t)
    if got is not None:
        return got
    if isinstance(t, T.App):
        return kernel.combination(
            _congruence(thy, step, t.fun, avoid),
            _congruence(thy, step, t.arg, avoid),
        )
    if isinstance(t, T.Abs):
        x = _fresh_free(t.hint or "x", t.var_type, avoid)
        body = T.subst_bound(t.body, x)
        return kernel.abstract_rule(x, _congruence(thy, step, body, avoid))
    return kernel.reflexive(thy, t)


def _rewrite_with(thy: Theory, th, step):
    avoid = {f.name for f in T.free_vars(th.prop)}
    avoid.update(c.name for c in thy.const_items())
    eq = _congruence(thy, step, th.prop, avoid)
    _, rebuilt = T.dest_eq(eq.prop)
    conv = kernel.beta_eta_conversion(thy, rebuilt)
    return kernel.equal_elim(kernel.transitive(eq, conv), th)


def unfold_def(thy: Theory, const_name: str, th) -> "kernel.Theorem":
    """Replace the defined constant by its body throughout, renormalizing."""
    if thy.def_rhs(const_name) is None:
        raise NoSuchDef(f"no definition for {const_name!r} in {thy.name!r}")
    eq_def = kernel.def_axiom(thy, const_name)
    kconst = Const(const_name, thy.const_type(const_name))

    def step(t: TermExpr):
        return eq_def if t == kconst else None

    return _rewrite_with(thy, th, step)


def fold_def(thy: Theory, const_name: str, th) -> "kernel.Theorem":
    """Contract instances of the definition body back to the constant,
    outermost occurrences first."""
    from . import unify as U

    rhs = thy.def_rhs(const_name)
    if rhs is None:
        raise NoSuchDef(f"no definition for {const_name!r} in {thy.name!r}")
    kty = thy.const_type(const_name)
    doms, _ = strip_type(kty)
    eq_def = kernel.def_axiom(thy, const_name)
    kconst = Const(const_name, kty)

    ret_ty = strip_type(kty)[1]

    def step(t: TermExpr):
        if isinstance(t, (T.Bound, T.Abs)) or type_of(t) != ret_ty:
            return None
        base = T.max_index(t) + 1
        pvars = [T.Schematic("p", base + i, doms[i]) for i in range(len(doms))]
        pattern = norm(T.app(rhs, *pvars))
        pair = U.DisagreementPair((), pattern, t)
        try:
            res = next(iter(U.unify(thy, [pair])), None)
        except T.TermError:
            return None
        if res is None or res.flexflex:
            return None
        sub = res.env.subst
        if any(k not in pvars for k in sub):
            return None  # would instantiate the theorem's own schematics
        if any(v not in sub for v in pvars):
            return None  # argument not determined by the match
        args = [sub[v] for v in pvars]
        eq = eq_def
        for a in args:
            eq = kernel.combination(eq, kernel.reflexive(thy, a))
        applied = T.app(rhs, *args)
        conv = kernel.beta_eta_conversion(thy, applied)
        if not aconv(T.dest_eq(conv.prop)[1], t):
            return None
        return kernel.symmetric(kernel.transitive(eq, conv))

    return _rewrite_with(thy, th, step)
