"""Concrete syntax: lexing, parsing with type inference, and printing.

The term grammar in brief:

    %x. b          abstraction (binders scope as far right as possible)
    !!x. b         meta-level generality
    a ==> b        meta-level implication, right associative, loosest
    a == b         meta-level equality
    f(a, b)        application, tightest
    ?A  ?A.2       schematic variables (index 0 is written bare)
    x::term        type annotation

Object-logic infixes and binders come from the theory's declarations with
their precedences.  Parsing leaves terms exactly as written (no
normalization); printing produces a string that reads back as the same
term.
"""

from __future__ import annotations

import re

from . import term as T
from .term import Basic, Const, Fun, PROP, TermExpr, TypeExpr


class ParseError(T.TermError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


# ---------------------------------------------------------------- lexing

_SYMCHARS = "=<>-+*/&|!%~^@#$\\"

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<schem>\?[A-Za-z_][A-Za-z0-9_']*(?:\.[0-9]+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<colons>::)
    | (?P<lp>\() | (?P<rp>\)) | (?P<comma>,) | (?P<dot>\.)
    | (?P<sym>[""" + re.escape(_SYMCHARS) + r"""]+)
    """,
    re.VERBOSE,
)


class Token:
    __slots__ = ("kind", "text", "pos", "index")

    def __init__(self, kind: str, text: str, pos: int, index: int = 0):
        self.kind = kind
        self.text = text
        self.pos = pos
        self.index = index

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r})"


def tokenize(src: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "schem":
                body = text[1:]
                if "." in body:
                    name, idx = body.split(".")
                    out.append(Token("schem", name, pos, int(idx)))
                else:
                    out.append(Token("schem", body, pos, 0))
            else:
                out.append(Token(kind, text, pos))
        pos = m.end()
    out.append(Token("eof", "", n))
    return out


# ----------------------------------------------------- the syntax table

ATOM_PREC = 100

_META_INFIX = {T.IMP_NAME: (1, "r"), T.EQ_NAME: (2, "r")}


class SyntaxTable:
    """What the parser and printer need to know about a theory."""

    def __init__(self, type_names, consts):
        self.type_names = list(type_names)
        self.consts = dict(consts)  # name -> (type, Fixity)
        self.infix: dict[str, tuple[int, str]] = dict(_META_INFIX)
        self.binders: set[str] = {T.ALL_NAME}
        for name, (_ty, fix) in self.consts.items():
            if fix.kind == "infix":
                self.infix[name] = (fix.prec, fix.assoc)
            elif fix.kind == "binder":
                self.binders.add(name)

    def const_type(self, name: str) -> TypeExpr | None:
        entry = self.consts.get(name)
        return entry[0] if entry else None


def table_for(thy) -> SyntaxTable:
    consts = {c.name: (c.type, c.fixity) for c in thy.const_items()}
    return SyntaxTable(thy.type_names(), consts)


def _as_table(thy_or_table) -> SyntaxTable:
    if isinstance(thy_or_table, SyntaxTable):
        return thy_or_table
    return table_for(thy_or_table)


# ------------------------------------------------------- type inference

class _TMeta:
    __slots__ = ("id",)
    _next = 0

    def __init__(self):
        self.id = _TMeta._next
        _TMeta._next += 1

    def __repr__(self) -> str:
        return f"?t{self.id}"


class _Infer:
    def __init__(self):
        self.subst: dict[int, object] = {}

    def fresh(self) -> _TMeta:
        return _TMeta()

    def prune(self, ty):
        while isinstance(ty, _TMeta) and ty.id in self.subst:
            ty = self.subst[ty.id]
        return ty

    def _occurs(self, m: _TMeta, ty) -> bool:
        ty = self.prune(ty)
        if isinstance(ty, _TMeta):
            return ty.id == m.id
        if isinstance(ty, Fun):
            return self._occurs(m, ty.dom) or self._occurs(m, ty.cod)
        return False

    def unify(self, a, b) -> None:
        a = self.prune(a)
        b = self.prune(b)
        if isinstance(a, _TMeta):
            if isinstance(b, _TMeta) and b.id == a.id:
                return
            if self._occurs(a, b):
                raise T.IllTyped("circular type constraint")
            self.subst[a.id] = b
            return
        if isinstance(b, _TMeta):
            self.unify(b, a)
            return
        if isinstance(a, Basic) and isinstance(b, Basic):
            if a.name != b.name:
                raise T.IllTyped(f"type mismatch: {a.name} vs {b.name}")
            return
        if isinstance(a, Fun) and isinstance(b, Fun):
            self.unify(a.dom, b.dom)
            self.unify(a.cod, b.cod)
            return
        raise T.IllTyped("type mismatch: function type vs base type")

    def resolve(self, ty, what: str) -> TypeExpr:
        ty = self.prune(ty)
        if isinstance(ty, _TMeta):
            raise T.IllTyped(
                f"cannot infer the type of {what}; add a ::type annotation"
            )
        if isinstance(ty, Fun):
            return Fun(self.resolve(ty.dom, what), self.resolve(ty.cod, what))
        return ty


# --------------------------------------------------------------- parser

class _Parser:
    """Precedence-climbing parser producing (type, build) pairs; `build`
    is run once inference has pinned every type."""

    def __init__(self, table: SyntaxTable, tokens: list[Token]):
        self.table = table
        self.toks = tokens
        self.i = 0
        self.inf = _Infer()
        self.frees: dict[str, object] = {}
        self.schems: dict[tuple[str, int], object] = {}

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what}, found {(tok.text or 'end of input')!r}", tok.pos
            )
        return tok

    # types

    def parse_type(self) -> TypeExpr:
        left = self.parse_type_atom()
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "->":
            self.next()
            return Fun(left, self.parse_type())
        return left

    def parse_type_atom(self) -> TypeExpr:
        tok = self.next()
        if tok.kind == "lp":
            ty = self.parse_type()
            self.expect("rp", "')'")
            return ty
        if tok.kind == "ident":
            if tok.text not in self.table.type_names:
                raise ParseError(f"unknown type {tok.text!r}", tok.pos)
            return Basic(tok.text)
        raise ParseError(f"expected a type, found {tok.text!r}", tok.pos)

    # terms

    def parse_term(self, min_prec: int, env: list[tuple[str, object]]):
        left = self.parse_prefix(env)
        while True:
            tok = self.peek()
            if tok.kind not in ("sym", "ident") or tok.text not in self.table.infix:
                break
            prec, assoc = self.table.infix[tok.text]
            if prec < min_prec:
                break
            self.next()
            op = self.const_use(tok.text, tok.pos)
            rhs_min = prec if assoc == "r" else prec + 1
            right = self.parse_term(rhs_min, env)
            left = self.apply(self.apply(op, left, tok.pos), right, tok.pos)
        return left

    def parse_prefix(self, env):
        tok = self.next()
        if tok.kind == "lp":
            inner = self.parse_term(0, env)
            self.expect("rp", "')'")
            return self.parse_trailing(inner, env)
        if tok.kind == "sym" and tok.text == "%":
            return self.parse_binder(None, env, tok.pos)
        if tok.kind in ("sym", "ident") and tok.text in self.table.binders:
            return self.parse_binder(tok.text, env, tok.pos)
        if tok.kind == "schem":
            key = (tok.text, tok.index)
            if key not in self.schems:
                self.schems[key] = self.inf.fresh()
            ty = self.schems[key]
            nm, ix = key
            atom = (ty, lambda R, nm=nm, ix=ix, ty=ty:
                    T.Schematic(nm, ix, R(ty, f"?{nm}")))
            return self.parse_trailing(atom, env)
        if tok.kind == "ident":
            name = tok.text
            for k, (vname, vty) in enumerate(env):
                if vname == name:
                    atom = (vty, lambda R, k=k: T.Bound(k))
                    return self.parse_trailing(atom, env)
            if name in self.table.consts:
                return self.parse_trailing(self.const_use(name, tok.pos), env)
            if name not in self.frees:
                self.frees[name] = self.inf.fresh()
            ty = self.frees[name]
            atom = (ty, lambda R, name=name, ty=ty: T.Free(name, R(ty, name)))
            return self.parse_trailing(atom, env)
        if tok.kind == "sym":
            if tok.text in self.table.consts or tok.text in _META_INFIX:
                if tok.text in self.table.infix:
                    raise ParseError(f"{tok.text!r} needs a left operand", tok.pos)
                return self.parse_trailing(self.const_use(tok.text, tok.pos), env)
            raise ParseError(f"unknown symbol {tok.text!r}", tok.pos)
        raise ParseError(
            f"unexpected {(tok.text or 'end of input')!r} in term", tok.pos
        )

    def parse_binder(self, binder_name: str | None, env, pos: int):
        vars_: list[tuple[str, object]] = []
        while self.peek().kind == "ident":
            vtok = self.next()
            vty: object = self.inf.fresh()
            if self.peek().kind == "colons":
                self.next()
                vty = self.parse_type()
            vars_.append((vtok.text, vty))
        if not vars_:
            raise ParseError("binder needs at least one variable", self.peek().pos)
        self.expect("dot", "'.' after binder variables")
        inner_env = list(reversed([(n, t) for n, t in vars_])) + list(env)
        body = self.parse_term(0, inner_env)
        for vname, vty in reversed(vars_):
            bty, bbuild = body
            lam = (Fun(vty, bty),
                   lambda R, vname=vname, vty=vty, bbuild=bbuild:
                   T.Abs(vname, R(vty, vname), bbuild(R)))
            if binder_name is None:
                body = lam
            else:
                op = self.const_use(binder_name, pos)
                body = self.apply(op, lam, pos)
        return body

    def parse_trailing(self, atom, env):
        while True:
            tok = self.peek()
            if tok.kind == "lp":
                self.next()
                args = [self.parse_term(0, env)]
                while self.peek().kind == "comma":
                    self.next()
                    args.append(self.parse_term(0, env))
                self.expect("rp", "')'")
                for a in args:
                    atom = self.apply(atom, a, tok.pos)
            elif tok.kind == "colons":
                self.next()
                ty = self.parse_type()
                try:
                    self.inf.unify(atom[0], ty)
                except T.IllTyped as e:
                    raise ParseError(f"annotation does not fit: {e}", tok.pos) from e
                atom = (ty, atom[1])
            else:
                return atom

    def const_use(self, name: str, pos: int):
        if name == T.IMP_NAME:
            ty: object = T.IMP_TYPE
        elif name == T.ALL_NAME:
            a = self.inf.fresh()
            ty = Fun(Fun(a, PROP), PROP)
        elif name == T.EQ_NAME:
            a = self.inf.fresh()
            ty = Fun(a, Fun(a, PROP))
        else:
            declared = self.table.const_type(name)
            if declared is None:
                raise ParseError(f"unknown constant {name!r}", pos)
            ty = declared
        return (ty, lambda R, name=name, ty=ty: Const(name, R(ty, name)))

    def apply(self, f, a, pos: int):
        fty, fbuild = f
        aty, abuild = a
        res = self.inf.fresh()
        try:
            self.inf.unify(fty, Fun(aty, res))
        except T.IllTyped as e:
            raise ParseError(f"cannot apply here: {e}", pos) from e
        return (res, lambda R: T.App(fbuild(R), abuild(R)))


def parse_term(table, src: str, expect: TypeExpr | None = None) -> TermExpr:
    """Parse a term exactly as written; no normalization is applied.

    ``table`` may be a SyntaxTable or a Theory.  When the caller already
    knows the term's type, passing it as ``expect`` feeds inference, so
    sources like ``f(c)`` need no annotations.
    """
    p = _Parser(_as_table(table), tokenize(src))
    ty, build = p.parse_term(0, [])
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r} after term", tok.pos)
    if expect is not None:
        p.inf.unify(ty, expect)
    return build(p.inf.resolve)


def parse_prop(table, src: str) -> TermExpr:
    """Parse a term and require it to be a proposition."""
    t = parse_term(table, src)
    ty = T.type_of(t)
    if ty != PROP:
        raise ParseError(f"expected a proposition, got a {type_str(ty)}")
    return t


def parse_type(table, src: str) -> TypeExpr:
    p = _Parser(_as_table(table), tokenize(src))
    ty = p.parse_type()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r} after type", tok.pos)
    return ty


# -------------------------------------------------------------- printing

def type_str(ty: TypeExpr) -> str:
    if isinstance(ty, Basic):
        return ty.name
    dom = type_str(ty.dom)
    if isinstance(ty.dom, Fun):
        dom = f"({dom})"
    return f"{dom} -> {type_str(ty.cod)}"


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class _Printer:
    """Renders a term; the result parses back to the same term.

    `ctx` pairs a display name with the type of each enclosing binder,
    innermost first.  Binders print without parentheses only in
    right-open positions, where their scope can run to the next closing
    delimiter.
    """

    def __init__(self, table: SyntaxTable, t: TermExpr, annotate: bool = False):
        self.table = table
        self.annotate = annotate
        self.seen: set = set()
        self.avoid = {f.name for f in T.free_vars(t)}
        self.avoid.update(table.consts)

    def binding(self, name: str, ty: TypeExpr) -> str:
        if not self.annotate:
            return name
        ts = type_str(ty)
        if isinstance(ty, Fun):
            ts = f"({ts})"
        return f"{name}::{ts}"

    def fresh_hint(self, hint: str, ctx) -> str:
        base = hint if hint and _IDENT_RE.match(hint) else "x"
        taken = {n for n, _ in ctx}
        name = base
        n = 0
        while name in self.avoid or name in taken:
            n += 1
            name = f"{base}{n}"
        return name

    def binder_app(self, t: TermExpr) -> str | None:
        if (isinstance(t, T.App) and isinstance(t.fun, Const)
                and t.fun.name in self.table.binders):
            return t.fun.name
        return None

    def pp(self, t: TermExpr, min_prec: int, ro: bool, ctx) -> str:
        name = self.binder_app(t)
        if name is not None:
            return self.pp_binder(name, t, ro, ctx)
        if isinstance(t, T.Abs):
            return self.pp_lambda(t, ro, ctx)

        head, args = T.spine(t)
        if isinstance(head, Const):
            entry = self.table.infix.get(head.name)
            if entry is not None:
                if len(args) == 2:
                    return self.pp_infix(head.name, entry, args[0], args[1],
                                         min_prec, ro, ctx)
                return self.pp(self.eta_fill(t, ctx), min_prec, ro, ctx)
            if head.name in self.table.binders and not args:
                return self.pp(self.eta_fill(t, ctx), min_prec, ro, ctx)

        if not args:
            return self.atom_str(head, ctx)
        if isinstance(head, (Const, T.Free, T.Schematic, T.Bound)):
            head_str = self.atom_str(head, ctx)
        else:
            head_str = self.pp(head, ATOM_PREC, False, ctx)
        inner = ", ".join(self.pp(a, 0, True, ctx) for a in args)
        return f"{head_str}({inner})"

    def eta_fill(self, t: TermExpr, ctx) -> T.Abs:
        """Wrap an unsaturated operator in a lambda so it can be shown
        with its usual notation."""
        ty = T.type_of(t, tuple(vt for _, vt in ctx))
        return T.Abs("x", ty.dom, T.App(T.shift(t, 1), T.Bound(0)))

    def pp_infix(self, name, entry, a, b, min_prec, ro, ctx) -> str:
        prec, assoc = entry
        wrap = prec < min_prec
        lmin = prec + 1 if assoc == "r" else prec
        rmin = prec if assoc == "r" else prec + 1
        left = self.pp(a, lmin, False, ctx)
        right = self.pp(b, rmin, True if wrap else ro, ctx)
        s = f"{left} {name} {right}"
        return f"({s})" if wrap else s

    def pp_binder(self, name: str, t: TermExpr, ro: bool, ctx) -> str:
        groups: list[str] = []
        new_ctx = list(ctx)
        cur: TermExpr = t
        while self.binder_app(cur) == name:
            arg = cur.arg
            vty = cur.fun.type.dom.dom
            if isinstance(arg, T.Abs):
                hint, body = arg.hint, arg.body
            else:
                hint, body = "x", T.App(T.shift(arg, 1), T.Bound(0))
            v = self.fresh_hint(hint, new_ctx)
            groups.append(self.binding(v, vty))
            new_ctx.insert(0, (v, vty))
            cur = body
        inner = self.pp(cur, 0, True, new_ctx)
        sep = " " if _IDENT_RE.match(name) else ""
        s = f"{name}{sep}{' '.join(groups)}. {inner}"
        return s if ro else f"({s})"

    def pp_lambda(self, t: T.Abs, ro: bool, ctx) -> str:
        groups: list[str] = []
        new_ctx = list(ctx)
        body: TermExpr = t
        while isinstance(body, T.Abs):
            v = self.fresh_hint(body.hint, new_ctx)
            groups.append(self.binding(v, body.var_type))
            new_ctx.insert(0, (v, body.var_type))
            body = body.body
        inner = self.pp(body, 0, True, new_ctx)
        s = f"%{' '.join(groups)}. {inner}"
        return s if ro else f"({s})"

    def atom_str(self, t: TermExpr, ctx) -> str:
        if isinstance(t, T.Bound):
            if t.offset < len(ctx):
                return ctx[t.offset][0]
            return f"B.{t.offset}"
        if isinstance(t, T.Schematic):
            s = f"?{t.name}" if t.index == 0 else f"?{t.name}.{t.index}"
            if self.annotate and (t.name, t.index) not in self.seen:
                self.seen.add((t.name, t.index))
                return self.binding(s, t.type)
            return s
        if isinstance(t, T.Free) and self.annotate and t.name not in self.seen:
            self.seen.add(t.name)
            return self.binding(t.name, t.type)
        return t.name


def print_term(table, t: TermExpr) -> str:
    """Render `t`; binder variables are annotated with their types only
    when plain output would not read back unambiguously."""
    table = _as_table(table)
    out = _Printer(table, t).pp(t, 0, True, [])
    try:
        if T.aconv(T.norm(parse_term(table, out)), T.norm(t)):
            return out
    except T.TermError:
        pass
    return _Printer(table, t, annotate=True).pp(t, 0, True, [])


def print_in_context(table, t: TermExpr, params, annotate: bool = False) -> str:
    """Render an open term whose loose bound indexes refer to `params`, a
    list of (name, type) pairs outermost first.  No read-back check is
    possible for open terms, so callers wanting richer output pass
    `annotate`."""
    table = _as_table(table)
    p = _Printer(table, t, annotate)
    return p.pp(t, 0, True, list(reversed(list(params))))


def display_prop(th) -> TermExpr:
    """The statement of a theorem with any deferred unification pairs
    shown as extra equational antecedents."""
    prop = th.prop
    for ctx, a, b in reversed(th.flexflex):
        ty = T.type_of(a, ctx)
        eq = T.mk_eq(a, b, ty)
        for vty in ctx:
            eq = T.App(T.all_const(vty), T.Abs("u", vty, eq))
        prop = T.mk_imp(eq, prop)
    return prop


def print_theorem(table, th) -> str:
    body = print_term(table, display_prop(th))
    if th.hyps:
        hyps = ", ".join(print_term(table, h) for h in th.hyps)
        return f"{hyps} |- {body}"
    return f"|- {body}"


# --------------------------------------------------------- theory files

_THY_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>\#[^\n]*)
    | (?P<string>"[^"\n]*")
    | (?P<colons>::)
    | (?P<colon>:)
    | (?P<semi>;)
    | (?P<lb>\[) | (?P<rb>\])
    | (?P<lp>\() | (?P<rp>\))
    | (?P<num>[0-9]+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<sym>[""" + re.escape(_SYMCHARS) + r"""]+)
    """,
    re.VERBOSE,
)

_SECTIONS = ("types", "consts", "axioms", "defs")


class _ThyParser:
    def __init__(self, src: str):
        self.toks: list[Token] = []
        pos = 0
        while pos < len(src):
            m = _THY_TOKEN_RE.match(src, pos)
            if m is None:
                raise ParseError(f"unexpected character {src[pos]!r}", pos)
            if m.lastgroup not in ("ws", "comment"):
                self.toks.append(Token(m.lastgroup, m.group(), pos))
            pos = m.end()
        self.toks.append(Token("eof", "", len(src)))
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what}, found {(tok.text or 'end of file')!r}", tok.pos
            )
        return tok

    def expect_kw(self, word: str) -> None:
        tok = self.next()
        if tok.kind != "ident" or tok.text != word:
            raise ParseError(
                f"expected {word!r}, found {(tok.text or 'end of file')!r}", tok.pos
            )

    def at_section(self) -> bool:
        tok = self.peek()
        return tok.kind == "eof" or (tok.kind == "ident" and tok.text in _SECTIONS)

    def parse_type(self) -> TypeExpr:
        left = self.parse_type_atom()
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "->":
            self.next()
            return Fun(left, self.parse_type())
        return left

    def parse_type_atom(self) -> TypeExpr:
        tok = self.next()
        if tok.kind == "lp":
            ty = self.parse_type()
            self.expect("rp", "')'")
            return ty
        if tok.kind == "ident":
            return Basic(tok.text)
        raise ParseError(f"expected a type, found {tok.text!r}", tok.pos)


def parse_theory(src: str, register: bool = True):
    """Read a theory file:

        theory NAME extends PARENT ... ;
        types NAME ... ;
        consts NAME :: TYPE [infixr N] ; ...
        axioms NAME : "TERM" ; ...
        defs NAME : "CONST == TERM" ; ...

    Sections may be omitted; '#' starts a comment.  Parent theories are
    found by name among the builtins and previously loaded theories.
    """
    from . import theory as TH

    p = _ThyParser(src)
    p.expect_kw("theory")
    name = p.expect("ident", "a theory name").text
    parents: list = []
    tok = p.peek()
    if tok.kind == "ident" and tok.text == "extends":
        p.next()
        while p.peek().kind == "ident":
            pname = p.next().text
            parent = TH.lookup(pname)
            if parent is None:
                raise ParseError(f"unknown parent theory {pname!r}", tok.pos)
            parents.append(parent)
        if not parents:
            raise ParseError("'extends' needs at least one theory name", tok.pos)
    else:
        parents.append(TH.builtin("Pure"))
    p.expect("semi", "';'")

    types: list[str] = []
    consts: list = []
    axiom_srcs: list[tuple[str, str]] = []
    def_srcs: list[tuple[str, str]] = []

    while p.peek().kind != "eof":
        section = p.expect("ident", "a section keyword").text
        if section == "types":
            while p.peek().kind != "semi":
                types.append(p.expect("ident", "a type name").text)
            p.expect("semi", "';'")
        elif section == "consts":
            while not p.at_section():
                ctok = p.next()
                if ctok.kind not in ("ident", "sym"):
                    raise ParseError(
                        f"expected a constant name, found {ctok.text!r}", ctok.pos
                    )
                p.expect("colons", "'::'")
                ty = p.parse_type()
                fix = TH.PREFIX
                if p.peek().kind == "lb":
                    p.next()
                    kw = p.expect("ident", "a fixity").text
                    if kw in ("infixr", "infixl"):
                        prec = int(p.expect("num", "a precedence").text)
                        fix = TH.Fixity("infix", prec,
                                        "r" if kw == "infixr" else "l")
                    elif kw == "binder":
                        fix = TH.BINDER
                    else:
                        raise ParseError(f"unknown fixity {kw!r}", ctok.pos)
                    p.expect("rb", "']'")
                p.expect("semi", "';'")
                consts.append(TH.ConstDecl(ctok.text, ty, fix))
        elif section in ("axioms", "defs"):
            dest = axiom_srcs if section == "axioms" else def_srcs
            while not p.at_section():
                ntok = p.expect("ident", "a name")
                p.expect("colon", "':'")
                stok = p.expect("string", "a quoted term")
                p.expect("semi", "';'")
                dest.append((ntok.text, stok.text[1:-1]))
        else:
            raise ParseError(f"unknown section {section!r}")

    return TH._build(parents, name, types, consts, axiom_srcs, def_srcs,
                     register=register)
