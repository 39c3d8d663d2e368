"""Interactive proof driver.

A Session owns the loaded theories, a store of named proved theorems, and
any number of in-progress proofs.  Each proof is a stack of snapshots; the
top snapshot pairs the current ProofState with the stream of alternatives
left behind by the step that produced it.  ``undo`` pops one snapshot,
``back`` swaps the top state for the next alternative from its stream.

Commands arrive as plain dicts ({"cmd": ..., ...}) and come back as plain
dicts ({"ok": bool, ...}).  Failures of every kind are reported as data;
``exec`` never lets an exception escape.  Three transports wrap this one
entry point: a JSON-lines loop on stdio, a localhost HTTP server, and a
line-oriented human console.
"""

from __future__ import annotations

import json
import os
import re
import shlex
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Iterator, TextIO

from . import kernel as K
from . import rule as R
from . import syntax as S
from . import tactic as TC
from . import term as T
from . import theory as TH


class SessionError(Exception):
    """Command rejected; the message becomes the response's error field."""


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

_BUILTIN_THEORIES = ("Pure", "IPL", "IFOL")


def _err(msg: str) -> dict:
    return {"ok": False, "error": msg}


class Session:
    """One driver instance: theories, stored theorems, open proofs."""

    def __init__(self, depth: int | None = None):
        if depth is None:
            raw = os.environ.get("METAPROOF_DEPTH")
            if raw:
                depth = int(raw)
        self.depth = depth
        self.theories: dict[str, TH.Theory] = {}
        for name in _BUILTIN_THEORIES:
            self.theories[name] = TH.lookup(name)
        self.theorems: dict[str, K.Theorem] = {}
        self.proofs: dict[int, list[tuple[TC.ProofState,
                                          Iterator[TC.ProofState]]]] = {}
        self._next_id = 1

    # ------------------------------------------------------ dispatch

    def exec(self, cmd) -> dict:
        """Run one command, returning a response dict.  Never raises."""
        try:
            if not isinstance(cmd, dict):
                return _err("parse")
            name = cmd.get("cmd")
            handler = getattr(self, f"_cmd_{name}", None)
            if not isinstance(name, str) or handler is None:
                return _err(f"unknown command {name!r}")
            return handler(cmd)
        except SessionError as e:
            return _err(str(e))
        except Exception as e:
            # Crash-free guarantee: anything the layers below throw
            # (parse errors, kernel rejections, bad arithmetic) is data.
            return _err(f"{type(e).__name__}: {e}")

    # ------------------------------------------------------ commands

    def _cmd_load_theory(self, cmd: dict) -> dict:
        path = _arg(cmd, "path", str)
        try:
            with open(path, encoding="utf-8") as fh:
                src = fh.read()
        except OSError as e:
            raise SessionError(f"cannot read {path!r}: {e.strerror}")
        thy = S.parse_theory(src)
        self.theories[thy.name] = thy
        return {"ok": True, "thy": thy.name}

    def _cmd_goal(self, cmd: dict) -> dict:
        thy = self._theory(_arg(cmd, "thy", str))
        prop = S.parse_prop(thy, _arg(cmd, "prop", str))
        state = TC.initial_state(thy, prop)
        pid = self._next_id
        self._next_id += 1
        self.proofs[pid] = [(state, iter(()))]
        return {"ok": True, "proofId": pid, "state": self._render(pid)}

    def _cmd_apply(self, cmd: dict) -> dict:
        pid = self._proof_id(cmd)
        spec = _arg(cmd, "tactic", dict)
        stack = self.proofs[pid]
        state = stack[-1][0]
        tac, label = self._make_tactic(state, spec)
        stream = tac(state)
        first = next(stream, None)
        if first is None:
            return _err(f"TacticFailed: {label}")
        stack.append((first, stream))
        return {"ok": True, "state": self._render(pid)}

    def _cmd_back(self, cmd: dict) -> dict:
        pid = self._proof_id(cmd)
        stack = self.proofs[pid]
        state, stream = stack[-1]
        nxt = next(stream, None)
        if nxt is None:
            return _err("no more alternatives")
        stack[-1] = (nxt, stream)
        return {"ok": True, "state": self._render(pid)}

    def _cmd_undo(self, cmd: dict) -> dict:
        pid = self._proof_id(cmd)
        stack = self.proofs[pid]
        if len(stack) <= 1:
            return _err("nothing to undo")
        stack.pop()
        return {"ok": True, "state": self._render(pid)}

    def _cmd_state(self, cmd: dict) -> dict:
        pid = self._proof_id(cmd)
        return {"ok": True, "state": self._render(pid)}

    def _cmd_qed(self, cmd: dict) -> dict:
        pid = self._proof_id(cmd)
        name = _arg(cmd, "name", str)
        if not _NAME_RE.match(name):
            raise SessionError(f"invalid theorem name {name!r}")
        state = self.proofs[pid][-1][0]
        thy = TH.lookup(state.thm.thy_name)
        if name in self.theorems:
            raise SessionError(f"{name!r} already names a stored theorem")
        if thy.axiom_prop(name) is not None:
            raise SessionError(f"{name!r} already names an axiom")
        th = TC.finalize(state)
        self.theorems[name] = th
        del self.proofs[pid]
        return {"ok": True, "name": name,
                "pretty": S.print_theorem(thy, th)}

    def _cmd_list_rules(self, cmd: dict) -> dict:
        thy = self._theory(_arg(cmd, "thy", str))
        lineage = {a.name for a in thy.ancestry()}
        rules = []
        for name, _prop in thy.axiom_items():
            rules.append({"name": name, "kind": "axiom",
                          "pretty": S.print_theorem(thy, K.axiom(thy, name))})
        for name in sorted(self.theorems):
            th = self.theorems[name]
            if th.thy_name in lineage:
                rules.append({"name": name, "kind": "theorem",
                              "pretty": S.print_theorem(thy, th)})
        return {"ok": True, "thy": thy.name, "rules": rules}

    # ------------------------------------------------------ helpers

    def _theory(self, name: str) -> TH.Theory:
        thy = self.theories.get(name)
        if thy is None:
            raise SessionError(f"unknown theory {name!r}")
        return thy

    def _proof_id(self, cmd: dict) -> int:
        pid = _arg(cmd, "proofId", int)
        if pid not in self.proofs:
            raise SessionError(f"UnknownId: {pid}")
        return pid

    def _make_tactic(self, state: TC.ProofState, spec: dict):
        sub = _arg(spec, "subgoal", int)
        if spec.get("assume"):
            return (TC.assume_tac(sub, depth=self.depth),
                    f"no assumption closes subgoal {sub}")
        names = spec.get("resolve")
        if not isinstance(names, list) or not names \
                or not all(isinstance(n, str) for n in names):
            raise SessionError("tactic needs 'resolve': [rule names] "
                               "or 'assume': true")
        thy = TH.lookup(state.thm.thy_name)
        inst = spec.get("inst")
        rules = []
        for n in names:
            rule = self._rule(thy, n)
            if inst:
                rule = _instantiate_rule(thy, rule, inst)
            rules.append(rule)
        return (TC.resolve_tac(rules, sub, depth=self.depth),
                f"no rule in {names} unifies with subgoal {sub}")

    def _rule(self, thy: TH.Theory, name: str) -> K.Theorem:
        th = self.theorems.get(name)
        if th is not None:
            if th.thy_name not in {a.name for a in thy.ancestry()}:
                raise SessionError(
                    f"rule {name!r} belongs to theory {th.thy_name!r}")
            return th
        if thy.axiom_prop(name) is not None:
            return K.axiom(thy, name)
        raise SessionError(f"unknown rule {name!r}")

    def _render(self, pid: int) -> dict:
        state = self.proofs[pid][-1][0]
        thy = TH.lookup(state.thm.thy_name)
        subgoals = []
        for sg in state.subgoals:
            v = R.subgoal_view(sg)
            subgoals.append({
                "pretty": S.print_term(thy, sg),
                "params": [{"name": n, "type": S.type_str(ty)}
                           for n, ty in v.params],
                "asms": [S.print_in_context(thy, a, v.params)
                         for a in v.asms],
                "concl": S.print_in_context(thy, v.concl, v.params),
            })
        return {
            "proofId": pid,
            "thy": state.thm.thy_name,
            "goal": S.print_term(thy, state.goal),
            "pretty": S.print_theorem(thy, state.thm),
            "ngoals": state.ngoals,
            "subgoals": subgoals,
            "done": state.done,
        }


def _arg(cmd: dict, key: str, kind: type):
    val = cmd.get(key)
    if not isinstance(val, kind) or isinstance(val, bool):
        raise SessionError(f"missing or bad argument {key!r}")
    return val


def _instantiate_rule(thy: TH.Theory, rule: K.Theorem,
                      inst: dict) -> K.Theorem:
    """Bind named schematics of a rule to parsed terms before resolving."""
    if not isinstance(inst, dict):
        raise SessionError("'inst' must map schematic names to terms")
    present = {(v.name, v.index): v for v in T.schematic_vars(rule.prop)}
    subst: dict[T.Schematic, T.TermExpr] = {}
    for key, src in inst.items():
        if not isinstance(key, str) or not isinstance(src, str):
            raise SessionError("'inst' must map schematic names to terms")
        name = key[1:] if key.startswith("?") else key
        index = 0
        if "." in name:
            name, _, tail = name.rpartition(".")
            if not tail.isdigit():
                raise SessionError(f"bad schematic name {key!r}")
            index = int(tail)
        var = present.get((name, index))
        if var is None:
            raise SessionError(f"rule has no schematic ?{name}"
                               + (f".{index}" if index else ""))
        image = S.parse_term(thy, src, expect=var.type)
        ity = T.type_of(image)
        if ity != var.type:
            raise SessionError(
                f"instantiation for {key!r} has type {S.type_str(ity)}, "
                f"expected {S.type_str(var.type)}")
        subst[var] = image
    return K.instantiate(subst, rule)


# ------------------------------------------------------------ transports

def stdio_loop(session: Session, inp: TextIO = None,
               out: TextIO = None) -> None:
    """One JSON object per line in, one JSON response per line out."""
    inp = inp if inp is not None else sys.stdin
    out = out if out is not None else sys.stdout
    for line in inp:
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except ValueError:
            resp = _err("parse")
        else:
            resp = session.exec(obj)
        print(json.dumps(resp, sort_keys=True), file=out, flush=True)


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".map": "application/json",
}


def serve(session: Session, port: int, static_dir: str | None = None) -> None:
    """Serve the JSON protocol over HTTP on localhost.

    POST / (or /api) carries one command object per request.  GET serves
    files from static_dir when one is given, so the browser client and
    the prover can share an origin.  Prints ``SERVING <port>`` once the
    socket is bound; commands are serialized under one lock.
    """
    lock = threading.Lock()

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            pass

        def _send_json(self, payload: dict) -> None:
            body = json.dumps(payload, sort_keys=True).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_POST(self):
            if self.path not in ("/", "/api"):
                self._send_json(_err(f"no such endpoint {self.path!r}"))
                return
            try:
                n = int(self.headers.get("Content-Length", "0"))
                obj = json.loads(self.rfile.read(n))
            except ValueError:
                self._send_json(_err("parse"))
                return
            with lock:
                resp = session.exec(obj)
            self._send_json(resp)

        def do_GET(self):
            if static_dir is None:
                self._send_json(_err("no static files; POST commands to /"))
                return
            rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
            path = os.path.realpath(os.path.join(static_dir, rel))
            root = os.path.realpath(static_dir)
            if not path.startswith(root + os.sep) and path != root:
                self.send_error(404)
                return
            if os.path.isdir(path):
                path = os.path.join(path, "index.html")
            if not os.path.isfile(path):
                self.send_error(404)
                return
            ext = os.path.splitext(path)[1]
            ctype = _CONTENT_TYPES.get(ext, "application/octet-stream")
            with open(path, "rb") as fh:
                body = fh.read()
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    srv = ThreadingHTTPServer(("127.0.0.1", port), Handler)
    print(f"SERVING {srv.server_address[1]}", flush=True)
    try:
        srv.serve_forever()
    finally:
        srv.server_close()


# ------------------------------------------------------------ console

_USAGE = """commands:
  goal THY "PROP"                          start a proof, prints its id
  apply ID resolve NAME[,NAME..] at N      refine subgoal N with a rule
      [inst ?A="TERM" ...]                 (optionally instantiating it)
  apply ID assume at N                     close subgoal N by assumption
  back ID                                  switch to the next alternative
  undo ID                                  drop the last step
  state ID                                 print the current state
  qed ID NAME                              finish and store the theorem
  rules THY                                list usable rules
  load PATH                                load a theory file
  help                                     this text
  quit                                     leave"""


def parse_command(line: str) -> dict:
    """Translate one console line into a command dict."""
    try:
        words = shlex.split(line, comments=True)
    except ValueError as e:
        raise SessionError(f"bad command: {e}")
    if not words:
        raise SessionError("bad command: empty line")
    head, rest = words[0], words[1:]

    def want(n: int) -> None:
        if len(rest) != n:
            raise SessionError(f"bad command: {head} takes {n} argument(s)")

    def pid() -> int:
        if not rest or not rest[0].isdigit():
            raise SessionError(f"bad command: {head} needs a proof id")
        return int(rest[0])

    if head == "goal":
        want(2)
        return {"cmd": "goal", "thy": rest[0], "prop": rest[1]}
    if head == "apply":
        return _parse_apply(rest)
    if head in ("back", "undo", "state"):
        n = pid()
        want(1)
        return {"cmd": head, "proofId": n}
    if head == "qed":
        n = pid()
        want(2)
        return {"cmd": "qed", "proofId": n, "name": rest[1]}
    if head == "rules":
        want(1)
        return {"cmd": "list_rules", "thy": rest[0]}
    if head == "load":
        want(1)
        return {"cmd": "load_theory", "path": rest[0]}
    raise SessionError(f"bad command: unknown verb {head!r}")


def _parse_apply(rest: list[str]) -> dict:
    if len(rest) < 2 or not rest[0].isdigit():
        raise SessionError("bad command: apply ID resolve|assume ...")
    pid, verb = int(rest[0]), rest[1]
    args = rest[2:]
    if verb == "assume":
        if len(args) != 2 or args[0] != "at" or not args[1].isdigit():
            raise SessionError("bad command: apply ID assume at N")
        return {"cmd": "apply", "proofId": pid,
                "tactic": {"assume": True, "subgoal": int(args[1])}}
    if verb != "resolve":
        raise SessionError("bad command: apply ID resolve|assume ...")
    if len(args) < 3 or args[1] != "at" or not args[2].isdigit():
        raise SessionError("bad command: apply ID resolve NAMES at N")
    names = [n for n in args[0].split(",") if n]
    if not names:
        raise SessionError("bad command: no rule names")
    tactic: dict = {"resolve": names, "subgoal": int(args[2])}
    extra = args[3:]
    if extra:
        if extra[0] != "inst" or len(extra) < 2:
            raise SessionError("bad command: trailing words, expected inst")
        inst = {}
        for item in extra[1:]:
            key, eq, val = item.partition("=")
            if not eq or not key:
                raise SessionError(f"bad command: inst item {item!r}")
            inst[key] = val
        tactic["inst"] = inst
    return {"cmd": "apply", "proofId": pid, "tactic": tactic}


def format_state(st: dict) -> str:
    lines = [f"proof {st['proofId']} ({st['thy']}): {st['goal']}"]
    if st["done"]:
        lines.append("  no subgoals; qed when ready")
    for i, sg in enumerate(st["subgoals"], 1):
        lines.append(f"  {i}. {sg['pretty']}")
        if sg["params"]:
            ps = ", ".join(f"{p['name']} :: {p['type']}"
                           for p in sg["params"])
            lines.append(f"     params {ps}")
        for a in sg["asms"]:
            lines.append(f"     asm    {a}")
        if sg["params"] or sg["asms"]:
            lines.append(f"     show   {sg['concl']}")
    return "\n".join(lines)


def format_response(resp: dict) -> str:
    if not resp.get("ok"):
        return f"error: {resp.get('error')}"
    if "state" in resp:
        return format_state(resp["state"])
    if "rules" in resp:
        return "\n".join(f"  {r['name']}: {r['pretty']}"
                         for r in resp["rules"])
    if "name" in resp:
        return f"stored {resp['name']}: {resp['pretty']}"
    if "thy" in resp:
        return f"loaded theory {resp['thy']}"
    return json.dumps(resp, sort_keys=True)


def repl(session: Session, inp: TextIO = None, out: TextIO = None) -> None:
    inp = inp if inp is not None else sys.stdin
    out = out if out is not None else sys.stdout
    print("metaproof console; 'help' lists commands", file=out)
    while True:
        print("> ", end="", file=out, flush=True)
        line = inp.readline()
        if not line:
            break
        line = line.strip()
        if not line:
            continue
        if line in ("quit", "exit"):
            break
        if line == "help":
            print(_USAGE, file=out)
            continue
        try:
            cmd = parse_command(line)
        except SessionError as e:
            print(e, file=out)
            continue
        print(format_response(session.exec(cmd)), file=out)


def run_script(session: Session, path: str,
               out: TextIO = None) -> int:
    """Run a file of console commands; stop and report the first failure."""
    out = out if out is not None else sys.stdout
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        print(f"cannot read {path!r}: {e.strerror}", file=sys.stderr)
        return 1
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            cmd = parse_command(line)
        except SessionError as e:
            print(f"{path}:{lineno}: {e}", file=sys.stderr)
            return 1
        resp = session.exec(cmd)
        print(format_response(resp), file=out)
        if not resp.get("ok"):
            print(f"{path}:{lineno}: script stopped", file=sys.stderr)
            return 1
    return 0
