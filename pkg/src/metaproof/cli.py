"""Command line entry point.

With no flags the process reads one JSON command per line on stdin and
writes one JSON response per line on stdout.  ``--serve PORT`` exposes the
same protocol over HTTP on localhost (port 0 picks a free port), ``--repl``
starts the human console, and ``--run SCRIPT`` executes a file of console
commands, exiting nonzero at the first failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .session import Session, repl, run_script, serve, stdio_loop


def _default_static() -> str | None:
    here = os.path.dirname(os.path.abspath(__file__))
    cand = os.path.join(os.path.dirname(os.path.dirname(here)),
                        "frontend", "dist")
    return cand if os.path.isdir(cand) else None


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="metaproof",
        description="interactive theorem prover for a minimal meta-logic")
    ap.add_argument("--serve", type=int, metavar="PORT",
                    help="serve the JSON protocol over HTTP on localhost")
    ap.add_argument("--repl", action="store_true",
                    help="interactive console instead of JSON lines")
    ap.add_argument("--run", metavar="SCRIPT",
                    help="execute a file of console commands and exit")
    ap.add_argument("--load", action="append", default=[], metavar="FILE",
                    help="load a theory file at startup (repeatable)")
    ap.add_argument("--static", metavar="DIR",
                    help="directory of web client files for --serve "
                         "(default: the bundled build, if present)")
    args = ap.parse_args(argv)

    session = Session()
    for path in args.load:
        resp = session.exec({"cmd": "load_theory", "path": path})
        if not resp["ok"]:
            print(f"--load {path}: {resp['error']}", file=sys.stderr)
            return 1

    if args.run is not None:
        return run_script(session, args.run)
    if args.serve is not None:
        static = args.static if args.static else _default_static()
        try:
            serve(session, args.serve, static_dir=static)
        except KeyboardInterrupt:
            pass
        return 0
    if args.repl:
        repl(session)
        return 0
    stdio_loop(session)
    return 0


if __name__ == "__main__":
    sys.exit(main())
