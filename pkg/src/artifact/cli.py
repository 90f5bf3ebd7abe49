"""Command line client.

Each subcommand posts the problem file to the service, in process unless
``--url`` points at a running server, and writes ``result.json`` plus any
DOT graphs into the output directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from .schemas import TASKS

EXIT_SCHEMA = 2


def _client(url: str | None):
    if url:
        import httpx

        return httpx.Client(base_url=url, timeout=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description="p-adic integrals on hyperelliptic curves")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command")
    for name in TASKS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", required=True, type=Path, help="problem JSON file")
        sp.add_argument("--output-dir", type=Path, default=Path("."))
        sp.add_argument("--precision", type=int, default=None, help="target precision in uniformiser digits")
        sp.add_argument("--task", choices=TASKS, default=None, help="override the task named by the subcommand")
        sp.add_argument("--url", default=None, help="service URL; default runs in process")
    return ap


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command is None:
        build_parser().print_help()
        return EXIT_SCHEMA
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        problem = json.loads(args.input.read_text())
    except OSError as exc:
        return _fail(EXIT_SCHEMA, f"cannot read {args.input}: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(EXIT_SCHEMA, f"malformed JSON: {exc}")
    if not isinstance(problem, dict):
        return _fail(EXIT_SCHEMA, "problem file must be a JSON object")

    task = args.task or args.command
    params = {"precision": args.precision} if args.precision is not None else {}
    with _client(args.url) as client:
        resp = client.post(f"/tasks/{task}", json=problem, params=params)
    body = resp.json()
    if resp.status_code != 200:
        return _fail(int(body.get("exit_code", 1)), f"{body.get('error')}: {body.get('message')}")

    out = args.output_dir
    out.mkdir(parents=True, exist_ok=True)
    dot = body.pop("dot", {})
    (out / "result.json").write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
    for name, text in sorted(dot.items()):
        (out / name).write_text(text)
    print(out / "result.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
