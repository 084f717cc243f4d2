"""The ``pislice`` command line."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from pislice import causality as cz
from pislice import verify
from pislice.lattice import proc_leq
from pislice.semantics import SemanticsError, Trace, enumerate_transitions, run_trace
from pislice.slicing import bwd_trace, fwd_trace
from pislice.syntax import (
    ParseError,
    extend_hints,
    load,
    parse_program,
    show_action,
    show_overlay,
    show_process,
    structural_diff,
    to_de_bruijn,
)
from pislice.terms import IllFormed, Process, has_hole

GREY = "\x1b[90m"
RESET = "\x1b[0m"


class CliError(Exception):
    pass


def use_color(stream) -> bool:
    env = os.environ.get("PISLICE_COLOR")
    if env is not None:
        return env not in ("0", "")
    return stream.isatty()


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def _script(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise CliError(f"bad script {text!r}: expected comma-separated indices") from None


def _load_trace(args) -> tuple[Trace, list[tuple[str, ...]]]:
    p, ctx, free = load(_read(args.file))
    if has_hole(p):
        raise CliError("the program contains holes; only slices may")
    tr = run_trace(p, ctx, _script(args.script))
    hints = [free]
    for t in tr.steps:
        hints.append(extend_hints(hints[-1]) if t.bound else hints[-1])
    return tr, hints


def _with_preamble(text: str, hints: Sequence[str]) -> str:
    return f"free {' '.join(hints)}; {text}" if hints else text


def _load_slice(path: str, ref: Process, hints: Sequence[str], what: str) -> Process:
    prog = parse_program(_read(path))
    free = prog.free or tuple(hints)
    if len(free) != len(hints):
        raise CliError(f"{what} declares {len(free)} free names but the {what} state has {len(hints)}")
    r, _ = to_de_bruijn(prog.body, free)
    if not proc_leq(r, ref):
        raise CliError(f"{what} is not a slice of the reference state\n" + structural_diff(r, ref, hints))
    return r


def _render_slice(r: Process, ref: Process, hints: Sequence[str]) -> str:
    if use_color(sys.stdout):
        return show_overlay(r, ref, hints, lambda s: f"{GREY}{s}{RESET}")
    return show_overlay(r, ref, hints, lambda s: "_")


# -- commands ------------------------------------------------------------------


def cmd_step(args) -> int:
    p, ctx, free = load(_read(args.file))
    if has_hole(p):
        raise CliError("the program contains holes; only slices may")
    for i, t in enumerate(enumerate_transitions(p, ctx)):
        tgt = extend_hints(free) if t.bound else free
        print(f"{i}\t{t.rule.value}\t{show_action(t.action, free)}\t{show_process(t.target, tgt)}")
    return 0


def cmd_run(args) -> int:
    tr, hints = _load_trace(args)
    states = [tr.start] + [t.target for t in tr.steps]
    if args.json:
        doc = {
            "start": _with_preamble(show_process(tr.start, hints[0]), hints[0]),
            "steps": [
                {
                    "index": i,
                    "rule": t.rule.value,
                    "action": show_action(t.action, hints[k]),
                    "state": _with_preamble(show_process(t.target, hints[k + 1]), hints[k + 1]),
                }
                for k, (i, t) in enumerate(zip(_script(args.script), tr.steps))
            ],
        }
        print(json.dumps(doc, indent=2, ensure_ascii=False))
        return 0
    print(f"   {show_process(states[0], hints[0])}")
    for k, t in enumerate(tr.steps):
        print(f"-- {t.rule.value} {show_action(t.action, hints[k])}")
        print(f"   {show_process(states[k + 1], hints[k + 1])}")
    return 0


def cmd_slice_bwd(args) -> int:
    tr, hints = _load_trace(args)
    crit = _load_slice(args.criterion, tr.end, hints[-1], "criterion")
    print(_render_slice(bwd_trace(tr, crit), tr.start, hints[0]))
    return 0


def cmd_slice_fwd(args) -> int:
    tr, hints = _load_trace(args)
    r = _load_slice(args.slice, tr.start, hints[0], "slice")
    print(_render_slice(fwd_trace(tr, r), tr.end, hints[-1]))
    return 0


def cmd_concur(args) -> int:
    tr, hints = _load_trace(args)
    ts = enumerate_transitions(tr.end, tr.end_ctx)
    found = False
    for i, t in enumerate(ts):
        for j in range(i + 1, len(ts)):
            if cz.concurrent(t, ts[j]):
                found = True
                print(f"{i} {j}\t{cz.compute_braiding(t, ts[j]).describe()}")
    if not found:
        print("no concurrent pairs")
    return 0


def cmd_permute(args) -> int:
    tr, _ = _load_trace(args)
    new, g = cz.permute_adjacent(tr, args.at)
    script = []
    for t in new.steps:
        script.append(enumerate_transitions(t.source, t.ctx).index(t))
    print(f"script: {','.join(map(str, script))}")
    print(f"braiding: {g.describe()}")
    return 0


def cmd_verify(args) -> int:
    report = verify.run(args.max_nodes, args.pair_nodes, args.samples, args.seed)
    sys.stdout.write(report.render())
    return 0 if report.ok else 1


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pislice", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def traced(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file")
        sp.add_argument("--script", default="", help="comma-separated transition indices")
        return sp

    sp = sub.add_parser("step", help="list the transitions of a program")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_step)

    sp = traced("run", "run a script and print every configuration")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = traced("slice-bwd", "backward-slice the end state of a run")
    sp.add_argument("--criterion", required=True, help="file holding a slice of the end state")
    sp.set_defaults(func=cmd_slice_bwd)

    sp = traced("slice-fwd", "forward-slice the start state of a run")
    sp.add_argument("--slice", required=True, help="file holding a slice of the start state")
    sp.set_defaults(func=cmd_slice_fwd)

    sp = traced("concur", "list concurrent transition pairs after a run")
    sp.set_defaults(func=cmd_concur)

    sp = traced("permute", "swap two adjacent steps of a run")
    sp.add_argument("--at", type=int, required=True, help="index of the first step of the pair")
    sp.set_defaults(func=cmd_permute)

    sp = sub.add_parser("verify", help="check the slicing laws on generated terms")
    sp.add_argument("--max-nodes", type=int, default=4)
    sp.add_argument("--pair-nodes", type=int, default=6)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParseError, IllFormed, SemanticsError, IndexError, cz.NotConcurrent, cz.BraidingError) as e:
        print(f"pislice: error: {e}", file=sys.stderr)
        return 2
