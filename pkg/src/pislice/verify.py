"""Law-checking sweeps behind ``pislice verify``.

Every sweep is deterministic given its parameters and seed, and the report
contains counts only (no timings) so that runs can be compared byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from pislice import causality as cz
from pislice.corpus import processes_up_to, random_process
from pislice.gallery import EXTRUSION_SOURCE
from pislice.lattice import action_slices, count_slices, enumerate_slices, random_slice
from pislice.oracle import step_law_violations, step_mismatches, trace_law_violations
from pislice.semantics import Trace, Transition, enumerate_transitions
from pislice.syntax import load
from pislice.terms import Par, Process

CONTEXTS = (0, 1, 2)
SLICE_CAP = 4096  # enumerate a lattice exhaustively only below this many slices


@dataclass
class Tally:
    name: str
    mode: str
    counts: dict[str, int] = field(default_factory=dict)
    failures: int = 0

    def add(self, key: str, n: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + n

    def line(self) -> str:
        parts = " ".join(f"{k}={v}" for k, v in self.counts.items())
        status = "ok" if self.failures == 0 else "FAIL"
        return f"{self.name:<14} {self.mode:<11} {parts} failures={self.failures} {status}"


@dataclass
class Report:
    header: str
    tallies: list[Tally]

    @property
    def ok(self) -> bool:
        return all(t.failures == 0 for t in self.tallies)

    def render(self) -> str:
        lines = [self.header] + [t.line() for t in self.tallies]
        lines.append("result: " + ("ok" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"


def _slices(p: Process, rng: random.Random, samples: int) -> list[Process]:
    if count_slices(p) <= SLICE_CAP:
        return enumerate_slices(p, None)
    return [random_slice(rng, p) for _ in range(samples)]


def _transitions_up_to(n: int) -> list[Transition]:
    return [t for ctx in CONTEXTS for p in processes_up_to(n, ctx) for t in enumerate_transitions(p, ctx)]


def step_laws_exhaustive(max_nodes: int) -> Tally:
    tally = Tally("step-galois", "exhaustive", dict.fromkeys(["transitions", "checks"], 0))
    for t in _transitions_up_to(max_nodes):
        sources = enumerate_slices(t.source, None)
        crits = [(a, r) for a in action_slices(t.action) for r in enumerate_slices(t.target, None)]
        tally.add("transitions")
        tally.add("checks", len(sources) + len(crits))
        tally.failures += step_law_violations(t, sources, crits)
    return tally


def step_laws_random(samples: int, rng: random.Random, depth: int = 5) -> Tally:
    tally = Tally("step-galois", "random")
    done = 0
    while done < samples:
        p = random_process(rng, depth, 2)
        ts = enumerate_transitions(p, 2)
        if not ts:
            continue
        t = rng.choice(ts)
        r = random_slice(rng, t.source)
        c = (rng.choice(action_slices(t.action)), random_slice(rng, t.target))
        tally.failures += step_law_violations(t, [r], [c])
        done += 1
    tally.add("triples", done)
    return tally


def oracle_exhaustive(max_nodes: int) -> Tally:
    tally = Tally("adjoint-oracle", "exhaustive", {"transitions": 0})
    for t in _transitions_up_to(max_nodes):
        tally.add("transitions")
        tally.failures += step_mismatches(t, None)
    return tally


def random_trace(rng: random.Random, max_len: int = 4, depth: int = 4, ctx: int = 2) -> Trace:
    """A trace of 1 to ``max_len`` steps; shorter if it gets stuck early."""
    p = random_process(rng, depth, ctx)
    while not enumerate_transitions(p, ctx):
        p = random_process(rng, depth, ctx)
    steps: list[Transition] = []
    cur, cur_ctx = p, ctx
    for _ in range(rng.randint(1, max_len)):
        ts = enumerate_transitions(cur, cur_ctx)
        if not ts:
            break
        t = rng.choice(ts)
        steps.append(t)
        cur, cur_ctx = t.target, t.target_ctx
    return Trace(p, ctx, tuple(steps))


def trace_laws_random(samples: int, rng: random.Random) -> Tally:
    tally = Tally("trace-galois", "random", dict.fromkeys(["traces", "steps", "checks"], 0))
    for _ in range(samples):
        tr = random_trace(rng)
        sources = _slices(tr.start, rng, 50)
        crits = _slices(tr.end, rng, 50)
        tally.add("traces")
        tally.add("steps", len(tr))
        tally.add("checks", len(sources) + len(crits))
        tally.failures += trace_law_violations(tr, sources, crits)
    return tally


def concurrent_pairs_up_to(n: int) -> list[tuple[Transition, Transition]]:
    """Ordered concurrent coinitial pairs over every process of at most ``n`` nodes."""
    pairs = []
    for ctx in CONTEXTS:
        for p in processes_up_to(n, ctx):
            ts = enumerate_transitions(p, ctx)
            pairs += [(t, u) for t in ts for u in ts if t is not u and cz.concurrent(t, u)]
    return pairs


def extrusion_pairs() -> list[tuple[Transition, Transition]]:
    """Concurrent pairs of the double-extrusion program, bare and under a parallel context."""
    p, ctx, _ = load(EXTRUSION_SOURCE)
    out = []
    for q in (p, Par(p, p.right.right)):
        ts = enumerate_transitions(q, ctx)
        out += [(t, u) for t in ts for u in ts if t is not u and cz.concurrent(t, u)]
    return out


def braid_iso_sweep(pairs: list[tuple[Transition, Transition]], mode: str) -> Tally:
    tally = Tally("braid-iso", mode, dict.fromkeys(["pairs", "Eq", "SwapTop", "Bound", "slices"], 0))
    for t, u in pairs:
        g = cz.compute_braiding(t, u)
        tally.add("pairs")
        tally.add(g.kind.value)
        tally.add("slices", count_slices(g.left) + count_slices(g.right))
        tally.failures += cz.iso_roundtrip_failures(g)
    return tally


def pentagon_sweep(pairs: list[tuple[Transition, Transition]], mode: str, rng: random.Random) -> Tally:
    tally = Tally("pentagon", mode, dict.fromkeys(["pairs", "checks"], 0))
    for t, u in pairs:
        rep = cz.pentagon_report(t, u, cap=SLICE_CAP, samples=50, rng=rng)
        tally.add("pairs")
        tally.add("checks", rep.forward_checked + rep.backward_checked)
        tally.failures += rep.failures
    return tally


def run(max_nodes: int = 4, pair_nodes: int = 6, samples: int = 1000, seed: int = 0) -> Report:
    rng = random.Random(seed)
    pairs = concurrent_pairs_up_to(pair_nodes)
    extra = extrusion_pairs()
    tallies = [
        step_laws_exhaustive(max_nodes),
        step_laws_random(samples, rng),
        oracle_exhaustive(max_nodes),
        trace_laws_random(max(1, samples // 5), rng),
        braid_iso_sweep(pairs, "exhaustive"),
        braid_iso_sweep(extra, "extrusion"),
        pentagon_sweep(pairs, "exhaustive", rng),
        pentagon_sweep(extra, "extrusion", rng),
    ]
    header = f"pislice verify: max-nodes={max_nodes} pair-nodes={pair_nodes} samples={samples} seed={seed}"
    return Report(header, tallies)
