"""Brute-force adjoints, used to cross-check the slicers on small terms.

For a Galois connection ``(f, g)`` the lower adjoint is determined by the
upper one: ``g(c)`` is the least ``R`` with ``f(R) >= c``, and ``f(R)`` is the
greatest ``c`` with ``g(c) <= R``.  Computing these by enumerating whole
slice lattices is exponential, so every table here refuses references above
the node cap.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, Iterable, TypeVar

from pislice.lattice import (
    DEFAULT_NODE_CAP,
    CapExceeded,
    action_slices,
    enumerate_slices,
    join,
    leq,
    meet,
)
from pislice.semantics import Trace, Transition
from pislice.slicing import StepSlice, bwd_step, bwd_trace, fwd_step, fwd_trace
from pislice.terms import Process, size

T = TypeVar("T")
U = TypeVar("U")


def step_criteria(t: Transition, cap: int | None = DEFAULT_NODE_CAP) -> list[StepSlice]:
    """Every slice of ``(action, target)``."""
    targets = enumerate_slices(t.target, cap)
    return [(a, r) for a in action_slices(t.action) for r in targets]


def least_above(f: Callable[[T], U], domain: Iterable[T], c: U) -> T:
    """The least ``x`` in ``domain`` with ``f(x) >= c``."""
    ups = [x for x in domain if leq(c, f(x))]
    if not ups:
        raise ValueError("nothing in the domain reaches the criterion")
    return reduce(meet, ups)


def greatest_below(g: Callable[[U], T], codomain: Iterable[U], r: T) -> U:
    """The greatest ``c`` in ``codomain`` with ``g(c) <= r``."""
    downs = [c for c in codomain if leq(g(c), r)]
    return reduce(join, downs)


def step_bwd_table(t: Transition, cap: int | None = DEFAULT_NODE_CAP) -> dict[StepSlice, Process]:
    sources = enumerate_slices(t.source, cap)
    image = {r: fwd_step(t, r) for r in sources}
    return {c: least_above(image.__getitem__, sources, c) for c in step_criteria(t, cap)}


def step_fwd_table(t: Transition, cap: int | None = DEFAULT_NODE_CAP) -> dict[Process, StepSlice]:
    crits = step_criteria(t, cap)
    back = {c: bwd_step(t, *c) for c in crits}
    return {r: greatest_below(back.__getitem__, crits, r) for r in enumerate_slices(t.source, cap)}


def _check_trace_cap(tr: Trace, cap: int | None) -> None:
    if cap is not None and max(size(tr.start), size(tr.end)) > cap:
        raise CapExceeded(f"trace states exceed cap {cap}")


def trace_bwd_table(tr: Trace, cap: int | None = DEFAULT_NODE_CAP) -> dict[Process, Process]:
    _check_trace_cap(tr, cap)
    sources = enumerate_slices(tr.start, None)
    image = {r: fwd_trace(tr, r) for r in sources}
    return {c: least_above(image.__getitem__, sources, c) for c in enumerate_slices(tr.end, None)}


def trace_fwd_table(tr: Trace, cap: int | None = DEFAULT_NODE_CAP) -> dict[Process, Process]:
    _check_trace_cap(tr, cap)
    crits = enumerate_slices(tr.end, None)
    back = {c: bwd_trace(tr, c) for c in crits}
    return {r: greatest_below(back.__getitem__, crits, r) for r in enumerate_slices(tr.start, None)}


def step_mismatches(t: Transition, cap: int | None = DEFAULT_NODE_CAP) -> int:
    """Points where the slicers disagree with the brute-force adjoints."""
    bad = sum(bwd_step(t, *c) != r for c, r in step_bwd_table(t, cap).items())
    bad += sum(fwd_step(t, r) != c for r, c in step_fwd_table(t, cap).items())
    return bad


def step_law_violations(t: Transition, sources: Iterable[Process], criteria: Iterable[StepSlice]) -> int:
    """Failures of ``bwd . fwd <= id`` on ``sources`` and ``fwd . bwd >= id`` on ``criteria``."""
    bad = sum(not leq(bwd_step(t, *fwd_step(t, r)), r) for r in sources)
    bad += sum(not leq(c, fwd_step(t, bwd_step(t, *c))) for c in criteria)
    return bad


def trace_law_violations(tr: Trace, sources: Iterable[Process], criteria: Iterable[Process]) -> int:
    bad = sum(not leq(bwd_trace(tr, fwd_trace(tr, r)), r) for r in sources)
    bad += sum(not leq(c, fwd_trace(tr, bwd_trace(tr, c))) for c in criteria)
    return bad
