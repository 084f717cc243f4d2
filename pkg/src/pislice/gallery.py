"""Worked example programs: the two-thread scheduler and the double extrusion."""

from __future__ import annotations

from pislice.semantics import Trace, run_trace
from pislice.syntax import load

FREE = "a1 a2 b1 b2 c1 c2 r1 r2 p1 p2"

# One loop of scheduler thread 1.  ``k`` is what the loop turns into once it
# finishes; pure synchronisations send the channel itself as a dummy payload.
_THREAD1 = "a1(u).c1(u).(b1(u).c2<c2>.{k} + c2<c2>.b1(u).{k})"
_THREAD2 = "c1<c1>.a2(u).c2(u).(b2(u).c1<c1>.r2<r2>.0 + c1<c1>.b2(u).r2<r2>.0)"
_AGENT1 = "a1<a1>.b1<b1>.p1<p1>.0"
_AGENT2 = "a2<a2>.b1<b1>.p2<p2>.0"  # non-compliant: breaks task 1


def scheduler_source() -> str:
    """Two scheduler threads and two agents.

    A recursive call is modelled by the spawned body standing where the
    invocation would be: thread 1's first loop continues as a fresh copy of
    thread 1, whose own recursive calls ``r1<r1>`` stay unserved.
    """
    inner = _THREAD1.format(k="r1<r1>.0")
    thread1 = _THREAD1.format(k=f"({inner})")
    return (
        f"-- Milner's scheduler, two threads, agent 2 breaks task 1\n"
        f"free {FREE};\n"
        f"   {thread1}\n"
        f"|  {_THREAD2}\n"
        f"|  {_AGENT1}\n"
        f"|  {_AGENT2}\n"
    )


# Synchronisations on a1, c1, a2, b1 (with agent 2), c2.
SCHEDULER_SCRIPT = (3, 2, 6, 7, 2)

# The final state of thread 1 is the fresh loop, of which only the first
# prefix is of interest.
SCHEDULER_CRITERION = f"free {FREE}; a1(u)._ | _ | _ | _"


def scheduler_trace() -> tuple[Trace, tuple[str, ...]]:
    p, ctx, free = load(scheduler_source())
    return run_trace(p, ctx, SCHEDULER_SCRIPT), free


def scheduler_with_servers_source() -> str:
    """The scheduler with thread 1's recursion served by a replicated input."""
    thread1 = _THREAD1.format(k="r1<r1>.0")
    return (
        f"free {FREE};\n"
        f"   {thread1}\n"
        f"|  {_THREAD2}\n"
        f"|  {_AGENT1}\n"
        f"|  {_AGENT2}\n"
        f"|  !r1(u).{thread1}\n"
    )


# The same five synchronisations, then the invocation on r1.
SERVERS_SCRIPT = SCHEDULER_SCRIPT + (6,)
SERVERS_CRITERION = f"free {FREE}; _ | _ | _ | _ | (a1(u)._ | _)"


def scheduler_with_servers_trace() -> tuple[Trace, tuple[str, ...]]:
    p, ctx, free = load(scheduler_with_servers_source())
    return run_trace(p, ctx, SERVERS_SCRIPT), free


# Two extrusions of distinct names on x, each caught by its own receiver.
EXTRUSION_SOURCE = (
    "free x;\n"
    "   new y. new z. (x<y>.0 | x<z>.0)\n"
    "|  (x(v).v<v>.0 | x(w).w<w>.0)\n"
)
