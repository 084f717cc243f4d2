"""Concurrent transitions, residuals, braidings and their lattice isomorphisms.

Two coinitial transitions are concurrent when their derivations consume
independent redexes.  The residual ``t'/t`` re-fires the redex of ``t'``
from the target of ``t``.  The two ways round a concurrent pair end in states
that agree exactly, agree up to swapping the two newest free indices, or
agree up to transposing two adjacent restrictions somewhere inside (a bound
braid).  Each of these induces an isomorphism between the slice lattices of
the two end states, and slicing commutes with it.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Optional, Union

from pislice import renaming as ren
from pislice.lattice import count_slices, enumerate_slices, random_slice
from pislice.semantics import (
    NU_RULES,
    PAR_LEFT_RULES,
    PAR_RIGHT_RULES,
    SYNC_RULES,
    Rule,
    Trace,
    Transition,
    enumerate_transitions,
    nu,
    par_l,
    par_r,
    rename_transition,
    sync,
)
from pislice.slicing import bwd_step_no_action, bwd_trace, fwd_step_no_action
from pislice.terms import HOLE, Bang, Choice, Hole, Nu, Par, Process


class NotConcurrent(ValueError):
    pass


class BraidingError(RuntimeError):
    """No braiding relates the two end states; a residual is wrong."""


# -- concurrency ---------------------------------------------------------------


def _par_sides(t: Transition) -> tuple[Optional[Transition], Optional[Transition]]:
    if t.rule in PAR_LEFT_RULES:
        return t.premises[0], None
    if t.rule in PAR_RIGHT_RULES:
        return None, t.premises[0]
    return t.premises[0], t.premises[1]


def concurrent(t: Transition, u: Transition) -> bool:
    """Whether coinitial ``t`` and ``u`` consume independent redexes."""
    if t.source != u.source or t.ctx != u.ctx:
        raise NotConcurrent("transitions are not coinitial")
    return _concurrent(t, u)


def _concurrent(t: Transition, u: Transition) -> bool:
    r = t.rule
    if r in (Rule.INPUT, Rule.OUTPUT):
        return False
    if r in (Rule.CHOICE_L, Rule.CHOICE_R):
        return u.rule is r and _concurrent(t.premises[0], u.premises[0])
    if r in NU_RULES or r is Rule.BANG:
        return _concurrent(t.premises[0], u.premises[0])
    l, rt = _par_sides(t)
    l2, rt2 = _par_sides(u)
    if l is not None and l2 is not None and not _concurrent(l, l2):
        return False
    if rt is not None and rt2 is not None and not _concurrent(rt, rt2):
        return False
    return True


# -- residuals -----------------------------------------------------------------


def residual(u: Transition, t: Transition) -> Transition:
    """``u/t``: the transition from ``t.target`` firing the redex of ``u``."""
    if not concurrent(t, u):
        raise NotConcurrent(f"{t.rule.value} and {u.rule.value} are not concurrent")
    return _residual(u, t)


def _residual(u: Transition, t: Transition) -> Transition:
    r = t.rule
    if r in (Rule.CHOICE_L, Rule.CHOICE_R, Rule.BANG):
        return _residual(u.premises[0], t.premises[0])
    if r in NU_RULES:
        sub = _residual(u.premises[0], t.premises[0])
        if r is Rule.EXTRUDE:
            return sub
        if r is Rule.NU:
            return nu(sub)
        return nu(rename_transition(ren.swap(t.ctx), sub))

    ctx = t.ctx
    l, rt = _par_sides(t)
    l2, rt2 = _par_sides(u)
    new_l = new_r = None
    if r in PAR_LEFT_RULES:
        if l2 is not None:
            new_l = _residual(l2, l)
        if rt2 is not None:
            new_r = rename_transition(ren.push(ctx), rt2) if t.bound else rt2
    elif r in PAR_RIGHT_RULES:
        if rt2 is not None:
            new_r = _residual(rt2, rt)
        if l2 is not None:
            new_l = rename_transition(ren.push(ctx), l2) if t.bound else l2
    else:
        if l2 is not None:
            new_l = _residual(l2, l)
            if r is Rule.SYNC_LR:
                new_l = rename_transition(ren.pop(rt.action.z, ctx), new_l)
        if rt2 is not None:
            new_r = _residual(rt2, rt)
            if r is Rule.SYNC_RL:
                new_r = rename_transition(ren.pop(l.action.z, ctx), new_r)

    closes = r in (Rule.CLOSE_LR, Rule.CLOSE_RL)
    after = t.target.body if closes else t.target
    if new_l is not None and new_r is not None:
        out = sync(new_l, new_r)
    elif new_l is not None:
        out = par_l(new_l, after.right)
    else:
        out = par_r(after.left, new_r)
    if out.source != after:
        raise AssertionError("residual does not start from the target of the first transition")
    return nu(out) if closes else out


# -- bound braids --------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """``nu nu P`` braided with ``nu nu P'`` where ``P = swap P'``."""

    left: Process
    right: Process
    ctx: int  # context of the two bodies


@dataclass(frozen=True)
class ChoiceLeft:
    phi: "Braid"
    sibling: Process


@dataclass(frozen=True)
class ChoiceRight:
    sibling: Process
    phi: "Braid"


@dataclass(frozen=True)
class ParLeft:
    phi: "Braid"
    sibling: Process


@dataclass(frozen=True)
class ParRight:
    sibling: Process
    phi: "Braid"


@dataclass(frozen=True)
class NuCong:
    phi: "Braid"


@dataclass(frozen=True)
class BangCong:
    phi: "Braid"


Braid = Union[Leaf, ChoiceLeft, ChoiceRight, ParLeft, ParRight, NuCong, BangCong]


def find_braid(q: Process, q2: Process, ctx: int) -> Optional[Braid]:
    """The bound braid relating ``q`` to ``q2``, if one exists."""
    if q == q2 or type(q) is not type(q2):
        return None
    if isinstance(q, Nu) and isinstance(q.body, Nu) and isinstance(q2.body, Nu):
        a, b = q.body.body, q2.body.body
        if a == ren.apply_process(ren.swap(ctx), b):
            return Leaf(a, b, ctx + 2)
    if isinstance(q, (Choice, Par)):
        left_cong, right_cong = (ChoiceLeft, ChoiceRight) if isinstance(q, Choice) else (ParLeft, ParRight)
        if q.right == q2.right:
            phi = find_braid(q.left, q2.left, ctx)
            return None if phi is None else left_cong(phi, q.right)
        if q.left == q2.left:
            phi = find_braid(q.right, q2.right, ctx)
            return None if phi is None else right_cong(q.left, phi)
        return None
    if isinstance(q, Nu):
        phi = find_braid(q.body, q2.body, ctx + 1)
        return None if phi is None else NuCong(phi)
    if isinstance(q, Bang):
        phi = find_braid(q.body, q2.body, ctx)
        return None if phi is None else BangCong(phi)
    return None


def braid_source(phi: Braid) -> Process:
    if isinstance(phi, Leaf):
        return Nu(Nu(phi.left))
    if isinstance(phi, ChoiceLeft):
        return Choice(braid_source(phi.phi), phi.sibling)
    if isinstance(phi, ChoiceRight):
        return Choice(phi.sibling, braid_source(phi.phi))
    if isinstance(phi, ParLeft):
        return Par(braid_source(phi.phi), phi.sibling)
    if isinstance(phi, ParRight):
        return Par(phi.sibling, braid_source(phi.phi))
    if isinstance(phi, NuCong):
        return Nu(braid_source(phi.phi))
    return Bang(braid_source(phi.phi))


def braid_target(phi: Braid) -> Process:
    if isinstance(phi, Leaf):
        return Nu(Nu(phi.right))
    if isinstance(phi, ChoiceLeft):
        return Choice(braid_target(phi.phi), phi.sibling)
    if isinstance(phi, ChoiceRight):
        return Choice(phi.sibling, braid_target(phi.phi))
    if isinstance(phi, ParLeft):
        return Par(braid_target(phi.phi), phi.sibling)
    if isinstance(phi, ParRight):
        return Par(phi.sibling, braid_target(phi.phi))
    if isinstance(phi, NuCong):
        return Nu(braid_target(phi.phi))
    return Bang(braid_target(phi.phi))


def check_braid(phi: Braid) -> None:
    """Re-check the leaf side condition of ``phi``."""
    while not isinstance(phi, Leaf):
        phi = phi.phi
    if phi.left != ren.apply_process(ren.swap(phi.ctx - 2), phi.right):
        raise BraidingError("leaf bodies are not related by swap")


def _braid_map(phi: Braid, r: Process, forward: bool) -> Process:
    if isinstance(r, Hole):
        return HOLE
    if isinstance(phi, Leaf):
        if not isinstance(r.body, Nu):
            return r
        sw = ren.swap(phi.ctx - 2)
        ref = phi.left if forward else phi.right
        return Nu(Nu(ren.ren_fwd(sw, ref, sw, r.body.body)))
    if isinstance(phi, (ChoiceLeft, ParLeft)):
        return type(r)(_braid_map(phi.phi, r.left, forward), r.right)
    if isinstance(phi, (ChoiceRight, ParRight)):
        return type(r)(r.left, _braid_map(phi.phi, r.right, forward))
    return type(r)(_braid_map(phi.phi, r.body, forward))


def braid_fwd(phi: Braid, r: Process) -> Process:
    """Slice of the braid's source to the corresponding slice of its target."""
    return _braid_map(phi, r, True)


def braid_bwd(phi: Braid, r: Process) -> Process:
    return _braid_map(phi, r, False)


def format_braid(phi: Braid) -> str:
    """Compact term notation: the leaf shows the top constructor of its body."""
    if isinstance(phi, Leaf):
        return f"(νν swap){_shape(phi.left)}"
    if isinstance(phi, ChoiceLeft):
        return f"({format_braid(phi.phi)} + ·)"
    if isinstance(phi, ChoiceRight):
        return f"(· + {format_braid(phi.phi)})"
    if isinstance(phi, ParLeft):
        return f"({format_braid(phi.phi)} | ·)"
    if isinstance(phi, ParRight):
        return f"(· | {format_braid(phi.phi)})"
    if isinstance(phi, NuCong):
        return f"ν {format_braid(phi.phi)}"
    return f"!{format_braid(phi.phi)}"


def _shape(p: Process) -> str:
    if isinstance(p, Par):
        return "(·|·)"
    if isinstance(p, Choice):
        return "(·+·)"
    return "(·)"


# -- cofinality braidings ---------------------------------------------------------


class BraidKind(str, enum.Enum):
    EQ = "Eq"
    SWAP_TOP = "SwapTop"
    BOUND = "Bound"


@dataclass(frozen=True)
class Braiding:
    kind: BraidKind
    ctx: int
    left: Process  # target of u/t
    right: Process  # target of t/u
    phi: Optional[Braid] = None

    def describe(self) -> str:
        if self.kind is BraidKind.BOUND:
            return f"Bound {format_braid(self.phi)}"
        return self.kind.value

    def inverse(self) -> "Braiding":
        if self.kind is BraidKind.BOUND:
            return Braiding(self.kind, self.ctx, self.right, self.left, find_braid(self.right, self.left, self.ctx))
        return Braiding(self.kind, self.ctx, self.right, self.left)


def relate(q: Process, q2: Process, ctx: int, base_ctx: int) -> Braiding:
    """Find the braiding relating two cofinal end states at context ``ctx``."""
    if q == q2:
        return Braiding(BraidKind.EQ, ctx, q, q2)
    if ctx == base_ctx + 2 and ren.apply_process(ren.swap(ctx - 2), q) == q2:
        return Braiding(BraidKind.SWAP_TOP, ctx, q, q2)
    phi = find_braid(q, q2, ctx)
    if phi is None:
        raise BraidingError("end states are not related by any braiding")
    return Braiding(BraidKind.BOUND, ctx, q, q2, phi)


def compute_braiding(t: Transition, u: Transition) -> Braiding:
    """The braiding from ``target(u/t)`` to ``target(t/u)``."""
    ut, tu = residual(u, t), residual(t, u)
    if ut.target_ctx != tu.target_ctx:
        raise BraidingError("residuals end at different contexts")
    return relate(ut.target, tu.target, ut.target_ctx, t.ctx)


def cofinal_fwd(g: Braiding, r: Process) -> Process:
    if g.kind is BraidKind.EQ:
        return r
    if g.kind is BraidKind.SWAP_TOP:
        sw = ren.swap(g.ctx - 2)
        return ren.ren_fwd(sw, g.left, sw, r)
    return braid_fwd(g.phi, r)


def cofinal_bwd(g: Braiding, r: Process) -> Process:
    if g.kind is BraidKind.EQ:
        return r
    if g.kind is BraidKind.SWAP_TOP:
        return ren.ren_bwd(ren.swap(g.ctx - 2), g.left, r)[1]
    return braid_bwd(g.phi, r)


# -- the pentagon ----------------------------------------------------------------


def slices_for_check(p: Process, cap: int, samples: int, rng: random.Random) -> list[Process]:
    """All slices of ``p`` when its lattice has at most ``cap`` elements, else a sample."""
    if count_slices(p) <= cap:
        return enumerate_slices(p, None)
    return [HOLE, p] + [random_slice(rng, p) for _ in range(samples)]


@dataclass
class PentagonReport:
    forward_checked: int = 0
    backward_checked: int = 0
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.failures == 0


def pentagon_report(
    t: Transition,
    u: Transition,
    cap: int = 4096,
    samples: int = 200,
    rng: Optional[random.Random] = None,
) -> PentagonReport:
    rng = rng or random.Random(0)
    ut, tu = residual(u, t), residual(t, u)
    g = relate(ut.target, tu.target, ut.target_ctx, t.ctx)
    rep = PentagonReport()
    for r in slices_for_check(t.source, cap, samples, rng):
        one = cofinal_fwd(g, fwd_step_no_action(ut, fwd_step_no_action(t, r)))
        two = fwd_step_no_action(tu, fwd_step_no_action(u, r))
        rep.forward_checked += 1
        rep.failures += one != two
    for r in slices_for_check(tu.target, cap, samples, rng):
        one = bwd_step_no_action(t, bwd_step_no_action(ut, cofinal_bwd(g, r)))
        two = bwd_step_no_action(u, bwd_step_no_action(tu, r))
        rep.backward_checked += 1
        rep.failures += one != two
    return rep


def check_pentagon(t: Transition, u: Transition, **kw) -> bool:
    """Slicing commutes around the pentagon of a concurrent pair, both directions."""
    return pentagon_report(t, u, **kw).ok


# -- permuting traces ------------------------------------------------------------


def find_unresidual(t: Transition, after: Transition) -> Transition:
    """A transition ``u`` coinitial with ``t`` such that ``u/t == after``."""
    for u in enumerate_transitions(t.source, t.ctx):
        if concurrent(t, u) and _residual(u, t) == after:
            return u
    raise NotConcurrent("the two steps are causally dependent")


def permute_adjacent(tr: Trace, i: int) -> tuple[Trace, Braiding]:
    """Swap steps ``i`` and ``i+1``; returns the new trace and the end-state braiding.

    The braiding maps slices of the old end state to slices of the new one.
    Swapping an interior pair is only supported when it closes with equality.
    """
    if not 0 <= i < len(tr.steps) - 1:
        raise IndexError(f"no adjacent pair at {i}")
    t, after = tr.steps[i], tr.steps[i + 1]
    u = find_unresidual(t, after)
    tu = _residual(t, u)
    g = relate(after.target, tu.target, after.target_ctx, t.ctx)
    last = i + 1 == len(tr.steps) - 1
    if g.kind is not BraidKind.EQ and not last:
        raise BraidingError("transporting the rest of the trace across a non-trivial braiding is not supported")
    steps = tr.steps[:i] + (u, tu) + tr.steps[i + 2 :]
    return Trace(tr.start, tr.ctx, steps), g


def slice_invariant(tr: Trace, tr2: Trace, g: Braiding, r: Process) -> bool:
    """Backward slices agree through the end-state isomorphism for criterion ``r``."""
    return bwd_trace(tr, cofinal_bwd(g, r)) == bwd_trace(tr2, r)


def concurrent_pairs(p: Process, ctx: int) -> list[tuple[int, int]]:
    ts = enumerate_transitions(p, ctx)
    return [(i, j) for i in range(len(ts)) for j in range(i + 1, len(ts)) if _concurrent(ts[i], ts[j])]



def iso_roundtrip_failures(g: Braiding) -> int:
    """Count slices where the braiding's two maps fail to be mutually inverse."""
    bad = 0
    for r in enumerate_slices(g.left, None):
        bad += cofinal_bwd(g, cofinal_fwd(g, r)) != r
    for r in enumerate_slices(g.right, None):
        bad += cofinal_fwd(g, cofinal_bwd(g, r)) != r
    return bad
