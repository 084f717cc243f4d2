"""Forward ("replay") and backward ("rewind") slicing of transitions and traces.

Both directions recurse over the derivation of the transition.  The forward
direction maps a slice of the source to a slice of ``(action, target)``; the
backward direction maps such a pair back to the least source slice that
replays to at least it.  Rule dispatch is first-match: an erased input
(erased slice, or erased action with erased target) is handled before any
structural rule.
"""

from __future__ import annotations

from pislice import renaming as ren
from pislice.lattice import action_leq, proc_join, proc_leq
from pislice.semantics import Rule, Trace, Transition
from pislice.terms import (
    A_HOLE,
    HOLE,
    TAU,
    Action,
    ActHole,
    Bang,
    Choice,
    Hole,
    In,
    Input,
    Nu,
    Out,
    Output,
    Par,
    Process,
    Tau,
)


class SliceError(ValueError):
    """A slice or criterion is not below the term it claims to slice."""


StepSlice = tuple[Action, Process]


def _shift_action(a: Action, by: int) -> Action:
    if isinstance(a, (ActHole, Tau)):
        return a
    if isinstance(a, Out):
        return Out(a.x + by, None if a.z is None else a.z + by)
    return type(a)(a.x + by)


def _expand(r: Process, ref: Process) -> Process:
    """View an erased slice as the reference's constructor with erased children."""
    if not isinstance(r, Hole):
        if type(r) is not type(ref):
            raise SliceError(f"slice {r!r} does not match {type(ref).__name__}")
        return r
    if isinstance(ref, (Par, Choice)):
        return type(ref)(HOLE, HOLE)
    if isinstance(ref, (Nu, Bang)):
        return type(ref)(HOLE)
    raise AssertionError(f"cannot expand a hole against {ref!r}")


# -- single transitions ----------------------------------------------------------


def _fwd(t: Transition, r: Process) -> StepSlice:
    if isinstance(r, Hole):
        return A_HOLE, HOLE
    if type(r) is not type(t.source):
        raise SliceError(f"{r!r} is not a slice of {t.source!r}")
    rule, ctx = t.rule, t.ctx
    if rule is Rule.INPUT:
        return t.action, r.body
    if rule is Rule.OUTPUT:
        return Out(t.action.x, r.z), r.body
    if rule is Rule.CHOICE_L:
        return _fwd(t.premises[0], r.left)
    if rule is Rule.CHOICE_R:
        return _fwd(t.premises[0], r.right)
    if rule in (Rule.PAR_L, Rule.PAR_L_BOUND):
        a, left = _fwd(t.premises[0], r.left)
        right = r.right
        if rule is Rule.PAR_L_BOUND:
            right = ren.ren_fwd(ren.push(ctx), t.source.right, ren.push(ctx), right)
        return a, Par(left, right)
    if rule in (Rule.PAR_R, Rule.PAR_R_BOUND):
        a, right = _fwd(t.premises[0], r.right)
        left = r.left
        if rule is Rule.PAR_R_BOUND:
            left = ren.ren_fwd(ren.push(ctx), t.source.left, ren.push(ctx), left)
        return a, Par(left, right)
    if rule in (Rule.SYNC_LR, Rule.SYNC_RL, Rule.CLOSE_LR, Rule.CLOSE_RL):
        tl, tr = t.premises
        al, left = _fwd(tl, r.left)
        ar, right = _fwd(tr, r.right)
        a = A_HOLE if isinstance(al, ActHole) or isinstance(ar, ActHole) else TAU
        if rule is Rule.SYNC_LR:
            z = ar.z if isinstance(ar, Out) else None
            rho = ren.pop(tr.action.z, ctx)
            left = ren.ren_fwd(rho, tl.target, ren.pop(z, ctx), left)
        elif rule is Rule.SYNC_RL:
            z = al.z if isinstance(al, Out) else None
            rho = ren.pop(tl.action.z, ctx)
            right = ren.ren_fwd(rho, tr.target, ren.pop(z, ctx), right)
        else:
            return a, Nu(Par(left, right))
        return a, Par(left, right)
    if rule is Rule.EXTRUDE:
        (s,) = t.premises
        a, body = _fwd(s, r.body)
        return (t.action if a == s.action else A_HOLE), body
    if rule is Rule.NU:
        a, body = _fwd(t.premises[0], r.body)
        return _shift_action(a, -1), Nu(body)
    if rule is Rule.NU_BOUND:
        (s,) = t.premises
        a, body = _fwd(s, r.body)
        sw = ren.swap(ctx)
        return _shift_action(a, -1), Nu(ren.ren_fwd(sw, s.target, sw, body))
    if rule is Rule.BANG:
        return _fwd(t.premises[0], Par(r.body, r))
    raise AssertionError(rule)


def _bwd(t: Transition, a: Action, r: Process) -> Process:
    if isinstance(a, ActHole) and isinstance(r, Hole):
        return HOLE
    rule, ctx, tgt = t.rule, t.ctx, t.target
    if rule is Rule.INPUT:
        return Input(t.source.x, r)
    if rule is Rule.OUTPUT:
        return Output(t.source.x, a.z if isinstance(a, Out) else None, r)
    if rule is Rule.CHOICE_L:
        return Choice(_bwd(t.premises[0], a, r), HOLE)
    if rule is Rule.CHOICE_R:
        return Choice(HOLE, _bwd(t.premises[0], a, r))
    if rule in (Rule.PAR_L, Rule.PAR_L_BOUND):
        r = _expand(r, tgt)
        right = r.right
        if rule is Rule.PAR_L_BOUND:
            right = ren.ren_bwd(ren.push(ctx), t.source.right, right)[1]
        return Par(_bwd(t.premises[0], a, r.left), right)
    if rule in (Rule.PAR_R, Rule.PAR_R_BOUND):
        r = _expand(r, tgt)
        left = r.left
        if rule is Rule.PAR_R_BOUND:
            left = ren.ren_bwd(ren.push(ctx), t.source.left, left)[1]
        return Par(left, _bwd(t.premises[0], a, r.right))
    if rule in (Rule.SYNC_LR, Rule.SYNC_RL):
        tl, tr = t.premises
        r = _expand(r, tgt)
        left, right = r.left, r.right
        if rule is Rule.SYNC_LR:
            t_in, t_out = tl, tr
            rho, left = ren.ren_bwd(ren.pop(tr.action.z, ctx), tl.target, left)
        else:
            t_out, t_in = tl, tr
            rho, right = ren.ren_bwd(ren.pop(tl.action.z, ctx), tr.target, right)
        z = rho.images[0]
        x = t_in.action.x
        if isinstance(a, Tau):
            a_in, a_out = In(x), Out(x, z)
        else:
            a_in, a_out = A_HOLE, (A_HOLE if z is None else Out(x, z))
        if rule is Rule.SYNC_LR:
            return Par(_bwd(tl, a_in, left), _bwd(tr, a_out, right))
        return Par(_bwd(tl, a_out, left), _bwd(tr, a_in, right))
    if rule in (Rule.CLOSE_LR, Rule.CLOSE_RL):
        tl, tr = t.premises
        r = _expand(r, tgt)
        body = _expand(r.body, tgt.body)
        if isinstance(a, Tau):
            al, ar = tl.action, tr.action
        else:
            al = ar = A_HOLE
        return Par(_bwd(tl, al, body.left), _bwd(tr, ar, body.right))
    if rule is Rule.EXTRUDE:
        (s,) = t.premises
        return Nu(_bwd(s, A_HOLE if isinstance(a, ActHole) else s.action, r))
    if rule is Rule.NU:
        r = _expand(r, tgt)
        return Nu(_bwd(t.premises[0], _shift_action(a, 1), r.body))
    if rule is Rule.NU_BOUND:
        (s,) = t.premises
        r = _expand(r, tgt)
        _, body = ren.ren_bwd(ren.swap(ctx), s.target, r.body)
        return Nu(_bwd(s, _shift_action(a, 1), body))
    if rule is Rule.BANG:
        par = _expand(_bwd(t.premises[0], a, r), t.premises[0].source)
        return proc_join(Bang(par.left), par.right)
    raise AssertionError(rule)


def check_step_slice(t: Transition, r: Process) -> None:
    if not proc_leq(r, t.source):
        raise SliceError("not a slice of the transition's source")


def check_step_criterion(t: Transition, a: Action, r: Process) -> None:
    if not (action_leq(a, t.action) and proc_leq(r, t.target)):
        raise SliceError("criterion is not a slice of (action, target)")


def fwd_step(t: Transition, r: Process) -> StepSlice:
    """Replay slice ``r`` of ``t.source`` along ``t``."""
    check_step_slice(t, r)
    return _fwd(t, r)


def bwd_step(t: Transition, a: Action, r: Process) -> Process:
    """Least slice of ``t.source`` whose replay is at least ``(a, r)``."""
    check_step_criterion(t, a, r)
    return _bwd(t, a, r)


def fwd_step_no_action(t: Transition, r: Process) -> Process:
    return fwd_step(t, r)[1]


def bwd_step_no_action(t: Transition, r: Process) -> Process:
    return bwd_step(t, A_HOLE, r)


# -- traces ----------------------------------------------------------------------


def fwd_trace(tr: Trace, r: Process) -> Process:
    """Replay a slice of the start state to a slice of the end state."""
    if not proc_leq(r, tr.start):
        raise SliceError("not a slice of the trace's start state")
    for t in tr.steps:
        if isinstance(r, Hole):
            return HOLE
        r = _fwd(t, r)[1]
    return r


def bwd_trace(tr: Trace, r: Process) -> Process:
    """Rewind a criterion on the end state to the least sufficient start slice."""
    if not proc_leq(r, tr.end):
        raise SliceError("criterion is not a slice of the trace's end state")
    for t in reversed(tr.steps):
        if isinstance(r, Hole):
            return HOLE
        r = _bwd(t, A_HOLE, r)
    return r

