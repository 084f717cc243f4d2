"""Late labelled transition system as explicit derivation trees.

A :class:`Transition` is a proof term: every node records the rule it was
built by, its conclusion ``source --action--> target`` and its premises.
Transitions are only ever built by the constructor functions below, which
compute conclusions from premises exactly as the rules dictate, so a
transition value is valid by construction; :func:`check_derivation` re-checks
one independently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from pislice import renaming as ren
from pislice.terms import (
    Action,
    Bang,
    BOut,
    Choice,
    Hole,
    IllFormed,
    In,
    Input,
    Nil,
    Nu,
    Out,
    Output,
    Par,
    Process,
    Renaming,
    Tau,
    TAU,
    check_process,
    is_bound,
)


class Rule(str, enum.Enum):
    INPUT = "InputPrefix"
    OUTPUT = "OutputPrefix"
    CHOICE_L = "ChoiceL"
    CHOICE_R = "ChoiceR"
    PAR_L = "ParL-nonbound"
    PAR_R = "ParR-nonbound"
    PAR_L_BOUND = "ParL-bound"
    PAR_R_BOUND = "ParR-bound"
    SYNC_LR = "SyncLR"
    SYNC_RL = "SyncRL"
    EXTRUDE = "Extrude"
    CLOSE_LR = "CloseLR"
    CLOSE_RL = "CloseRL"
    NU = "NuNonbound"
    NU_BOUND = "NuBound"
    BANG = "BangUnfold"


PAR_LEFT_RULES = (Rule.PAR_L, Rule.PAR_L_BOUND)
PAR_RIGHT_RULES = (Rule.PAR_R, Rule.PAR_R_BOUND)
SYNC_RULES = (Rule.SYNC_LR, Rule.SYNC_RL, Rule.CLOSE_LR, Rule.CLOSE_RL)
NU_RULES = (Rule.EXTRUDE, Rule.NU, Rule.NU_BOUND)


class SemanticsError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    rule: Rule
    ctx: int
    source: Process
    action: Action
    target: Process
    premises: tuple["Transition", ...] = ()

    @property
    def target_ctx(self) -> int:
        return self.ctx + 1 if is_bound(self.action) else self.ctx

    @property
    def bound(self) -> bool:
        return is_bound(self.action)


# -- rule constructors ---------------------------------------------------------


def input_prefix(p: Input, ctx: int) -> Transition:
    return Transition(Rule.INPUT, ctx, p, In(p.x), p.body)


def output_prefix(p: Output, ctx: int) -> Transition:
    if p.z is None:
        raise SemanticsError("cannot execute an erased payload")
    return Transition(Rule.OUTPUT, ctx, p, Out(p.x, p.z), p.body)


def choice_l(t: Transition, q: Process) -> Transition:
    return Transition(Rule.CHOICE_L, t.ctx, Choice(t.source, q), t.action, t.target, (t,))


def choice_r(p: Process, t: Transition) -> Transition:
    return Transition(Rule.CHOICE_R, t.ctx, Choice(p, t.source), t.action, t.target, (t,))


def par_l(t: Transition, q: Process) -> Transition:
    if t.bound:
        target = Par(t.target, ren.apply_process(ren.push(t.ctx), q))
        return Transition(Rule.PAR_L_BOUND, t.ctx, Par(t.source, q), t.action, target, (t,))
    return Transition(Rule.PAR_L, t.ctx, Par(t.source, q), t.action, Par(t.target, q), (t,))


def par_r(p: Process, t: Transition) -> Transition:
    if t.bound:
        target = Par(ren.apply_process(ren.push(t.ctx), p), t.target)
        return Transition(Rule.PAR_R_BOUND, t.ctx, Par(p, t.source), t.action, target, (t,))
    return Transition(Rule.PAR_R, t.ctx, Par(p, t.source), t.action, Par(p, t.target), (t,))


def can_sync(a: Action, b: Action) -> bool:
    if isinstance(a, In):
        return isinstance(b, (Out, BOut)) and b.x == a.x
    if isinstance(b, In):
        return isinstance(a, (Out, BOut)) and a.x == b.x
    return False


def sync(tl: Transition, tr: Transition) -> Transition:
    """Synchronise a left and a right transition, picking the matching rule."""
    if tl.ctx != tr.ctx or not can_sync(tl.action, tr.action):
        raise SemanticsError(f"cannot synchronise {tl.action!r} with {tr.action!r}")
    ctx = tl.ctx
    source = Par(tl.source, tr.source)
    if isinstance(tl.action, In) and isinstance(tr.action, Out):
        target = Par(ren.apply_process(ren.pop(tr.action.z, ctx), tl.target), tr.target)
        return Transition(Rule.SYNC_LR, ctx, source, TAU, target, (tl, tr))
    if isinstance(tl.action, Out):
        target = Par(tl.target, ren.apply_process(ren.pop(tl.action.z, ctx), tr.target))
        return Transition(Rule.SYNC_RL, ctx, source, TAU, target, (tl, tr))
    rule = Rule.CLOSE_LR if isinstance(tl.action, In) else Rule.CLOSE_RL
    return Transition(rule, ctx, source, TAU, Nu(Par(tl.target, tr.target)), (tl, tr))


def _unpush(a: Action) -> Action:
    if isinstance(a, Tau):
        return a
    if isinstance(a, Out):
        if a.x == 0 or a.z == 0:
            raise SemanticsError("action mentions the restricted name")
        return Out(a.x - 1, None if a.z is None else a.z - 1)
    if a.x == 0:
        raise SemanticsError("action mentions the restricted name")
    return type(a)(a.x - 1)


def can_restrict(a: Action) -> bool:
    if isinstance(a, Tau):
        return True
    if isinstance(a, Out):
        return a.x != 0
    return a.x != 0


def nu(t: Transition) -> Transition:
    """Propagate a transition of the body through a restriction."""
    ctx = t.ctx - 1
    if ctx < 0:
        raise SemanticsError("restriction body must be at a positive context")
    a = t.action
    if isinstance(a, Out) and a.z == 0 and a.x != 0:
        return Transition(Rule.EXTRUDE, ctx, Nu(t.source), BOut(a.x - 1), t.target, (t,))
    b = _unpush(a)
    if is_bound(b):
        target = Nu(ren.apply_process(ren.swap(ctx), t.target))
        return Transition(Rule.NU_BOUND, ctx, Nu(t.source), b, target, (t,))
    return Transition(Rule.NU, ctx, Nu(t.source), b, Nu(t.target), (t,))


def bang(t: Transition) -> Transition:
    src = t.source
    if not (isinstance(src, Par) and src.right == Bang(src.left)):
        raise SemanticsError("replication premise must start from P | !P")
    return Transition(Rule.BANG, t.ctx, src.right, t.action, t.target, (t,))


# -- enumeration ---------------------------------------------------------------


def _par_transitions(
    left: Process, right: Process, lts: list[Transition], rts: list[Transition]
) -> list[Transition]:
    out = [par_l(t, right) for t in lts]
    out += [par_r(left, t) for t in rts]
    for tl in lts:
        for tr in rts:
            if can_sync(tl.action, tr.action):
                out.append(sync(tl, tr))
    return out


def enumerate_transitions(p: Process, ctx: int) -> list[Transition]:
    """All derivable transitions of a hole-free process, in a fixed order.

    Par: left moves, then right moves, then synchronisations (left-major).
    Replication unfolds once: the inner ``!P`` of ``P | !P`` is passive.
    """
    if isinstance(p, Hole):
        raise SemanticsError("cannot execute an erased process")
    if isinstance(p, Nil):
        return []
    if isinstance(p, Input):
        return [input_prefix(p, ctx)]
    if isinstance(p, Output):
        return [output_prefix(p, ctx)]
    if isinstance(p, Choice):
        return [choice_l(t, p.right) for t in enumerate_transitions(p.left, ctx)] + [
            choice_r(p.left, t) for t in enumerate_transitions(p.right, ctx)
        ]
    if isinstance(p, Par):
        return _par_transitions(
            p.left, p.right, enumerate_transitions(p.left, ctx), enumerate_transitions(p.right, ctx)
        )
    if isinstance(p, Nu):
        return [nu(t) for t in enumerate_transitions(p.body, ctx + 1) if can_restrict(t.action)]
    if isinstance(p, Bang):
        lts = enumerate_transitions(p.body, ctx)
        return [bang(t) for t in _par_transitions(p.body, p, lts, [])]
    raise IllFormed(f"not a process: {p!r}")


def step_by(p: Process, ctx: int, index: int) -> Transition:
    ts = enumerate_transitions(p, ctx)
    if not 0 <= index < len(ts):
        raise SemanticsError(f"transition index {index} out of range (0..{len(ts) - 1})")
    return ts[index]


# -- traces --------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    start: Process
    ctx: int
    steps: tuple[Transition, ...] = ()

    def __post_init__(self) -> None:
        p, ctx = self.start, self.ctx
        for i, t in enumerate(self.steps):
            if t.source != p or t.ctx != ctx:
                raise SemanticsError(f"step {i} does not start where the previous one ended")
            p, ctx = t.target, t.target_ctx

    @property
    def end(self) -> Process:
        return self.steps[-1].target if self.steps else self.start

    @property
    def end_ctx(self) -> int:
        return self.steps[-1].target_ctx if self.steps else self.ctx

    def __len__(self) -> int:
        return len(self.steps)


def run_trace(p: Process, ctx: int, script: Sequence[int]) -> Trace:
    check_process(p, ctx)
    steps = []
    cur, cur_ctx = p, ctx
    for pos, i in enumerate(script):
        try:
            t = step_by(cur, cur_ctx, i)
        except SemanticsError as e:
            raise SemanticsError(f"script position {pos}: {e}") from None
        steps.append(t)
        cur, cur_ctx = t.target, t.target_ctx
    return Trace(p, ctx, tuple(steps))


# -- renaming transitions ------------------------------------------------------


def rename_transition(rho: Renaming, t: Transition) -> Transition:
    """Image of ``t`` under an unsliced renaming; same rule skeleton."""
    if rho.source != t.ctx:
        raise IllFormed("renaming source does not match transition context")
    r = t.rule
    if r is Rule.INPUT:
        return input_prefix(ren.apply_process(rho, t.source), rho.target)
    if r is Rule.OUTPUT:
        return output_prefix(ren.apply_process(rho, t.source), rho.target)
    if r is Rule.CHOICE_L:
        return choice_l(rename_transition(rho, t.premises[0]), ren.apply_process(rho, t.source.right))
    if r is Rule.CHOICE_R:
        return choice_r(ren.apply_process(rho, t.source.left), rename_transition(rho, t.premises[0]))
    if r in PAR_LEFT_RULES:
        return par_l(rename_transition(rho, t.premises[0]), ren.apply_process(rho, t.source.right))
    if r in PAR_RIGHT_RULES:
        return par_r(ren.apply_process(rho, t.source.left), rename_transition(rho, t.premises[0]))
    if r in SYNC_RULES:
        return sync(rename_transition(rho, t.premises[0]), rename_transition(rho, t.premises[1]))
    if r in NU_RULES:
        return nu(rename_transition(ren.lift(rho), t.premises[0]))
    if r is Rule.BANG:
        return bang(rename_transition(rho, t.premises[0]))
    raise AssertionError(r)


# -- independent re-checking ---------------------------------------------------


def _push_action(a: Action, ctx: int) -> Action:
    return ren.apply_action(ren.push(ctx), a)


def check_derivation(t: Transition) -> None:
    """Re-derive every node of ``t`` from the rule equations; raise on mismatch."""

    def fail(msg: str) -> None:
        raise SemanticsError(f"{t.rule.value}: {msg}")

    check_process(t.source, t.ctx)
    check_process(t.target, t.target_ctx)
    for s in t.premises:
        check_derivation(s)
    r, src, a, tgt, ps, ctx = t.rule, t.source, t.action, t.target, t.premises, t.ctx
    if r is Rule.INPUT:
        if not (isinstance(src, Input) and a == In(src.x) and tgt == src.body and not ps):
            fail("bad input prefix")
    elif r is Rule.OUTPUT:
        if not (isinstance(src, Output) and a == Out(src.x, src.z) and tgt == src.body and not ps):
            fail("bad output prefix")
    elif r in (Rule.CHOICE_L, Rule.CHOICE_R):
        (s,) = ps
        side = src.left if r is Rule.CHOICE_L else src.right
        if not (isinstance(src, Choice) and s.source == side and s.action == a and s.target == tgt):
            fail("bad choice")
    elif r in PAR_LEFT_RULES + PAR_RIGHT_RULES:
        (s,) = ps
        left = r in PAR_LEFT_RULES
        active, passive = (src.left, src.right) if left else (src.right, src.left)
        if not isinstance(src, Par) or s.source != active or s.action != a:
            fail("bad parallel premise")
        bound_rule = r in (Rule.PAR_L_BOUND, Rule.PAR_R_BOUND)
        if bound_rule != is_bound(a):
            fail("rule does not match action kind")
        moved = ren.apply_process(ren.push(ctx), passive) if bound_rule else passive
        want = Par(s.target, moved) if left else Par(moved, s.target)
        if tgt != want:
            fail("bad parallel conclusion")
    elif r in SYNC_RULES:
        sl, sr = ps
        if not isinstance(src, Par) or sl.source != src.left or sr.source != src.right or a != TAU:
            fail("bad synchronisation")
        if r is Rule.SYNC_LR:
            ok = isinstance(sl.action, In) and isinstance(sr.action, Out) and sl.action.x == sr.action.x
            ok = ok and tgt == Par(ren.apply_process(ren.pop(sr.action.z, ctx), sl.target), sr.target)
        elif r is Rule.SYNC_RL:
            ok = isinstance(sr.action, In) and isinstance(sl.action, Out) and sl.action.x == sr.action.x
            ok = ok and tgt == Par(sl.target, ren.apply_process(ren.pop(sl.action.z, ctx), sr.target))
        elif r is Rule.CLOSE_LR:
            ok = isinstance(sl.action, In) and isinstance(sr.action, BOut) and sl.action.x == sr.action.x
            ok = ok and tgt == Nu(Par(sl.target, sr.target))
        else:
            ok = isinstance(sr.action, In) and isinstance(sl.action, BOut) and sl.action.x == sr.action.x
            ok = ok and tgt == Nu(Par(sl.target, sr.target))
        if not ok:
            fail("bad synchronisation conclusion")
    elif r is Rule.EXTRUDE:
        (s,) = ps
        if not (
            isinstance(src, Nu)
            and s.source == src.body
            and isinstance(a, BOut)
            and s.action == Out(a.x + 1, 0)
            and tgt == s.target
        ):
            fail("bad extrusion")
    elif r in (Rule.NU, Rule.NU_BOUND):
        (s,) = ps
        if not (isinstance(src, Nu) and s.source == src.body and s.action == _push_action(a, ctx)):
            fail("bad restriction premise")
        if (r is Rule.NU_BOUND) != is_bound(a):
            fail("rule does not match action kind")
        want = Nu(ren.apply_process(ren.swap(ctx), s.target)) if r is Rule.NU_BOUND else Nu(s.target)
        if tgt != want:
            fail("bad restriction conclusion")
    elif r is Rule.BANG:
        (s,) = ps
        if not (isinstance(src, Bang) and s.source == Par(src.body, src) and s.action == a and s.target == tgt):
            fail("bad replication")
    else:
        fail("unknown rule")
