"""Renamings, their application to terms, and the two renaming Galois connections.

A renaming ``rho: G -> G'`` sends each index below ``G`` to an index below
``G'`` or, in a slice, to the erased payload.  Application to processes is
capture-avoiding: under a binder the renaming is lifted.
"""

from __future__ import annotations

from pislice.lattice import bottom_renaming, payload_join
from pislice.terms import (
    HOLE,
    NIL,
    Action,
    ActHole,
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
    Payload,
    Process,
    Renaming,
    Tau,
)


def identity(ctx: int) -> Renaming:
    return Renaming(ctx, tuple(range(ctx)))


def push(ctx: int) -> Renaming:
    """``G -> G+1``, ``x |-> x + 1``."""
    return Renaming(ctx + 1, tuple(x + 1 for x in range(ctx)))


def pop(z: Payload, ctx: int) -> Renaming:
    """``G+1 -> G``: index 0 becomes ``z``, every other index drops by one."""
    return Renaming(ctx, (z,) + tuple(range(ctx)))


def swap(ctx: int) -> Renaming:
    """``G+2 -> G+2`` exchanging indices 0 and 1."""
    return Renaming(ctx + 2, (1, 0) + tuple(range(2, ctx + 2)))


def lift(rho: Renaming) -> Renaming:
    """``rho + 1``: fixes 0 and pushes the image of every successor."""
    return Renaming(
        rho.target + 1,
        (0,) + tuple(None if y is None else y + 1 for y in rho.images),
    )


def unlift(sigma: Renaming) -> Renaming:
    """Inverse of :func:`lift` on slices: drop entry 0, un-push the rest."""
    images = []
    for y in sigma.images[1:]:
        if y == 0:
            raise AssertionError("successor entry maps to 0; not a slice of a lifted renaming")
        images.append(None if y is None else y - 1)
    return Renaming(sigma.target - 1, tuple(images))


def compose(rho: Renaming, sigma: Renaming) -> Renaming:
    """``rho . sigma`` (apply ``sigma`` first)."""
    if sigma.target != rho.source:
        raise IllFormed("renamings do not compose")
    return Renaming(rho.target, tuple(rho(y) for y in sigma.images))


def _subject(rho: Renaming, x: int) -> int:
    y = rho.images[x]
    if y is None:
        raise IllFormed(f"channel {x} mapped to an erased name")
    return y


def apply_action(rho: Renaming, a: Action) -> Action:
    if isinstance(a, (ActHole, Tau)):
        return a
    if isinstance(a, In):
        return In(_subject(rho, a.x))
    if isinstance(a, BOut):
        return BOut(_subject(rho, a.x))
    if isinstance(a, Out):
        return Out(_subject(rho, a.x), rho(a.z))
    raise IllFormed(f"not an action: {a!r}")


def apply_process(rho: Renaming, p: Process) -> Process:
    if isinstance(p, (Hole, Nil)):
        return p
    if isinstance(p, Input):
        return Input(_subject(rho, p.x), apply_process(lift(rho), p.body))
    if isinstance(p, Output):
        return Output(_subject(rho, p.x), rho(p.z), apply_process(rho, p.body))
    if isinstance(p, Choice):
        return Choice(apply_process(rho, p.left), apply_process(rho, p.right))
    if isinstance(p, Par):
        return Par(apply_process(rho, p.left), apply_process(rho, p.right))
    if isinstance(p, Nu):
        return Nu(apply_process(lift(rho), p.body))
    if isinstance(p, Bang):
        return Bang(apply_process(rho, p.body))
    raise IllFormed(f"not a process: {p!r}")


# -- Galois connection for rho x --------------------------------------------


def maps_to(rho: Renaming, x: int, z: Payload) -> Renaming:
    """Least slice of ``rho`` sending ``x`` to ``z``."""
    images = [None] * rho.source
    images[x] = z
    return Renaming(rho.target, tuple(images))


def unapp(x: int, z: Payload) -> Payload:
    """Least slice of ``x`` whose image is at least ``z``."""
    return None if z is None else x


def name_gc_fwd(rho: Renaming, x: int, sigma: Renaming, z: Payload) -> Payload:
    return None if z is None else sigma.images[x]


def name_gc_bwd(rho: Renaming, x: int, z: Payload) -> tuple[Renaming, Payload]:
    return maps_to(rho, x, z), unapp(x, z)


# -- Galois connection for rho P ----------------------------------------------


def ren_fwd(rho: Renaming, p: Process, sigma: Renaming, r: Process) -> Process:
    """Forward map ``(slice of rho, slice of p) -> slice of rho p``."""
    if isinstance(r, Hole):
        return HOLE
    if type(r) is not type(p):
        raise IllFormed(f"slice {r!r} does not match {p!r}")
    if isinstance(p, Nil):
        return NIL
    if isinstance(p, Input):
        return Input(_subject(rho, p.x), ren_fwd(lift(rho), p.body, lift(sigma), r.body))
    if isinstance(p, Output):
        z = name_gc_fwd(rho, p.z, sigma, r.z)
        return Output(_subject(rho, p.x), z, ren_fwd(rho, p.body, sigma, r.body))
    if isinstance(p, Choice):
        return Choice(ren_fwd(rho, p.left, sigma, r.left), ren_fwd(rho, p.right, sigma, r.right))
    if isinstance(p, Par):
        return Par(ren_fwd(rho, p.left, sigma, r.left), ren_fwd(rho, p.right, sigma, r.right))
    if isinstance(p, Nu):
        return Nu(ren_fwd(lift(rho), p.body, lift(sigma), r.body))
    if isinstance(p, Bang):
        return Bang(ren_fwd(rho, p.body, sigma, r.body))
    raise IllFormed(f"slice {r!r} does not match {p!r}")


def _join_ren(s: Renaming, r: Renaming) -> Renaming:
    return Renaming(s.target, tuple(payload_join(a, b) for a, b in zip(s.images, r.images)))


def ren_bwd(rho: Renaming, p: Process, r: Process) -> tuple[Renaming, Process]:
    """Lower adjoint of :func:`ren_fwd`: least ``(sigma, R)`` reproducing ``r``."""
    if isinstance(r, Hole):
        return bottom_renaming(rho), HOLE
    if type(r) is not type(p):
        raise IllFormed(f"slice {r!r} does not match {p!r}")
    if isinstance(p, Nil):
        return bottom_renaming(rho), NIL
    if isinstance(p, Input):
        sigma, body = ren_bwd(lift(rho), p.body, r.body)
        return unlift(sigma), Input(p.x, body)
    if isinstance(p, Output):
        sigma, body = ren_bwd(rho, p.body, r.body)
        if r.z is None:
            return sigma, Output(p.x, None, body)
        got, z = name_gc_bwd(rho, p.z, r.z)
        return _join_ren(sigma, got), Output(p.x, z, body)
    if isinstance(p, (Choice, Par)):
        s1, left = ren_bwd(rho, p.left, r.left)
        s2, right = ren_bwd(rho, p.right, r.right)
        return _join_ren(s1, s2), type(p)(left, right)
    if isinstance(p, Nu):
        sigma, body = ren_bwd(lift(rho), p.body, r.body)
        return unlift(sigma), Nu(body)
    sigma, body = ren_bwd(rho, p.body, r.body)
    return sigma, Bang(body)

