"""The slice order on payloads, actions, processes and renamings.

``leq(a, b)`` holds when ``a`` is ``b`` with some sub-terms (or payloads, or
renaming entries) replaced by the erased form.  Only payload positions of
names are erasable; channel positions must agree exactly.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, TypeVar

from pislice.terms import (
    A_HOLE,
    HOLE,
    NIL,
    Action,
    ActHole,
    Bang,
    BOut,
    Choice,
    Hole,
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
    size,
)

T = TypeVar("T")

DEFAULT_NODE_CAP = 12


class Incompatible(ValueError):
    """Two terms have no common upper bound (they are not slices of one term)."""


class CapExceeded(ValueError):
    """Exhaustive enumeration requested on a term above the node cap."""


# -- payloads ----------------------------------------------------------------


def payload_leq(z: Payload, z2: Payload) -> bool:
    return z is None or z == z2


def payload_join(z: Payload, z2: Payload) -> Payload:
    if z is None:
        return z2
    if z2 is None or z == z2:
        return z
    raise Incompatible(f"payloads {z} and {z2}")


def payload_meet(z: Payload, z2: Payload) -> Payload:
    if z is None or z2 is None:
        return None
    if z == z2:
        return z
    raise Incompatible(f"payloads {z} and {z2}")


# -- actions -----------------------------------------------------------------


def action_leq(a: Action, b: Action) -> bool:
    if isinstance(a, ActHole):
        return True
    if isinstance(a, Out):
        return isinstance(b, Out) and a.x == b.x and payload_leq(a.z, b.z)
    return a == b


def action_join(a: Action, b: Action) -> Action:
    if isinstance(a, ActHole):
        return b
    if isinstance(b, ActHole):
        return a
    if isinstance(a, Out) and isinstance(b, Out) and a.x == b.x:
        return Out(a.x, payload_join(a.z, b.z))
    if a == b:
        return a
    raise Incompatible(f"actions {a!r} and {b!r}")


def action_meet(a: Action, b: Action) -> Action:
    if isinstance(a, ActHole) or isinstance(b, ActHole):
        return A_HOLE
    if isinstance(a, Out) and isinstance(b, Out) and a.x == b.x:
        return Out(a.x, payload_meet(a.z, b.z))
    if a == b:
        return a
    raise Incompatible(f"actions {a!r} and {b!r}")


def action_slices(a: Action) -> list[Action]:
    if isinstance(a, ActHole):
        return [A_HOLE]
    if isinstance(a, Out) and a.z is not None:
        return [A_HOLE, Out(a.x, None), a]
    return [A_HOLE, a]


# -- processes ---------------------------------------------------------------


def proc_leq(p: Process, q: Process) -> bool:
    if isinstance(p, Hole):
        return True
    if type(p) is not type(q):
        return False
    if isinstance(p, Nil):
        return True
    if isinstance(p, Input):
        return p.x == q.x and proc_leq(p.body, q.body)
    if isinstance(p, Output):
        return p.x == q.x and payload_leq(p.z, q.z) and proc_leq(p.body, q.body)
    if isinstance(p, (Choice, Par)):
        return proc_leq(p.left, q.left) and proc_leq(p.right, q.right)
    return proc_leq(p.body, q.body)


def _combine(p: Process, q: Process, on_payload, on_proc) -> Process:
    if type(p) is not type(q):
        raise Incompatible(f"{type(p).__name__} vs {type(q).__name__}")
    if isinstance(p, Nil):
        return NIL
    if isinstance(p, Input):
        if p.x != q.x:
            raise Incompatible(f"input channels {p.x} and {q.x}")
        return Input(p.x, on_proc(p.body, q.body))
    if isinstance(p, Output):
        if p.x != q.x:
            raise Incompatible(f"output channels {p.x} and {q.x}")
        return Output(p.x, on_payload(p.z, q.z), on_proc(p.body, q.body))
    if isinstance(p, Choice):
        return Choice(on_proc(p.left, q.left), on_proc(p.right, q.right))
    if isinstance(p, Par):
        return Par(on_proc(p.left, q.left), on_proc(p.right, q.right))
    if isinstance(p, Nu):
        return Nu(on_proc(p.body, q.body))
    return Bang(on_proc(p.body, q.body))


def proc_join(p: Process, q: Process) -> Process:
    if isinstance(p, Hole):
        return q
    if isinstance(q, Hole):
        return p
    return _combine(p, q, payload_join, proc_join)


def proc_meet(p: Process, q: Process) -> Process:
    if isinstance(p, Hole) or isinstance(q, Hole):
        return HOLE
    return _combine(p, q, payload_meet, proc_meet)


def count_slices(p: Process) -> int:
    """Size of the slice lattice of ``p``, computed without enumerating it."""
    if isinstance(p, Hole):
        return 1
    if isinstance(p, Nil):
        return 2
    if isinstance(p, Output):
        return 1 + (2 if p.z is not None else 1) * count_slices(p.body)
    if isinstance(p, (Input, Nu, Bang)):
        return 1 + count_slices(p.body)
    return 1 + count_slices(p.left) * count_slices(p.right)


def _slices(p: Process) -> Iterator[Process]:
    yield HOLE
    if isinstance(p, Hole):
        return
    if isinstance(p, Nil):
        yield NIL
    elif isinstance(p, Input):
        for r in _slices(p.body):
            yield Input(p.x, r)
    elif isinstance(p, Output):
        zs = (None,) if p.z is None else (None, p.z)
        for z in zs:
            for r in _slices(p.body):
                yield Output(p.x, z, r)
    elif isinstance(p, (Choice, Par)):
        ctor = type(p)
        rights = list(_slices(p.right))
        for l in _slices(p.left):
            for r in rights:
                yield ctor(l, r)
    else:
        ctor = type(p)
        for r in _slices(p.body):
            yield ctor(r)


def enumerate_slices(p: Process, cap: int | None = DEFAULT_NODE_CAP) -> list[Process]:
    """Every slice of ``p``, bottom first, in a fixed order.

    Exponential in the size of ``p``; refuses references above ``cap`` nodes
    unless ``cap`` is ``None``.
    """
    if cap is not None and size(p) > cap:
        raise CapExceeded(f"{size(p)} nodes exceeds cap {cap}")
    return list(_slices(p))


def random_slice(rng: random.Random, p: Process, erase: float = 0.15, keep_payload: float = 0.7) -> Process:
    """A random slice of ``p``: each sub-term is erased with probability ``erase``."""
    if isinstance(p, Hole) or rng.random() < erase:
        return HOLE
    if isinstance(p, Nil):
        return p
    if isinstance(p, Input):
        return Input(p.x, random_slice(rng, p.body, erase, keep_payload))
    if isinstance(p, Output):
        z = p.z if rng.random() < keep_payload else None
        return Output(p.x, z, random_slice(rng, p.body, erase, keep_payload))
    if isinstance(p, (Choice, Par)):
        return type(p)(random_slice(rng, p.left, erase, keep_payload), random_slice(rng, p.right, erase, keep_payload))
    return type(p)(random_slice(rng, p.body, erase, keep_payload))


# -- renamings ---------------------------------------------------------------


def bottom_renaming(rho: Renaming) -> Renaming:
    return Renaming(rho.target, (None,) * rho.source)


def renaming_leq(s: Renaming, r: Renaming) -> bool:
    if s.source != r.source or s.target != r.target:
        raise Incompatible("renamings over different contexts")
    return all(payload_leq(a, b) for a, b in zip(s.images, r.images))


def renaming_join(s: Renaming, r: Renaming) -> Renaming:
    if s.source != r.source or s.target != r.target:
        raise Incompatible("renamings over different contexts")
    return Renaming(s.target, tuple(payload_join(a, b) for a, b in zip(s.images, r.images)))


def renaming_meet(s: Renaming, r: Renaming) -> Renaming:
    if s.source != r.source or s.target != r.target:
        raise Incompatible("renamings over different contexts")
    return Renaming(s.target, tuple(payload_meet(a, b) for a, b in zip(s.images, r.images)))


def renaming_slices(rho: Renaming) -> list[Renaming]:
    choices = [(None,) if y is None else (None, y) for y in rho.images]
    return [Renaming(rho.target, tuple(c)) for c in itertools.product(*choices)]


# -- generic dispatch --------------------------------------------------------

_ACTIONS = (ActHole, In, Out, BOut, Tau)


def leq(a, b) -> bool:
    """Slice order on payloads, actions, processes, renamings or tuples thereof."""
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(leq(x, y) for x, y in zip(a, b))
    if isinstance(a, Renaming):
        return renaming_leq(a, b)
    if isinstance(a, _ACTIONS) or isinstance(b, _ACTIONS):
        return action_leq(a, b)
    if a is None or isinstance(a, int):
        return payload_leq(a, b)
    return proc_leq(a, b)


def join(a, b):
    if isinstance(a, tuple) and isinstance(b, tuple):
        return tuple(join(x, y) for x, y in zip(a, b))
    if isinstance(a, Renaming):
        return renaming_join(a, b)
    if isinstance(a, _ACTIONS):
        return action_join(a, b)
    if a is None or isinstance(a, int):
        return payload_join(a, b)
    return proc_join(a, b)


def meet(a, b):
    if isinstance(a, tuple) and isinstance(b, tuple):
        return tuple(meet(x, y) for x, y in zip(a, b))
    if isinstance(a, Renaming):
        return renaming_meet(a, b)
    if isinstance(a, _ACTIONS):
        return action_meet(a, b)
    if a is None or isinstance(a, int):
        return payload_meet(a, b)
    return proc_meet(a, b)
