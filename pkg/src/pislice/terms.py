"""Processes, actions and payloads over de Bruijn indices.

A context is just a natural number: the count of free indices in scope.
Names are plain ``int`` indices.  A payload is either an index or ``None``,
the erased payload.  The erased process :data:`HOLE` and the erased action
:data:`A_HOLE` let the same types represent slices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

Payload = Optional[int]


class IllFormed(ValueError):
    """A term mentions an index outside its context, or is otherwise malformed."""


# -- processes ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Hole:
    def __repr__(self) -> str:
        return "HOLE"


@dataclass(frozen=True, slots=True)
class Nil:
    def __repr__(self) -> str:
        return "NIL"


@dataclass(frozen=True, slots=True)
class Input:
    x: int
    body: "Process"


@dataclass(frozen=True, slots=True)
class Output:
    x: int
    z: Payload
    body: "Process"


@dataclass(frozen=True, slots=True)
class Choice:
    left: "Process"
    right: "Process"


@dataclass(frozen=True, slots=True)
class Par:
    left: "Process"
    right: "Process"


@dataclass(frozen=True, slots=True)
class Nu:
    body: "Process"


@dataclass(frozen=True, slots=True)
class Bang:
    body: "Process"


Process = Union[Hole, Nil, Input, Output, Choice, Par, Nu, Bang]

HOLE = Hole()
NIL = Nil()


# -- actions -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ActHole:
    def __repr__(self) -> str:
        return "A_HOLE"


@dataclass(frozen=True, slots=True)
class In:
    x: int


@dataclass(frozen=True, slots=True)
class Out:
    x: int
    z: Payload


@dataclass(frozen=True, slots=True)
class BOut:
    x: int


@dataclass(frozen=True, slots=True)
class Tau:
    def __repr__(self) -> str:
        return "TAU"


Action = Union[ActHole, In, Out, BOut, Tau]

A_HOLE = ActHole()
TAU = Tau()


def is_bound(a: Action) -> bool:
    """Input and bound output open a binder; output and tau do not.

    The erased action has no classification of its own.
    """
    if isinstance(a, (In, BOut)):
        return True
    if isinstance(a, (Out, Tau)):
        return False
    raise IllFormed("erased action carries no bound/non-bound classification")


def target_context(a: Action, ctx: int) -> int:
    return ctx + 1 if is_bound(a) else ctx


# -- well-formedness and size -----------------------------------------------


def _check_name(x: int, ctx: int) -> None:
    if not (0 <= x < ctx):
        raise IllFormed(f"index {x} out of range for context {ctx}")


def check_process(p: Process, ctx: int) -> None:
    """Raise :class:`IllFormed` unless every free index of ``p`` is below ``ctx``."""
    stack = [(p, ctx)]
    while stack:
        p, ctx = stack.pop()
        if isinstance(p, (Hole, Nil)):
            continue
        if isinstance(p, Input):
            _check_name(p.x, ctx)
            stack.append((p.body, ctx + 1))
        elif isinstance(p, Output):
            _check_name(p.x, ctx)
            if p.z is not None:
                _check_name(p.z, ctx)
            stack.append((p.body, ctx))
        elif isinstance(p, (Choice, Par)):
            stack.append((p.left, ctx))
            stack.append((p.right, ctx))
        elif isinstance(p, Nu):
            stack.append((p.body, ctx + 1))
        elif isinstance(p, Bang):
            stack.append((p.body, ctx))
        else:
            raise IllFormed(f"not a process: {p!r}")


def well_formed(p: Process, ctx: int) -> bool:
    try:
        check_process(p, ctx)
    except IllFormed:
        return False
    return True


def check_action(a: Action, ctx: int) -> None:
    if isinstance(a, (ActHole, Tau)):
        return
    if isinstance(a, (In, BOut)):
        _check_name(a.x, ctx)
    elif isinstance(a, Out):
        _check_name(a.x, ctx)
        if a.z is not None:
            _check_name(a.z, ctx)
    else:
        raise IllFormed(f"not an action: {a!r}")


def size(p: Process) -> int:
    """Number of AST nodes; payloads are not counted as nodes."""
    if isinstance(p, (Hole, Nil)):
        return 1
    if isinstance(p, (Input, Output, Nu, Bang)):
        return 1 + size(p.body)
    return 1 + size(p.left) + size(p.right)


def has_hole(p: Process) -> bool:
    if isinstance(p, Hole):
        return True
    if isinstance(p, Nil):
        return False
    if isinstance(p, Output):
        return p.z is None or has_hole(p.body)
    if isinstance(p, (Input, Nu, Bang)):
        return has_hole(p.body)
    return has_hole(p.left) or has_hole(p.right)


# -- renamings ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Renaming:
    """A total map from indices below ``source`` to payloads over ``target``.

    Stored extensionally: ``images[x]`` is the image of ``x``; ``None`` marks an
    erased entry, which only occurs in slices of renamings.
    """

    target: int
    images: tuple[Payload, ...]

    @property
    def source(self) -> int:
        return len(self.images)

    def __call__(self, x: Payload) -> Payload:
        return None if x is None else self.images[x]

    def __post_init__(self) -> None:
        for y in self.images:
            if y is not None and not (0 <= y < self.target):
                raise IllFormed(f"renaming image {y} out of range for {self.target}")

    def is_sliced(self) -> bool:
        return any(y is None for y in self.images)
