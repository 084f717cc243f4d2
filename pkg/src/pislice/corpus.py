"""Generators of small processes for exhaustive and randomised checking."""

from __future__ import annotations

import random
from functools import lru_cache

from pislice.terms import NIL, Bang, Choice, Input, Nu, Output, Par, Process


@lru_cache(maxsize=None)
def processes_of_size(n: int, ctx: int) -> tuple[Process, ...]:
    """Every hole-free process with exactly ``n`` nodes, well-formed at ``ctx``."""
    if n <= 0:
        return ()
    if n == 1:
        return (NIL,)
    out: list[Process] = []
    for body in processes_of_size(n - 1, ctx + 1):
        out.extend(Input(x, body) for x in range(ctx))
    for body in processes_of_size(n - 1, ctx):
        out.extend(Output(x, z, body) for x in range(ctx) for z in range(ctx))
    for i in range(1, n - 1):
        for left in processes_of_size(i, ctx):
            for right in processes_of_size(n - 1 - i, ctx):
                out.append(Choice(left, right))
                out.append(Par(left, right))
    out.extend(Nu(body) for body in processes_of_size(n - 1, ctx + 1))
    out.extend(Bang(body) for body in processes_of_size(n - 1, ctx))
    return tuple(out)


def processes_up_to(n: int, ctx: int) -> list[Process]:
    return [p for k in range(1, n + 1) for p in processes_of_size(k, ctx)]


def random_process(rng: random.Random, depth: int, ctx: int) -> Process:
    """A random hole-free process of at most ``depth`` constructor levels."""
    if depth <= 0 or ctx == 0 and rng.random() < 0.2:
        return NIL
    kinds = ["nil", "in", "out", "choice", "par", "par", "nu", "bang"]
    if ctx == 0:
        kinds = ["nil", "choice", "par", "nu"]
    k = rng.choice(kinds)
    if k == "nil":
        return NIL
    if k == "in":
        return Input(rng.randrange(ctx), random_process(rng, depth - 1, ctx + 1))
    if k == "out":
        return Output(rng.randrange(ctx), rng.randrange(ctx), random_process(rng, depth - 1, ctx))
    if k == "choice":
        return Choice(random_process(rng, depth - 1, ctx), random_process(rng, depth - 1, ctx))
    if k == "par":
        return Par(random_process(rng, depth - 1, ctx), random_process(rng, depth - 1, ctx))
    if k == "nu":
        return Nu(random_process(rng, depth - 1, ctx + 1))
    return Bang(random_process(rng, depth - 1, ctx))
