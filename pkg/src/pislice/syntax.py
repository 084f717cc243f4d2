"""Named surface syntax: parser, printer and conversion to and from de Bruijn form.

Grammar (lowest precedence first)::

    program ::= ["free" ident* ";"] proc
    proc    ::= choice ("|" choice)*
    choice  ::= prefix ("+" prefix)*
    prefix  ::= "0" | "_" | "(" proc ")" | "!" prefix | "new" ident "." prefix
              | ident "<" (ident | "_") ">" "." prefix | ident "(" ident ")" "." prefix

``|`` and ``+`` associate to the left.  ``--`` starts a line comment.  Free
names are listed in the preamble outermost first, so the last one declared is
index 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

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
    Process,
    Tau,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


# -- named terms -----------------------------------------------------------------


@dataclass(frozen=True)
class NHole:
    pass


@dataclass(frozen=True)
class NNil:
    pass


@dataclass(frozen=True)
class NInput:
    ch: str
    binder: str
    body: "Named"


@dataclass(frozen=True)
class NOutput:
    ch: str
    z: Optional[str]
    body: "Named"


@dataclass(frozen=True)
class NChoice:
    left: "Named"
    right: "Named"


@dataclass(frozen=True)
class NPar:
    left: "Named"
    right: "Named"


@dataclass(frozen=True)
class NNu:
    binder: str
    body: "Named"


@dataclass(frozen=True)
class NBang:
    body: "Named"


Named = Union[NHole, NNil, NInput, NOutput, NChoice, NPar, NNu, NBang]


@dataclass(frozen=True)
class Program:
    free: tuple[str, ...]
    body: Named


# -- lexer -----------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>--[^\n]*)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_']*)|(?P<zero>0)|(?P<sym>[_()<>.|+!;])"
)
KEYWORDS = frozenset({"new", "free"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind == "ident" and m.group() in KEYWORDS:
            out.append(Token(m.group(), m.group(), line, pos - start + 1))
        elif kind not in ("ws", "comment"):
            out.append(Token(kind if kind != "sym" else m.group(), m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", tok.line, tok.col)
        self.i += 1
        return tok

    def ref(self) -> str:
        tok = self.take("ident")
        if tok.text not in self.scope:
            raise ParseError(f"unbound name {tok.text!r}", tok.line, tok.col)
        return tok.text

    def program(self) -> Program:
        free: list[str] = []
        if self.peek().kind == "free":
            self.take("free")
            while self.peek().kind == "ident":
                tok = self.take("ident")
                if tok.text in free:
                    raise ParseError(f"name {tok.text!r} declared twice", tok.line, tok.col)
                free.append(tok.text)
            self.take(";")
        self.scope = list(free)
        body = self.proc()
        self.take("eof")
        return Program(tuple(free), body)

    def proc(self) -> Named:
        p = self.choice()
        while self.peek().kind == "|":
            self.take("|")
            p = NPar(p, self.choice())
        return p

    def choice(self) -> Named:
        p = self.prefix()
        while self.peek().kind == "+":
            self.take("+")
            p = NChoice(p, self.prefix())
        return p

    def bound(self, name: str) -> Named:
        self.scope.append(name)
        try:
            return self.prefix()
        finally:
            self.scope.pop()

    def prefix(self) -> Named:
        tok = self.peek()
        if tok.kind == "zero":
            self.take("zero")
            return NNil()
        if tok.kind == "_":
            self.take("_")
            return NHole()
        if tok.kind == "(":
            self.take("(")
            p = self.proc()
            self.take(")")
            return p
        if tok.kind == "!":
            self.take("!")
            return NBang(self.prefix())
        if tok.kind == "new":
            self.take("new")
            name = self.take("ident").text
            self.take(".")
            return NNu(name, self.bound(name))
        if tok.kind == "ident":
            ch = self.ref()
            if self.peek().kind == "<":
                self.take("<")
                if self.peek().kind == "_":
                    self.take("_")
                    z = None
                else:
                    z = self.ref()
                self.take(">")
                self.take(".")
                return NOutput(ch, z, self.prefix())
            self.take("(")
            name = self.take("ident").text
            self.take(")")
            self.take(".")
            return NInput(ch, name, self.bound(name))
        raise ParseError(f"expected a process, found {tok.text or 'end of input'!r}", tok.line, tok.col)


def parse_program(text: str) -> Program:
    """Parse a complete source text, preamble included."""
    return _Parser(text).program()


def parse(text: str) -> Named:
    return parse_program(text).body


# -- printer ---------------------------------------------------------------------


def show(p: Named, level: int = 0) -> str:
    """Print with minimal parentheses; ``parse(show(p)) == p``."""
    if isinstance(p, NHole):
        return "_"
    if isinstance(p, NNil):
        return "0"
    if isinstance(p, NPar):
        s = f"{show(p.left, 0)} | {show(p.right, 1)}"
        return s if level <= 0 else f"({s})"
    if isinstance(p, NChoice):
        s = f"{show(p.left, 1)} + {show(p.right, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(p, NInput):
        return f"{p.ch}({p.binder}).{show(p.body, 2)}"
    if isinstance(p, NOutput):
        return f"{p.ch}<{'_' if p.z is None else p.z}>.{show(p.body, 2)}"
    if isinstance(p, NNu):
        return f"new {p.binder}.{show(p.body, 2)}"
    return f"!{show(p.body, 2)}"


def show_program(prog: Program) -> str:
    pre = f"free {' '.join(prog.free)}; " if prog.free else ""
    return pre + show(prog.body)


# -- de Bruijn conversion ----------------------------------------------------------


def to_de_bruijn(p: Named, free_order: Sequence[str]) -> tuple[Process, int]:
    """Convert to indices at context ``len(free_order)``."""
    env = list(free_order)

    def idx(name: str) -> int:
        for k in range(len(env) - 1, -1, -1):
            if env[k] == name:
                return len(env) - 1 - k
        raise IllFormed(f"unbound name {name!r}")

    def go(p: Named) -> Process:
        if isinstance(p, NHole):
            return HOLE
        if isinstance(p, NNil):
            return NIL
        if isinstance(p, NInput):
            x = idx(p.ch)
            env.append(p.binder)
            try:
                return Input(x, go(p.body))
            finally:
                env.pop()
        if isinstance(p, NOutput):
            return Output(idx(p.ch), None if p.z is None else idx(p.z), go(p.body))
        if isinstance(p, NChoice):
            return Choice(go(p.left), go(p.right))
        if isinstance(p, NPar):
            return Par(go(p.left), go(p.right))
        if isinstance(p, NNu):
            env.append(p.binder)
            try:
                return Nu(go(p.body))
            finally:
                env.pop()
        return Bang(go(p.body))

    return go(p), len(free_order)


def fresh_names(avoid: Sequence[str], prefix: str = "x") -> Iterator[str]:
    taken = set(avoid)
    k = 0
    while True:
        name = f"{prefix}{k}"
        k += 1
        if name not in taken:
            yield name


def from_de_bruijn(p: Process, hints: Sequence[str]) -> Named:
    """Name a process at context ``len(hints)``; binders get fresh names ``x0, x1, ...``."""
    names = fresh_names(hints)
    env = list(hints)

    def ref(i: int) -> str:
        if not 0 <= i < len(env):
            raise IllFormed(f"index {i} out of range at context {len(env)}")
        return env[len(env) - 1 - i]

    def go(p: Process) -> Named:
        if isinstance(p, Hole):
            return NHole()
        if isinstance(p, Nil):
            return NNil()
        if isinstance(p, Input):
            ch, b = ref(p.x), next(names)
            env.append(b)
            try:
                return NInput(ch, b, go(p.body))
            finally:
                env.pop()
        if isinstance(p, Output):
            return NOutput(ref(p.x), None if p.z is None else ref(p.z), go(p.body))
        if isinstance(p, Choice):
            return NChoice(go(p.left), go(p.right))
        if isinstance(p, Par):
            return NPar(go(p.left), go(p.right))
        if isinstance(p, Nu):
            b = next(names)
            env.append(b)
            try:
                return NNu(b, go(p.body))
            finally:
                env.pop()
        if isinstance(p, Bang):
            return NBang(go(p.body))
        raise IllFormed(f"not a process: {p!r}")

    return go(p)


def show_process(p: Process, hints: Sequence[str]) -> str:
    return show(from_de_bruijn(p, hints))


def show_action(a: Action, hints: Sequence[str]) -> str:
    def ref(i: int) -> str:
        return hints[len(hints) - 1 - i]

    if isinstance(a, ActHole):
        return "_"
    if isinstance(a, Tau):
        return "τ"
    if isinstance(a, In):
        return ref(a.x)
    if isinstance(a, BOut):
        return f"{ref(a.x)}<ν>"
    return f"{ref(a.x)}<{'_' if a.z is None else ref(a.z)}>"


def load(text: str) -> tuple[Process, int, tuple[str, ...]]:
    """Parse source text straight to ``(process, context, free names)``."""
    prog = parse_program(text)
    p, ctx = to_de_bruijn(prog.body, prog.free)
    return p, ctx, prog.free


def extend_hints(hints: Sequence[str], prefix: str = "n") -> tuple[str, ...]:
    """Hints for the context one larger, naming the new index 0 freshly."""
    return tuple(hints) + (next(fresh_names(hints, prefix)),)


# -- slices against their reference ---------------------------------------------


def show_overlay(r: Process, ref: Process, hints: Sequence[str], paint) -> str:
    """Print ``ref``, passing the text of every part erased in slice ``r`` through ``paint``.

    With ``paint = lambda s: "_"`` this prints the slice itself, using the
    reference's binder names.
    """
    return _overlay(r, from_de_bruijn(ref, hints), paint, 0)


def _overlay(r: Process, n: Named, paint, level: int) -> str:
    if isinstance(r, Hole):
        return paint(show(n, level)) if not isinstance(n, NHole) else "_"
    if isinstance(n, NNil):
        return "0"
    if isinstance(n, NPar):
        s = f"{_overlay(r.left, n.left, paint, 0)} | {_overlay(r.right, n.right, paint, 1)}"
        return s if level <= 0 else f"({s})"
    if isinstance(n, NChoice):
        s = f"{_overlay(r.left, n.left, paint, 1)} + {_overlay(r.right, n.right, paint, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(n, NInput):
        return f"{n.ch}({n.binder}).{_overlay(r.body, n.body, paint, 2)}"
    if isinstance(n, NOutput):
        z = "_" if n.z is None else (n.z if r.z is not None else paint(n.z))
        return f"{n.ch}<{z}>.{_overlay(r.body, n.body, paint, 2)}"
    if isinstance(n, NNu):
        return f"new {n.binder}.{_overlay(r.body, n.body, paint, 2)}"
    return f"!{_overlay(r.body, n.body, paint, 2)}"


def _head(n: Named) -> str:
    if isinstance(n, NHole):
        return "_"
    if isinstance(n, NNil):
        return "0"
    if isinstance(n, NInput):
        return f"{n.ch}({n.binder})."
    if isinstance(n, NOutput):
        return f"{n.ch}<{'_' if n.z is None else n.z}>."
    if isinstance(n, NChoice):
        return "+"
    if isinstance(n, NPar):
        return "|"
    if isinstance(n, NNu):
        return f"new {n.binder}."
    return "!"


def _children(p: Process) -> tuple[Process, ...]:
    if isinstance(p, (Choice, Par)):
        return (p.left, p.right)
    if isinstance(p, (Input, Output, Nu, Bang)):
        return (p.body,)
    return ()


def _nchildren(n: Named) -> tuple[Named, ...]:
    if isinstance(n, (NChoice, NPar)):
        return (n.left, n.right)
    if isinstance(n, (NInput, NOutput, NNu, NBang)):
        return (n.body,)
    return ()


def _node_fits(r: Process, ref: Process) -> bool:
    if isinstance(r, Hole):
        return True
    if type(r) is not type(ref):
        return False
    if isinstance(r, Input):
        return r.x == ref.x
    if isinstance(r, Output):
        return r.x == ref.x and (r.z is None or r.z == ref.z)
    return True


def structural_diff(r: Process, ref: Process, hints: Sequence[str], width: int = 36) -> str:
    """Two-column preorder listing of a would-be slice against its reference.

    Rows where the left node is not a slice of the right are flagged ``X``;
    their subtrees are not compared further.
    """
    rows: list[str] = [f"{'slice':<{width}}   reference"]

    def walk(r: Process, nr: Named, ref: Process, nref: Named, depth: int) -> None:
        ok = _node_fits(r, ref)
        pad = "  " * depth
        rows.append(f"{(pad + _head(nr)):<{width}} {' ' if ok else 'X'} {pad}{_head(nref)}")
        if not ok or isinstance(r, Hole):
            return
        for a, na, b, nb in zip(_children(r), _nchildren(nr), _children(ref), _nchildren(nref)):
            walk(a, na, b, nb, depth + 1)

    walk(r, from_de_bruijn(r, hints), ref, from_de_bruijn(ref, hints), 0)
    return "\n".join(rows)
