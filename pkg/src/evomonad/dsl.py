"""A small wiring language for building components from the catalog.

Grammar::

    program   := def* expr
    def       := ident "=" expr ";"
    seq       := par ("." par)*                  -- right-assoc, a . b runs b first
    par       := atom (("[s]" | "[x]") atom)*     -- left-assoc
    atom      := "pair" "<<" expr "," expr ">>" | "sync(" expr "," expr ")"
               | "choice(" expr "," expr ")" | "sum(" expr "," expr ")"
               | "lift(" ident ")" | "iterate(" expr "," int ")"
               | "feedback(" expr ("," ident "=" num)* ")" | "delay(" num ")"
               | ident ("(" num ("," num)* ")")? | "(" expr ")"

Comments run from ``--`` to the end of the line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator

from . import combinators as C
from .catalog import Registry, default_registry
from .spaces import SpaceMismatch


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class DslError(Exception):
    """Syntax error: carries the offending span and the set of expected tokens."""

    def __init__(self, message: str, span: SourceSpan, expected: frozenset[str] = frozenset()):
        self.span = span
        self.expected = expected
        self.message = message
        detail = f" (expected {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{span}: {message}{detail}")


class ElaborationError(Exception):
    def __init__(self, message: str, *spans: SourceSpan):
        self.spans = spans
        self.message = message
        where = " and ".join(str(s) for s in spans)
        super().__init__(f"{where}: {message}" if where else message)


# -- AST ---------------------------------------------------------------------------

_NOSPAN = SourceSpan(0, 0, 0, 0)


def _span():
    return field(default=_NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Prim:
    name: str
    args: tuple[float, ...] = ()
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Seq:
    second: object
    first: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Choice:
    left: object
    right: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SumNode:
    left: object
    right: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class StrictPair:
    left: object
    right: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class StrictProd:
    left: object
    right: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SyncPair:
    left: object
    right: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class SyncProd:
    left: object
    right: object
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Lift:
    fn: str
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Iterate:
    body: object
    n: int
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Feedback:
    body: object
    options: tuple[tuple[str, float], ...] = ()
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Delay:
    d: float
    span: SourceSpan = _span()


@dataclass(frozen=True)
class Program:
    defs: tuple[tuple[str, object], ...]
    body: object


# -- lexer -------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|--[^\n]*)
  | (?P<num>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><<|>>|\[s\]|\[x\]|[().,=;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "eof"
    text: str
    span: SourceSpan


def tokenize(src: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        span_here = SourceSpan(line, pos - line_start + 1, pos, pos + 1)
        if not m:
            raise DslError(f"unexpected character {src[pos]!r}", span_here)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            out.append(Token(kind, text, SourceSpan(line, pos - line_start + 1, pos, m.end())))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", SourceSpan(line, pos - line_start + 1, pos, pos)))
    return out


# -- parser ------------------------------------------------------------------------

_BINARY_KEYWORDS = {"sync": SyncPair, "choice": Choice, "sum": SumNode}
_KEYWORDS = {"pair", "sync", "choice", "sum", "lift", "iterate", "feedback", "delay"}
_ATOM_START = frozenset({"identifier", "(", "pair", "sync", "choice", "sum", "lift", "iterate", "feedback", "delay"})


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.line, a.column, a.start, b.end)


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op", "ident"):
            self.fail({text})
        return self.advance()

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise DslError(f"unexpected {what}", t.span, frozenset(expected))

    def program(self) -> Program:
        defs: list[tuple[str, object]] = []
        seen: dict[str, SourceSpan] = {}
        while self.tok.kind == "ident" and self.peek().text == "=":
            name_tok = self.advance()
            if name_tok.text in _KEYWORDS:
                raise DslError(f"cannot redefine keyword {name_tok.text!r}", name_tok.span)
            if name_tok.text in seen:
                raise DslError(
                    f"duplicate definition of {name_tok.text!r} (first defined at {seen[name_tok.text]})",
                    name_tok.span,
                )
            seen[name_tok.text] = name_tok.span
            self.advance()
            body = self.expr()
            self.expect(";")
            defs.append((name_tok.text, body))
        body = self.expr()
        if self.tok.kind != "eof":
            self.fail({".", "[s]", "[x]", "end of input"})
        return Program(tuple(defs), body)

    def expr(self):
        return self.seq()

    def seq(self):
        left = self.par()
        if self.tok.text == "." and self.tok.kind == "op":
            self.advance()
            right = self.seq()
            return Seq(left, right, _join(left.span, right.span))
        return left

    def par(self):
        left = self.atom()
        while self.tok.kind == "op" and self.tok.text in ("[s]", "[x]"):
            op = self.advance().text
            right = self.atom()
            node = SyncProd if op == "[s]" else StrictProd
            left = node(left, right, _join(left.span, right.span))
        return left

    def number(self) -> float:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return float(t.text)
        if t.kind == "ident" and t.text == "inf":
            self.advance()
            return math.inf
        self.fail({"number"})

    def atom(self):
        t = self.tok
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind != "ident":
            self.fail(_ATOM_START)
        name = t.text
        nxt = self.peek()
        if name == "pair" and nxt.text == "<<":
            self.advance()
            self.advance()
            a = self.expr()
            self.expect(",")
            b = self.expr()
            end = self.expect(">>")
            return StrictPair(a, b, _join(t.span, end.span))
        if name in _KEYWORDS and nxt.text == "(":
            self.advance()
            self.advance()
            if name in _BINARY_KEYWORDS:
                a = self.expr()
                self.expect(",")
                b = self.expr()
                end = self.expect(")")
                return _BINARY_KEYWORDS[name](a, b, _join(t.span, end.span))
            if name == "lift":
                fn = self.tok
                if fn.kind != "ident":
                    self.fail({"function name"})
                self.advance()
                end = self.expect(")")
                return Lift(fn.text, _join(t.span, end.span))
            if name == "iterate":
                body = self.expr()
                self.expect(",")
                n_tok = self.tok
                if n_tok.kind != "num" or not re.fullmatch(r"\d+", n_tok.text):
                    self.fail({"non-negative integer"})
                self.advance()
                end = self.expect(")")
                return Iterate(body, int(n_tok.text), _join(t.span, end.span))
            if name == "feedback":
                body = self.expr()
                opts = []
                while self.tok.text == ",":
                    self.advance()
                    key = self.tok
                    if key.kind != "ident" or key.text not in _FEEDBACK_KEYS:
                        self.fail(set(_FEEDBACK_KEYS))
                    self.advance()
                    self.expect("=")
                    opts.append((key.text, self.number()))
                end = self.expect(")")
                return Feedback(body, tuple(opts), _join(t.span, end.span))
            if name == "delay":
                d = self.number()
                if d < 0:
                    raise DslError("delay must be non-negative", t.span)
                end = self.expect(")")
                return Delay(d, _join(t.span, end.span))
        if name in _KEYWORDS and name != "pair":
            self.advance()
            self.fail({"("})
        self.advance()
        args: list[float] = []
        end_span = t.span
        if self.tok.text == "(" and self.tok.kind == "op":
            self.advance()
            if self.tok.text != ")":
                args.append(self.number())
                while self.tok.text == ",":
                    self.advance()
                    args.append(self.number())
            end_span = self.expect(")").span
        return Prim(name, tuple(args), _join(t.span, end_span))


_FEEDBACK_KEYS = ("eps_dur", "eps_val", "max_iter", "lax")


def parse(source: str) -> Program:
    return _Parser(source).program()


def parse_expr(source: str):
    """Parse a program and return just its body expression."""
    return parse(source).body


# -- printer -----------------------------------------------------------------------


def _fmt_num(x: float) -> str:
    if x == math.inf:
        return "inf"
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def format_expr(node, level: int = 0) -> str:
    """Canonical text; ``level`` 0 = seq, 1 = par operand, 2 = atom."""
    if isinstance(node, Seq):
        s = f"{format_expr(node.second, 1)} . {format_expr(node.first, 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(node, (SyncProd, StrictProd)):
        op = "[s]" if isinstance(node, SyncProd) else "[x]"
        s = f"{format_expr(node.left, 1)} {op} {format_expr(node.right, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(node, StrictPair):
        return f"pair<<{format_expr(node.left)}, {format_expr(node.right)}>>"
    if isinstance(node, (SyncPair, Choice, SumNode)):
        kw = {SyncPair: "sync", Choice: "choice", SumNode: "sum"}[type(node)]
        return f"{kw}({format_expr(node.left)}, {format_expr(node.right)})"
    if isinstance(node, Lift):
        return f"lift({node.fn})"
    if isinstance(node, Iterate):
        return f"iterate({format_expr(node.body)}, {node.n})"
    if isinstance(node, Feedback):
        opts = "".join(f", {k}={_fmt_num(v)}" for k, v in node.options)
        return f"feedback({format_expr(node.body)}{opts})"
    if isinstance(node, Delay):
        return f"delay({_fmt_num(node.d)})"
    if isinstance(node, Prim):
        if not node.args:
            return node.name
        return f"{node.name}({', '.join(map(_fmt_num, node.args))})"
    raise TypeError(f"not an AST node: {node!r}")


def format_program(prog: Program) -> str:
    lines = [f"{name} = {format_expr(body)};" for name, body in prog.defs]
    lines.append(format_expr(prog.body))
    return "\n".join(lines) + "\n"


def walk(node) -> Iterator:
    yield node
    for attr in ("second", "first", "left", "right", "body"):
        child = getattr(node, attr, None)
        if child is not None:
            yield from walk(child)


# -- elaboration -------------------------------------------------------------------


def _mismatch(e: SpaceMismatch, *spans: SourceSpan) -> ElaborationError:
    return ElaborationError(f"space mismatch: {e}", *spans)


def elaborate(prog, registry: Registry | None = None, env: dict | None = None) -> C.Component:
    """Translate an AST (or a whole Program) into a component."""
    registry = registry or default_registry()
    env = dict(env or {})
    if isinstance(prog, Program):
        for name, body in prog.defs:
            env[name] = elaborate(body, registry, env)
        return elaborate(prog.body, registry, env)
    node = prog
    rec = lambda n: elaborate(n, registry, env)  # noqa: E731
    if isinstance(node, Prim):
        if node.name in env:
            if node.args:
                raise ElaborationError(f"definition {node.name!r} takes no arguments", node.span)
            return env[node.name]
        if node.name not in registry.primitives:
            raise ElaborationError(f"unknown primitive {node.name!r}", node.span)
        try:
            return registry.primitive(node.name, *node.args)
        except (TypeError, ValueError) as e:
            raise ElaborationError(f"bad arguments to {node.name!r}: {e}", node.span) from None
    if isinstance(node, Seq):
        c2, c1 = rec(node.second), rec(node.first)
        try:
            return C.kleisli_compose(c2, c1)
        except SpaceMismatch as e:
            raise _mismatch(e, node.first.span, node.second.span) from None
    binary = {
        Choice: C.choice,
        SumNode: C.sum_,
        StrictPair: C.strict_pair,
        StrictProd: C.strict_product,
        SyncPair: C.sync_pair,
        SyncProd: C.sync_product,
    }
    if type(node) in binary:
        a, b = rec(node.left), rec(node.right)
        try:
            return binary[type(node)](a, b)
        except SpaceMismatch as e:
            raise _mismatch(e, node.left.span, node.right.span) from None
    if isinstance(node, Lift):
        if node.fn not in registry.functions:
            raise ElaborationError(f"unknown function {node.fn!r}", node.span)
        return registry.function(node.fn)
    if isinstance(node, Iterate):
        body = rec(node.body)
        try:
            return C.iterate(body, node.n)
        except SpaceMismatch as e:
            raise _mismatch(e, node.body.span) from None
    if isinstance(node, Feedback):
        body = rec(node.body)
        opts = dict(node.options)
        kwargs = {}
        for key in ("eps_dur", "eps_val"):
            if key in opts:
                kwargs[key] = opts[key]
        if "max_iter" in opts:
            kwargs["max_iter"] = int(opts["max_iter"])
        if "lax" in opts:
            kwargs["lax"] = bool(opts["lax"])
        try:
            return C.feedback(body, C.FeedbackConfig(**kwargs))
        except SpaceMismatch as e:
            raise _mismatch(e, node.body.span) from None
        except ValueError as e:
            raise ElaborationError(str(e), node.span) from None
    if isinstance(node, Delay):
        return C.copy_delay(node.d)
    raise TypeError(f"not an AST node: {node!r}")


def compile_source(source: str, registry: Registry | None = None) -> C.Component:
    return elaborate(parse(source), registry)


# -- input literals ----------------------------------------------------------------

_LIT_TOKEN = re.compile(r"\s*(?:(?P<num>[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf\b)|(?P<word>[A-Za-z_]+)|(?P<op>[(),*]))")
_WORDS = {"top": True, "true": True, "bot": False, "bottom": False, "false": False}


def parse_value(text: str):
    """Parse a CLI input literal: numbers, ``inf``, ``top``/``bot``, ``*``, tuples, ``left(v)``/``right(v)``."""
    from .spaces import STAR, inl, inr

    toks: list[tuple[str, str, int]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _LIT_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad literal {text!r} at offset {pos}")
        toks.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    i = 0

    def value():
        nonlocal i
        kind, tok, at = toks[i]
        i += 1
        if kind == "num":
            return float(tok)
        if kind == "op" and tok == "*":
            return STAR
        if kind == "op" and tok == "(":
            items = [value()]
            while toks[i][1] == ",":
                i += 1
                items.append(value())
            close()
            return items[0] if len(items) == 1 else tuple(items)
        if kind == "word" and tok.lower() in _WORDS:
            return _WORDS[tok.lower()]
        if kind == "word" and tok in ("left", "right") and toks[i][1] == "(":
            i += 1
            v = value()
            close()
            return inl(v) if tok == "left" else inr(v)
        raise ValueError(f"unexpected {tok or 'end of input'!r} at offset {at} in literal {text!r}")

    def close():
        nonlocal i
        if toks[i][1] != ")":
            raise ValueError(f"expected ')' at offset {toks[i][2]} in literal {text!r}")
        i += 1

    v = value()
    if toks[i][0] != "eof":
        raise ValueError(f"trailing input at offset {toks[i][2]} in literal {text!r}")
    return v
