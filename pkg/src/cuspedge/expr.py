"""Coordinate-function expressions over the variables ``u`` and ``v``.

Grammar (EBNF)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?
    atom    := number | 'u' | 'v' | 'pi' | 'e'
             | func '(' expr (',' expr)* ')' | '(' expr ')'
    func    := 'sin' | 'cos' | 'tan' | 'sqrt' | 'exp' | 'log' | 'abs' | 'atan' | 'pow'

``^`` is right-associative and binds tighter than unary minus, so ``-u^2``
means ``-(u^2)`` and ``2^-1`` is one half.  There is no implicit
multiplication.

Evaluation is polymorphic: the same tree evaluates on floats, on numpy
arrays and on :mod:`cuspedge.jets` jets.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Union

import numpy as np

from . import jets as _jets
from .errors import (
    ArityError,
    EvalDomainError,
    ExprSyntaxError,
    SurfaceFileError,
    UnknownIdentifierError,
)
from .jets import Jet, Jet2, JetVec3, int_power

VARIABLES = ("u", "v")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = {
    "sin": 1, "cos": 1, "tan": 1, "sqrt": 1, "exp": 1,
    "log": 1, "abs": 1, "atan": 1, "pow": 2,
}


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    pos: int = field(default=0, compare=False)


Node = Union[Num, Var, Const, Neg, BinOp, Call]


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'op', 'end'
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    text = text.replace("−", "-").replace("×", "*")
    tokens: list[Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[i]!r}", i)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), i))
        i = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            raise ExprSyntaxError(f"expected {text!r}, found {self._describe()}", self.tok.pos)
        return self.advance()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"expected operator or end of input, found {self._describe()}",
                                  self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            t = self.advance()
            node = BinOp(t.text, node, self.term(), t.pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            t = self.advance()
            node = BinOp(t.text, node, self.unary(), t.pos)
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text in "+-":
            t = self.advance()
            operand = self.unary()
            return Neg(operand, t.pos) if t.text == "-" else operand
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            t = self.advance()
            return BinOp("^", base, self.unary(), t.pos)
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text), t.pos)
        if t.kind == "ident":
            self.advance()
            if t.text in FUNCTIONS:
                if not (self.tok.kind == "op" and self.tok.text == "("):
                    raise ExprSyntaxError(f"expected '(' after function {t.text!r}", self.tok.pos)
                self.advance()
                args = [self.expr()]
                while self.tok.kind == "op" and self.tok.text == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[t.text]:
                    raise ArityError(
                        f"{t.text} takes {FUNCTIONS[t.text]} argument(s), got {len(args)}", t.pos)
                return Call(t.text, tuple(args), t.pos)
            if t.text in VARIABLES:
                return Var(t.text, t.pos)
            if t.text in CONSTANTS:
                return Const(t.text, t.pos)
            raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.pos)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"expected a number, identifier or '(', found {self._describe()}",
                              t.pos)


def parse_expression(text: str) -> Node:
    """Parse ``text`` into an AST; raises :class:`ExprError` subclasses."""
    return _Parser(text).parse()


# -- evaluation ---------------------------------------------------------------


def is_constant(node: Node) -> bool:
    if isinstance(node, Var):
        return False
    if isinstance(node, (Num, Const)):
        return True
    if isinstance(node, Neg):
        return is_constant(node.operand)
    if isinstance(node, BinOp):
        return is_constant(node.left) and is_constant(node.right)
    return all(is_constant(a) for a in node.args)


_SCALAR_FUNCS: dict[str, Callable[[float], float]] = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
    "atan": math.atan, "abs": abs,
}

_ARRAY_FUNCS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp,
    "atan": np.arctan, "abs": np.abs, "sqrt": np.sqrt, "log": np.log,
}


class _Evaluator:
    """Evaluate an AST in one of three modes: 'scalar', 'array' or 'jet'."""

    def __init__(self, env: Mapping[str, Any], mode: str):
        self.env = env
        self.mode = mode

    def __call__(self, node: Node):
        method = getattr(self, "_" + type(node).__name__)
        return method(node)

    def _Num(self, node: Num):
        return node.value

    def _Const(self, node: Const):
        return CONSTANTS[node.name]

    def _Var(self, node: Var):
        return self.env[node.name]

    def _Neg(self, node: Neg):
        return -self(node.operand)

    def _BinOp(self, node: BinOp):
        if node.op == "^":
            return self._power(node.left, node.right, node.pos)
        a, b = self(node.left), self(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return self._divide(a, b, node.pos)

    def _divide(self, a, b, pos):
        if self.mode == "array":
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.divide(a, b)
        if isinstance(b, Jet):
            if b.value == 0.0:
                raise EvalDomainError("division by zero", pos)
        elif b == 0.0:
            raise EvalDomainError("division by zero", pos)
        try:
            return a / b
        except EvalDomainError as exc:
            raise EvalDomainError(str(exc), pos) from None

    def _power(self, base_node: Node, exp_node: Node, pos: int):
        a = self(base_node)
        if is_constant(exp_node):
            p = float(self._constant(exp_node))
            if p.is_integer():
                n = int(p)
                if n < 0:
                    return self._divide(1.0, int_power(a, -n), pos)
                return int_power(a, n)
            return self._pow_const(a, p, pos)
        b = self(exp_node)
        return self._exp_log(a, b, pos)

    def _constant(self, node: Node) -> float:
        return _Evaluator({}, "scalar")(node)

    def _pow_const(self, a, p, pos):
        if self.mode == "array":
            with np.errstate(invalid="ignore", divide="ignore"):
                return np.where(a > 0, np.abs(a) ** p, np.nan)
        if isinstance(a, Jet):
            try:
                return _jets.apply("pow_const", a, p)
            except EvalDomainError as exc:
                raise EvalDomainError(str(exc), pos) from None
        if a <= 0.0:
            raise EvalDomainError(f"non-integer power of non-positive value {a!r}", pos)
        return a ** p

    def _exp_log(self, a, b, pos):
        return self._func("exp", b * self._func("log", a, pos), pos)

    def _Call(self, node: Call):
        args = [self(a) for a in node.args]
        if node.func == "pow":
            # pow(a, b) shares the '^' rules, keyed on the exponent node
            a = args[0]
            if is_constant(node.args[1]):
                p = float(self._constant(node.args[1]))
                if p.is_integer():
                    n = int(p)
                    if n < 0:
                        return self._divide(1.0, int_power(a, -n), node.pos)
                    return int_power(a, n)
                return self._pow_const(a, p, node.pos)
            return self._exp_log(a, args[1], node.pos)
        return self._func(node.func, args[0], node.pos)

    def _func(self, name: str, x, pos: int):
        if self.mode == "array":
            with np.errstate(invalid="ignore", divide="ignore"):
                if name == "log":
                    return np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), np.nan)
                if name == "sqrt":
                    return np.where(x >= 0, np.sqrt(np.abs(x)), np.nan)
                return _ARRAY_FUNCS[name](x)
        if isinstance(x, Jet):
            try:
                return _jets.apply(name, x)
            except EvalDomainError as exc:
                raise EvalDomainError(str(exc), pos) from None
        x = float(x)
        if name == "sqrt":
            if x < 0.0:
                raise EvalDomainError(f"sqrt of negative value {x!r}", pos)
            return math.sqrt(x)
        if name == "log":
            if x <= 0.0:
                raise EvalDomainError(f"log of non-positive value {x!r}", pos)
            return math.log(x)
        return _SCALAR_FUNCS[name](x)


def eval_scalar(ast: Node, u: float, v: float) -> float:
    """IEEE double evaluation at (u, v)."""
    return float(_Evaluator({"u": float(u), "v": float(v)}, "scalar")(ast))


def eval_grid(ast: Node, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized evaluation; points outside the natural domain become NaN."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    out = _Evaluator({"u": u, "v": v}, "array")(ast)
    out = np.broadcast_to(np.asarray(out, dtype=float), u.shape).copy()
    out[~np.isfinite(out)] = np.nan
    return out


def eval_on(ast: Node, u, v):
    """Evaluate with arbitrary jet (or float) arguments, e.g. chart jets."""
    if not isinstance(u, Jet) and not isinstance(v, Jet):
        return eval_scalar(ast, u, v)
    res = _Evaluator({"u": u, "v": v}, "jet")(ast)
    if not isinstance(res, Jet):
        like = u if isinstance(u, Jet) else v
        res = like.constant_like(float(res))
    return res


def eval_jet(ast: Node, base: tuple[float, float], order: int) -> Jet2:
    """Jet of the expression about ``base`` with coefficients ``d^{i+j} / (i! j!)``."""
    if order < 0:
        raise ValueError("jet order must be non-negative")
    u = Jet2.variable(0, float(base[0]), order)
    v = Jet2.variable(1, float(base[1]), order)
    return eval_on(ast, u, v)


# -- pretty printing and substitution ----------------------------------------


def to_string(node: Node) -> str:
    """Fully parenthesized text that parses back to an equivalent tree."""
    if isinstance(node, Num):
        text = repr(float(node.value))
        if text in ("inf", "-inf", "nan"):
            raise ValueError(f"cannot print non-finite literal {text}")
        return f"({text})" if node.value < 0 or text.startswith("-") else text
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_string(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_string(node.left)} {node.op} {to_string(node.right)})"
    return f"{node.func}({', '.join(to_string(a) for a in node.args)})"


def substitute(node: Node, mapping: Mapping[str, Node]) -> Node:
    """Replace variables by sub-trees, e.g. for reparametrizations."""
    if isinstance(node, Var):
        return mapping.get(node.name, node)
    if isinstance(node, (Num, Const)):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, mapping), node.pos)
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute(node.left, mapping),
                     substitute(node.right, mapping), node.pos)
    return Call(node.func, tuple(substitute(a, mapping) for a in node.args), node.pos)


def linear_combination(coeffs, nodes, offset: float = 0.0) -> Node:
    """AST for ``offset + sum c_i * node_i``."""
    out: Node = Num(float(offset))
    for c, n in zip(coeffs, nodes):
        out = BinOp("+", out, BinOp("*", Num(float(c)), n))
    return out


# -- surfaces -----------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceDefinition:
    """A parametrized surface ``f = (x, y, z)`` on a rectangle."""

    name: str
    x: Node
    y: Node
    z: Node
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    co_orientation: int = 1
    points: tuple = ()
    source: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for lo, hi, key in ((*self.u_range, "u_range"), (*self.v_range, "v_range")):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise SurfaceFileError(f"{key} must satisfy min < max, got [{lo}, {hi}]")
        if self.co_orientation not in (1, -1):
            raise SurfaceFileError(f"co_orientation must be +1 or -1, got {self.co_orientation}")

    @classmethod
    def from_strings(cls, name: str, x: str, y: str, z: str,
                     u_range=(0.0, 1.0), v_range=(0.0, 1.0), co_orientation: int = 1,
                     points=()) -> "SurfaceDefinition":
        return cls(name, parse_expression(x), parse_expression(y), parse_expression(z),
                   (float(u_range[0]), float(u_range[1])),
                   (float(v_range[0]), float(v_range[1])), int(co_orientation),
                   tuple(tuple(map(float, p)) for p in points),
                   {"x": x, "y": y, "z": z})

    @property
    def components(self) -> tuple[Node, Node, Node]:
        return (self.x, self.y, self.z)

    @property
    def diameter(self) -> float:
        return math.hypot(self.u_range[1] - self.u_range[0], self.v_range[1] - self.v_range[0])

    def contains(self, u: float, v: float, margin: float = 0.0) -> bool:
        return (self.u_range[0] - margin <= u <= self.u_range[1] + margin
                and self.v_range[0] - margin <= v <= self.v_range[1] + margin)

    def point(self, u: float, v: float) -> np.ndarray:
        return np.array([eval_scalar(c, u, v) for c in self.components])

    def grid(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Stacked coordinates with a trailing axis of length 3."""
        return np.stack([eval_grid(c, u, v) for c in self.components], axis=-1)

    def jet(self, u0: float, v0: float, order: int) -> JetVec3:
        return JetVec3(*(eval_jet(c, (u0, v0), order) for c in self.components))

    def pullback(self, U: Jet, V: Jet) -> JetVec3:
        """Jet of ``f o phi`` for chart jets ``(U, V)`` of a map into the domain."""
        return JetVec3(*(eval_on(c, U, V) for c in self.components))

    def with_components(self, x: Node, y: Node, z: Node, **changes) -> "SurfaceDefinition":
        kw = dict(name=self.name, x=x, y=y, z=z, u_range=self.u_range, v_range=self.v_range,
                  co_orientation=self.co_orientation, points=self.points)
        kw.update(changes)
        return SurfaceDefinition(**kw)

    def flipped(self) -> "SurfaceDefinition":
        return self.with_components(self.x, self.y, self.z, co_orientation=-self.co_orientation)

    def rigid_motion(self, rotation: np.ndarray, translation) -> "SurfaceDefinition":
        R = np.asarray(rotation, dtype=float)
        comps = [linear_combination(R[i], self.components, translation[i]) for i in range(3)]
        return self.with_components(*comps)

    def reparametrized(self, u_of: Node, v_of: Node, u_range, v_range,
                       points=()) -> "SurfaceDefinition":
        """``f(u(u', v'), v(u', v'))`` on a new parameter rectangle."""
        m = {"u": u_of, "v": v_of}
        return self.with_components(*(substitute(c, m) for c in self.components),
                                    u_range=tuple(map(float, u_range)),
                                    v_range=tuple(map(float, v_range)),
                                    points=tuple(tuple(map(float, p)) for p in points))

    def describe(self) -> dict:
        return {
            "name": self.name,
            "x": to_string(self.x) if "x" not in self.source else self.source["x"],
            "y": to_string(self.y) if "y" not in self.source else self.source["y"],
            "z": to_string(self.z) if "z" not in self.source else self.source["z"],
            "u_range": list(self.u_range),
            "v_range": list(self.v_range),
            "co_orientation": self.co_orientation,
        }
