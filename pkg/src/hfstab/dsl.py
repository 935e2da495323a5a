"""Expression language for user-supplied dispersion relations.

Custom models provide their dispersion branches omega(k), and phase-speed
symbols c^2(k), as small arithmetic expressions in the wavenumber ``k`` and
named parameters.  The grammar uses standard precedence, with ``^`` binding
tightest and associating to the right::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Numbers are decimal with an optional exponent.  There is no implicit
multiplication: write ``g*k``, not ``g k``.  ``pi`` is a built-in constant.
Evaluation is real-valued IEEE double arithmetic; ``sign(0) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

__all__ = [
    "Lit", "Var", "Neg", "Bin", "Call", "Expr",
    "ExprError", "ParseError", "EvalError", "UnboundVariableError",
    "DomainError", "NonFiniteError",
    "parse", "evaluate", "to_source", "validate_oddness", "compile_symbol",
    "OddnessReport", "FUNCTION_NAMES",
]


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Lit:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Lit, Var, Neg, Bin, Call]

FUNCTION_NAMES = ("sqrt", "tanh", "sign", "abs", "sin", "cos", "exp")


# --------------------------------------------------------------------------
# Errors

class ExprError(Exception):
    """Base class for all expression-language errors."""


class ParseError(ExprError):
    """Malformed expression text.

    Attributes
    ----------
    offset : int
        Byte offset of the offending token in the input.
    expected : str
        Description of what the parser was looking for.
    excerpt : str
        Source excerpt around the offset.
    """

    def __init__(self, offset: int, expected: str, source: str):
        self.offset = offset
        self.expected = expected
        lo = max(0, offset - 12)
        self.excerpt = source[lo:offset + 12]
        super().__init__(
            f"parse error at offset {offset}: expected {expected} "
            f"(near {self.excerpt!r})"
        )


class EvalError(ExprError):
    """Base class for evaluation failures."""


class UnboundVariableError(EvalError):
    pass


class DomainError(EvalError):
    pass


class NonFiniteError(EvalError):
    pass


# --------------------------------------------------------------------------
# Lexer

_OPS = set("+-*/^()")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, offset) triples. Kinds: num, name, op, end."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lexeme = text[i:j]
            if lexeme.count(".") > 1:
                raise ParseError(i, "a well-formed number", text)
            toks.append(("num", lexeme, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(i, "a token", text)
    toks.append(("end", "", n))
    return toks


# --------------------------------------------------------------------------
# Parser (recursive descent)

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, lexeme, off = self.peek()
        if kind != "op" or lexeme != op:
            raise ParseError(off, f"'{op}'", self.text)
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        kind, _, off = self.peek()
        if kind != "end":
            raise ParseError(off, "end of input", self.text)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, lexeme, _ = self.peek()
            if kind == "op" and lexeme in "+-":
                self.advance()
                node = Bin(lexeme, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, lexeme, _ = self.peek()
            if kind == "op" and lexeme in "*/":
                self.advance()
                node = Bin(lexeme, node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        kind, lexeme, _ = self.peek()
        if kind == "op" and lexeme == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, lexeme, _ = self.peek()
        if kind == "op" and lexeme == "^":
            self.advance()
            return Bin("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, lexeme, off = self.advance()
        if kind == "num":
            return Lit(float(lexeme))
        if kind == "name":
            nxt_kind, nxt_lex, _ = self.peek()
            if nxt_kind == "op" and nxt_lex == "(":
                if lexeme not in FUNCTION_NAMES:
                    raise ParseError(off, f"a function name (got {lexeme!r})",
                                     self.text)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(lexeme, arg)
            return Var(lexeme)
        if kind == "op" and lexeme == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(off, "a number, name, or '('", self.text)


def parse(text: str) -> Expr:
    """Parse expression text into an AST; raises ParseError on bad input."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Evaluation

def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def _sqrt(x: float) -> float:
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sqrt": _sqrt,
    "tanh": math.tanh,
    "sign": _sign,
    "abs": abs,
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
}


def evaluate(ast: Expr, k: float, params: Mapping[str, float] | None = None) -> float:
    """Evaluate ``ast`` at wavenumber ``k`` with the given parameter bindings.

    Raises UnboundVariableError, DomainError (sqrt of a negative, division
    by zero, fractional power of a negative) or NonFiniteError.
    """
    env = {"pi": math.pi}
    if params:
        env.update(params)
    env["k"] = k
    result = _eval(ast, env)
    if not math.isfinite(result):
        raise NonFiniteError(f"expression evaluated to {result!r} at k={k!r}")
    return result


def _eval(node: Expr, env: Mapping[str, float]) -> float:
    if isinstance(node, Lit):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Call):
        try:
            return _FUNCTIONS[node.fn](_eval(node.arg, env))
        except OverflowError as exc:
            raise NonFiniteError(f"{node.fn} overflowed") from exc
        except ValueError as exc:
            raise DomainError(f"{node.fn} domain error") from exc
    if isinstance(node, Bin):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0.0:
                raise DomainError("division by zero")
            return a / b
        if node.op == "^":
            try:
                r = math.pow(a, b)
            except (ValueError, OverflowError) as exc:
                raise DomainError(f"invalid power {a!r}^{b!r}") from exc
            if isinstance(r, complex):  # pragma: no cover - math.pow is real
                raise DomainError(f"complex power {a!r}^{b!r}")
            return r
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# Canonical printer

def _prec(node: Expr) -> int:
    if isinstance(node, (Lit, Var, Call)):
        return 5
    if isinstance(node, Bin):
        return {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}[node.op]
    if isinstance(node, Neg):
        return 3
    raise TypeError(node)


def _wrap(node: Expr, minimum: int) -> str:
    src = to_source(node)
    return f"({src})" if _prec(node) < minimum else src


def _lit_source(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_source(node: Expr) -> str:
    """Print an AST so that ``parse(to_source(t))`` is structurally ``t``.

    Negative literals never occur in parsed trees (the parser produces a
    ``Neg`` wrapper), so literals print without a sign.
    """
    if isinstance(node, Lit):
        return _lit_source(abs(node.value)) if node.value < 0 else _lit_source(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, 3)
    if isinstance(node, Bin):
        if node.op in "+-":
            return f"{_wrap(node.left, 1)}{node.op}{_wrap(node.right, 2)}"
        if node.op in "*/":
            return f"{_wrap(node.left, 2)}{node.op}{_wrap(node.right, 3)}"
        # '^' is right-associative and its base must be an atom
        return f"{_wrap(node.left, 5)}^{_wrap(node.right, 3)}"
    raise TypeError(node)


# --------------------------------------------------------------------------
# Oddness validation

@dataclass(frozen=True)
class OddnessReport:
    is_odd: bool
    max_violation: float


def validate_oddness(ast: Expr, params: Mapping[str, float] | None,
                     grid: Sequence[float], tol: float = 1e-10) -> OddnessReport:
    """Check |omega(k) + omega(-k)| <= tol pointwise over a symmetric grid."""
    if len(grid) == 0:
        raise ValueError("grid must be nonempty")
    worst = 0.0
    for k in grid:
        v = abs(evaluate(ast, k, params) + evaluate(ast, -k, params))
        worst = max(worst, v)
    return OddnessReport(is_odd=worst <= tol, max_violation=worst)


def compile_symbol(text: str, params: Mapping[str, float] | None = None,
                   at_zero: float | None = None) -> Callable[[float], float]:
    """Parse ``text`` once and return a callable k -> value.

    ``at_zero``, when given, is returned at k == 0 without evaluating the
    expression there; this is how symbols with a removable singularity at
    the origin (e.g. tanh(k*h)/k) are configured.
    """
    ast = parse(text)
    frozen = dict(params or {})

    def symbol(k: float) -> float:
        if k == 0.0 and at_zero is not None:
            return at_zero
        return evaluate(ast, k, frozen)

    return symbol
