"""Expression language for user-supplied functions of one variable x.

Grammar (EBNF, whitespace insignificant):

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , [ "^" , unary ] ;            (* right associative *)
    atom    = NUMBER | "x" | NAME , "(" , expr , { "," , expr } , ")"
            | "(" , expr , ")" ;
    NUMBER  = digits , [ "." , [digits] ] , [exponent]
            | "." , digits , [exponent] ;

"^" binds tightest; unary minus sits between "^" and "*"/"/", so
"-x^2" parses as -(x^2).  Known names: exp, ln, abs, sin, cos, sqrt
(one argument) and min, max (two arguments).  The language is closed:
no user-defined functions, no variables other than x.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ParseError",
    "UnknownIdentifierError",
    "EvaluationError",
    "Num",
    "Var",
    "Neg",
    "Bin",
    "Call",
    "FunctionSpec",
    "Interval",
    "parse",
    "to_source",
    "evaluate",
    "evaluate_many",
    "power_transform",
]

_FUNCTIONS = {"exp": 1, "ln": 1, "abs": 1, "sin": 1, "cos": 1, "sqrt": 1, "min": 2, "max": 2}


class ParseError(ValueError):
    """Syntax error carrying the byte offset and the expected token set."""

    def __init__(self, message: str, position: int, expected: tuple = ()):
        self.position = position
        self.expected = tuple(sorted(expected))
        suffix = f" at offset {position}"
        if self.expected:
            suffix += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(message + suffix)


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", position,
                         expected=("x",) + tuple(_FUNCTIONS))


class EvaluationError(ValueError):
    """Evaluation produced a non-finite or undefined value at some x."""

    def __init__(self, message: str, x: float):
        self.x = float(x)
        super().__init__(f"{message} at x = {self.x!r}")


# --- AST -------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class FunctionSpec:
    """A parsed expression over x.  Immutable; safe to share."""

    source: str
    ast: object

    def __call__(self, x):
        if np.ndim(x) == 0:
            return evaluate(self, float(x))
        return evaluate_many(self, np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Interval:
    """[a, b] with a < b.  By default also requires 0 <= a; pass
    allow_negative=True to probe intervals left of the origin."""

    a: float
    b: float
    allow_negative: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (self.a < self.b):
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")
        if self.a < 0.0 and not self.allow_negative:
            raise ValueError(
                f"interval [{self.a}, {self.b}] has a < 0; "
                "pass allow_negative=True to override"
            )

    @property
    def width(self) -> float:
        return self.b - self.a


# --- tokenizer -------------------------------------------------------

_NUMBER_START = set("0123456789.")
_OPS = set("+-*/^(),")


def _tokenize(source: str):
    """Yield (kind, text, position); kind in {num, name, op, end}."""
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        start = i
        if c in _NUMBER_START:
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j == start + 1 and source[start] == ".":
                raise ParseError("malformed number", start, expected=("digit",))
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    while k < n and source[k].isdigit():
                        k += 1
                    j = k
            tokens.append(("num", source[start:j], start))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("name", source[start:j], start))
            i = j
        elif c in _OPS:
            tokens.append(("op", c, start))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", i,
                             expected=("number", "name", "operator"))
    tokens.append(("end", "", n))
    return tokens


# --- recursive descent parser ----------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, position = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        raise ParseError(f"expected {op!r}", position, expected=(op,))

    def parse(self):
        node = self.expr()
        kind, text, position = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {text!r}", position,
                             expected=("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Bin(text, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Bin(text, node, self.unary())
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # right associative; exponent may carry a unary minus
            return Bin("^", node, self.unary())
        return node

    def atom(self):
        kind, text, position = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text not in _FUNCTIONS:
                raise UnknownIdentifierError(text, position)
            arity = _FUNCTIONS[text]
            self.expect_op("(")
            args = [self.expr()]
            while True:
                k, t, p = self.peek()
                if k == "op" and t == ",":
                    self.advance()
                    args.append(self.expr())
                else:
                    break
            self.expect_op(")")
            if len(args) != arity:
                raise ParseError(
                    f"{text} takes {arity} argument(s), got {len(args)}",
                    position, expected=(f"{arity} argument(s)",))
            return Call(text, tuple(args))
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {text or 'end of input'!r}", position,
                         expected=("number", "x", "function", "("))


def parse(source: str) -> FunctionSpec:
    """Parse an expression into a FunctionSpec.  Raises ParseError."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0, expected=("expression",))
    return FunctionSpec(source=source, ast=_Parser(source).parse())


# --- serialization ----------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _render(node, parent_prec: int, right_side: bool) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Call):
        return f"{node.fn}({', '.join(_render(a, 0, False) for a in node.args)})"
    if isinstance(node, Neg):
        text = "-" + _render(node.arg, _PREC["neg"], False)
        if parent_prec > _PREC["neg"] or (parent_prec == _PREC["neg"] and right_side):
            return f"({text})"
        return text
    if isinstance(node, Bin):
        prec = _PREC[node.op]
        if node.op == "^":
            # right associative: left child needs parens at equal precedence
            left = _render(node.left, prec + 1, False)
            right = _render(node.right, prec, True)
        else:
            left = _render(node.left, prec, False)
            right = _render(node.right, prec + 1, True)
        text = f"{left} {node.op} {right}"
        if parent_prec > prec:
            return f"({text})"
        return text
    raise TypeError(f"not an AST node: {node!r}")


def to_source(node) -> str:
    """Canonical textual form; parse(to_source(ast)).ast == ast."""
    return _render(node, 0, False)


# --- evaluation -------------------------------------------------------

def _eval_node(node, xs: np.ndarray):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return xs
    if isinstance(node, Neg):
        return -_eval_node(node.arg, xs)
    if isinstance(node, Bin):
        left = _eval_node(node.left, xs)
        right = _eval_node(node.right, xs)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return left / right
        # '^': reject negative base with non-integer exponent rather than
        # silently producing NaN (all bound formulas take powers of
        # absolute values, so this only fires on user mistakes).
        base = np.asarray(left, dtype=float)
        expo = np.asarray(right, dtype=float)
        bad = (base < 0.0) & (expo != np.floor(expo))
        if np.any(bad):
            idx = int(np.argmax(np.broadcast_to(bad, xs.shape)))
            raise EvaluationError(
                "negative base raised to non-integer exponent", float(xs.flat[idx]))
        return np.power(base, expo)
    if isinstance(node, Call):
        args = [_eval_node(a, xs) for a in node.args]
        if node.fn == "exp":
            return np.exp(args[0])
        if node.fn == "ln":
            return np.log(args[0])
        if node.fn == "abs":
            return np.abs(args[0])
        if node.fn == "sin":
            return np.sin(args[0])
        if node.fn == "cos":
            return np.cos(args[0])
        if node.fn == "sqrt":
            return np.sqrt(args[0])
        if node.fn == "min":
            return np.minimum(args[0], args[1])
        return np.maximum(args[0], args[1])
    raise TypeError(f"not an AST node: {node!r}")


def evaluate_many(f: FunctionSpec, xs: np.ndarray) -> np.ndarray:
    """Evaluate f at every point of xs.  Non-finite results raise
    EvaluationError carrying the first offending x."""
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        values = _eval_node(f.ast, xs)
    values = np.broadcast_to(np.asarray(values, dtype=float), xs.shape).copy()
    finite = np.isfinite(values)
    if not finite.all():
        idx = int(np.argmin(finite))
        raise EvaluationError(
            f"{f.source!r} evaluated to a non-finite value", float(xs.flat[idx]))
    return values


def evaluate(f: FunctionSpec, x: float) -> float:
    """Evaluate f at a single point."""
    return float(evaluate_many(f, np.asarray([x], dtype=float))[0])


def power_transform(f: FunctionSpec, s: float) -> FunctionSpec:
    """Return a FunctionSpec computing |f(x)|^s (plain |f(x)| when s == 1).

    Requires s >= 1, matching the exponents the bound hypotheses use.
    """
    s = float(s)
    if not s >= 1.0:
        raise ValueError(f"power_transform needs s >= 1, got {s}")
    inner = Call("abs", (f.ast,))
    ast = inner if s == 1.0 else Bin("^", inner, Num(s))
    return FunctionSpec(source=to_source(ast), ast=ast)
