"""Expression trees for objective functions over production vectors.

Objectives map a vector of integer production counts to real rewards. They
are built from a small set of elementary primitives (linear/polynomial terms,
logarithms, logistic and Gaussian curves, sinusoids, floor/ceiling) so that
problem files can encode closed-form objective functions and generators can
sample new ones. An :class:`ObjectiveSet` clamps every component at zero, so
evaluated objective vectors are always non-negative.

Evaluation broadcasts: a node evaluates against a single length-``d``
production vector or against an ``(m, d)`` batch, returning a scalar or a
length-``m`` array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityError,
    DimensionMismatch,
    NonFiniteConstant,
    UnknownPrimitive,
)

__all__ = [
    "Expr",
    "Const",
    "Prod",
    "Add",
    "Sub",
    "Mul",
    "Neg",
    "Min",
    "Max",
    "Power",
    "Log",
    "Exp",
    "Sin",
    "Logistic",
    "Gaussian",
    "Floor",
    "Ceil",
    "Clamp",
    "ObjectiveSet",
    "evaluate_objectives",
    "parse_expression",
    "expression_to_node",
]


class Expr:
    """Base class for expression nodes. Subclasses are immutable."""

    def evaluate(self, production):
        raise NotImplementedError

    def production_indices(self) -> frozenset[int]:
        """Indices of the production components this expression reads."""
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def evaluate(self, production):
        return self.value

    def production_indices(self):
        return frozenset()


@dataclass(frozen=True)
class Prod(Expr):
    """The ``index``-th component of the production vector."""

    index: int

    def evaluate(self, production):
        return production[..., self.index]

    def production_indices(self):
        return frozenset({self.index})


@dataclass(frozen=True)
class _Nary(Expr):
    args: tuple[Expr, ...]

    def production_indices(self):
        return frozenset().union(*(a.production_indices() for a in self.args))


class Add(_Nary):
    def evaluate(self, production):
        total = self.args[0].evaluate(production)
        for arg in self.args[1:]:
            total = total + arg.evaluate(production)
        return total


class Mul(_Nary):
    def evaluate(self, production):
        total = self.args[0].evaluate(production)
        for arg in self.args[1:]:
            total = total * arg.evaluate(production)
        return total


class Min(_Nary):
    def evaluate(self, production):
        best = self.args[0].evaluate(production)
        for arg in self.args[1:]:
            best = np.minimum(best, arg.evaluate(production))
        return best


class Max(_Nary):
    def evaluate(self, production):
        best = self.args[0].evaluate(production)
        for arg in self.args[1:]:
            best = np.maximum(best, arg.evaluate(production))
        return best


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def evaluate(self, production):
        return self.left.evaluate(production) - self.right.evaluate(production)

    def production_indices(self):
        return self.left.production_indices() | self.right.production_indices()


@dataclass(frozen=True)
class _Unary(Expr):
    arg: Expr

    def production_indices(self):
        return self.arg.production_indices()


class Neg(_Unary):
    def evaluate(self, production):
        return -self.arg.evaluate(production)


class Exp(_Unary):
    def evaluate(self, production):
        return np.exp(self.arg.evaluate(production))


class Floor(_Unary):
    def evaluate(self, production):
        return np.floor(self.arg.evaluate(production))


class Ceil(_Unary):
    def evaluate(self, production):
        return np.ceil(self.arg.evaluate(production))


@dataclass(frozen=True)
class Power(_Unary):
    exponent: float = 2.0

    def evaluate(self, production):
        return np.power(self.arg.evaluate(production), self.exponent)


@dataclass(frozen=True)
class Log(_Unary):
    """Natural logarithm of ``arg + offset``.

    The offset absorbs the small positive epsilon encoded problems use to
    keep the logarithm finite at zero production.
    """

    offset: float = 1.0

    def evaluate(self, production):
        return np.log(self.arg.evaluate(production) + self.offset)


@dataclass(frozen=True)
class Sin(_Unary):
    """``sin(frequency * arg + phase)``."""

    frequency: float = 1.0
    phase: float = 0.0

    def evaluate(self, production):
        return np.sin(self.frequency * self.arg.evaluate(production) + self.phase)


@dataclass(frozen=True)
class Logistic(_Unary):
    """``amplitude / (1 + exp(slope * (arg - center)))``.

    With a positive slope this decreases in ``arg``; flip the slope's sign
    for an increasing sigmoid. Bounded by ``amplitude`` so it never overflows.
    """

    amplitude: float = 1.0
    slope: float = 1.0
    center: float = 0.0

    def evaluate(self, production):
        z = self.slope * (self.arg.evaluate(production) - self.center)
        # exp() overflows float64 past ~709; the limit value is exactly 0.
        z = np.minimum(z, 700.0)
        return self.amplitude / (1.0 + np.exp(z))


@dataclass(frozen=True)
class Gaussian(_Unary):
    """``amplitude * exp(-width * (arg - center)^2)``."""

    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0

    def evaluate(self, production):
        d = self.arg.evaluate(production) - self.center
        return self.amplitude * np.exp(-self.width * d * d)


@dataclass(frozen=True)
class Clamp(_Unary):
    lo: float = 0.0
    hi: float = 1.0

    def evaluate(self, production):
        return np.clip(self.arg.evaluate(production), self.lo, self.hi)


@dataclass(frozen=True)
class ObjectiveSet:
    """A fixed tuple of objective expressions over ``num_inputs`` productions.

    Evaluation clamps every component at zero, so objective vectors are
    non-negative by construction.
    """

    expressions: tuple[Expr, ...]
    num_inputs: int

    def __post_init__(self):
        object.__setattr__(self, "expressions", tuple(self.expressions))

    @property
    def num_objectives(self) -> int:
        return len(self.expressions)

    def evaluate(self, production) -> np.ndarray:
        """Objective vector for one production vector, clamped at zero."""
        p = np.asarray(production, dtype=np.float64)
        if p.ndim != 1 or p.shape[0] != self.num_inputs:
            raise DimensionMismatch(
                f"expected a production vector of length {self.num_inputs}, "
                f"got shape {p.shape}"
            )
        raw = np.array([expr.evaluate(p) for expr in self.expressions], dtype=np.float64)
        return np.maximum(raw, 0.0)

    def evaluate_many(self, productions) -> np.ndarray:
        """Objective matrix, one row per production vector in an (m, d) batch."""
        p = np.asarray(productions, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != self.num_inputs:
            raise DimensionMismatch(
                f"expected an (m, {self.num_inputs}) production batch, got shape {p.shape}"
            )
        cols = [np.broadcast_to(expr.evaluate(p), p.shape[:1]) for expr in self.expressions]
        return np.maximum(np.stack(cols, axis=1), 0.0)


def evaluate_objectives(production, objectives: ObjectiveSet) -> np.ndarray:
    """Evaluate an objective set at one production vector (non-negative output)."""
    return objectives.evaluate(production)


# --- node (de)serialization --------------------------------------------------
#
# One canonical document form per primitive. N-ary nodes carry "args", unary
# nodes carry "arg", and numeric parameters sit beside the operands.

_NARY_OPS = {"add": Add, "mul": Mul, "min": Min, "max": Max}
_PLAIN_UNARY_OPS = {"neg": Neg, "exp": Exp, "floor": Floor, "ceil": Ceil}
_PARAM_UNARY_OPS: dict[str, tuple[type, tuple[str, ...]]] = {
    "pow": (Power, ("exponent",)),
    "log": (Log, ("offset",)),
    "sin": (Sin, ("frequency", "phase")),
    "logistic": (Logistic, ("amplitude", "slope", "center")),
    "gaussian": (Gaussian, ("amplitude", "width", "center")),
    "clamp": (Clamp, ("lo", "hi")),
}


def _finite_number(value, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ArityError(f"{context} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteConstant(f"{context} must be finite, got {value!r}")
    return value


def parse_expression(node) -> Expr:
    """Build an expression tree from its document form.

    Round-trips with :func:`expression_to_node`:
    ``expression_to_node(parse_expression(x)) == x`` for canonical nodes.
    """
    if not isinstance(node, dict) or "op" not in node:
        raise UnknownPrimitive(f"expression node must be a mapping with an 'op' field, got {node!r}")
    op = node["op"]

    if op == "const":
        if set(node) != {"op", "value"}:
            raise ArityError(f"'const' takes exactly one 'value' field, got {sorted(node)}")
        return Const(_finite_number(node["value"], "'const' value"))

    if op == "prod":
        if set(node) != {"op", "index"}:
            raise ArityError(f"'prod' takes exactly one 'index' field, got {sorted(node)}")
        index = node["index"]
        if isinstance(index, bool) or not isinstance(index, int) or index < 0:
            raise ArityError(f"'prod' index must be a non-negative integer, got {index!r}")
        return Prod(index)

    if op in _NARY_OPS:
        args = node.get("args")
        if set(node) != {"op", "args"} or not isinstance(args, list) or len(args) < 2:
            raise ArityError(f"'{op}' takes an 'args' list of at least two nodes")
        return _NARY_OPS[op](tuple(parse_expression(a) for a in args))

    if op == "sub":
        args = node.get("args")
        if set(node) != {"op", "args"} or not isinstance(args, list) or len(args) != 2:
            raise ArityError("'sub' takes an 'args' list of exactly two nodes")
        return Sub(parse_expression(args[0]), parse_expression(args[1]))

    if op in _PLAIN_UNARY_OPS:
        if set(node) != {"op", "arg"}:
            raise ArityError(f"'{op}' takes exactly one 'arg' node")
        return _PLAIN_UNARY_OPS[op](parse_expression(node["arg"]))

    if op in _PARAM_UNARY_OPS:
        cls, params = _PARAM_UNARY_OPS[op]
        if set(node) != {"op", "arg", *params}:
            raise ArityError(f"'{op}' takes 'arg' plus parameters {list(params)}, got {sorted(node)}")
        kwargs = {name: _finite_number(node[name], f"'{op}' {name}") for name in params}
        return cls(parse_expression(node["arg"]), **kwargs)

    raise UnknownPrimitive(f"unknown expression primitive {op!r}")


def expression_to_node(expr: Expr) -> dict:
    """Serialize an expression tree to its canonical document form."""
    if isinstance(expr, Const):
        return {"op": "const", "value": expr.value}
    if isinstance(expr, Prod):
        return {"op": "prod", "index": expr.index}
    for op, cls in _NARY_OPS.items():
        if type(expr) is cls:
            return {"op": op, "args": [expression_to_node(a) for a in expr.args]}
    if isinstance(expr, Sub):
        return {"op": "sub", "args": [expression_to_node(expr.left), expression_to_node(expr.right)]}
    for op, cls in _PLAIN_UNARY_OPS.items():
        if type(expr) is cls:
            return {"op": op, "arg": expression_to_node(expr.arg)}
    for op, (cls, params) in _PARAM_UNARY_OPS.items():
        if type(expr) is cls:
            node = {"op": op}
            node.update({name: getattr(expr, name) for name in params})
            node["arg"] = expression_to_node(expr.arg)
            return node
    raise TypeError(f"not an expression node: {expr!r}")
