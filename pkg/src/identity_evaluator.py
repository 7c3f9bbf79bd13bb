"""
HeckMort - Identity Evaluator
Turns identity ASTs into truncated series by dispatching every call to the engine.

Each node compiles to a builder precision -> QSeries so products, quotients and powers can
ask their operands for the extra precision that negative q-orders consume.
"""

from fractions import Fraction
from typing import Callable, Dict, Tuple

from appell import AppellSpec, appell_m
from config_manager import RunConfig
from engine_errors import ArgumentError, HeckMortError, Position
from eulerian import builtin_series, g_universal
from hecke import HeckeParams, f_abc
from identity_parser import (
    BinaryOp,
    Call,
    Monomial,
    Neg,
    Node,
    Number,
    Power,
)
from lattice_sums import EnumerationLimits
from logging_setup import get_logger
from master_formula import MasterParams, Specialization, g_abc, theta_np
from series_core import QSeries, SeriesBuilder, SignedMonomial, product_at, quotient_at
from theta import J, Jbar, Jm, ThetaSpec, ThetaVariant, theta_j

logger = get_logger(__name__)

CallHandler = Callable[[Tuple, Fraction, EnumerationLimits], QSeries]


def monomial_value(node: Monomial) -> SignedMonomial:
    return SignedMonomial.q(node.exp, node.coeff)


def _monos(groups: Tuple, index: int) -> Tuple[SignedMonomial, ...]:
    return tuple(monomial_value(m) for m in groups[index])


# one handler per function name of the identity language
_HANDLERS: Dict[str, CallHandler] = {
    "J": lambda g, P, _: J(g[0][0], g[0][1], ThetaVariant.PLAIN, P),
    "Jbar": lambda g, P, _: Jbar(g[0][0], g[0][1], P),
    "Jm": lambda g, P, _: Jm(g[0][0], P),
    "j": lambda g, P, _: theta_j(ThetaSpec(*_monos(g, 0), *_monos(g, 1)), P),
    "AL": lambda g, P, _: appell_m(AppellSpec(*_monos(g, 0), *_monos(g, 1), *_monos(g, 2)), P),
    "f": lambda g, P, limits: f_abc(HeckeParams(*g[0]), *_monos(g, 1), P, limits),
    "gsum": lambda g, P, _: g_abc(*g[0], *_monos(g, 1), P),
    "thetaNP": lambda g, P, _: theta_np(MasterParams(*g[0]), Specialization(*_monos(g, 1)), P),
    "guniv": lambda g, P, _: g_universal(*_monos(g, 0), *_monos(g, 1), P),
    "builtin": lambda g, P, _: builtin_series(g[0][0], P),
}


class Evaluator:
    """Compiles AST nodes into series builders for one run configuration"""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.limits = EnumerationLimits(cfg.patience, cfg.max_steps)

    def compile(self, node: Node) -> SeriesBuilder:
        if isinstance(node, Number):
            return lambda P: QSeries.constant(node.value, P)
        if isinstance(node, Monomial):
            m = monomial_value(node)
            return lambda P: QSeries.monomial(m, P)
        if isinstance(node, Neg):
            inner = self.compile(node.operand)
            return lambda P: -inner(P)
        if isinstance(node, BinaryOp):
            return self._binary(node)
        if isinstance(node, Power):
            return self._power(node)
        if isinstance(node, Call):
            return self._call(node)
        raise TypeError(f"Not an identity AST node: {node!r}")

    def _binary(self, node: BinaryOp) -> SeriesBuilder:
        left = self.compile(node.left)
        right = self.compile(node.right)
        if node.op == "+":
            return lambda P: left(P) + right(P)
        if node.op == "-":
            return lambda P: left(P) - right(P)
        if node.op == "*":
            return lambda P: product_at(P, [left, right])
        return lambda P: _tagged(node.position, lambda: quotient_at(P, left, right))

    def _power(self, node: Power) -> SeriesBuilder:
        base = self.compile(node.base)
        k = node.exponent
        if k == 0:
            return lambda P: QSeries.one(P)

        def positive(P: Fraction, k: int = abs(k)) -> QSeries:
            first = base(P)
            if first.is_empty:
                return QSeries.zero(P)
            # s^k loses (k-1) * ord(s) of precision
            working = P - (k - 1) * first.q_order
            series = base(working) if working > first.precision else first
            return (series ** k).truncate(P)

        if k > 0:
            return positive
        return lambda P: _tagged(
            node.position, lambda: quotient_at(P, lambda W: QSeries.one(W), positive)
        )

    def _call(self, node: Call) -> SeriesBuilder:
        handler = _HANDLERS[node.name]

        def build(P: Fraction) -> QSeries:
            try:
                return handler(node.groups, P, self.limits)
            except HeckMortError as e:
                raise e.tagged(node.position)
            except ValueError as e:
                raise ArgumentError(f"{node.name}: {e}", node.position) from e

        return build

    def evaluate(self, node: Node) -> QSeries:
        return self.compile(node)(Fraction(self.cfg.order))


def _tagged(position: Position, compute: Callable[[], QSeries]) -> QSeries:
    try:
        return compute()
    except HeckMortError as e:
        raise e.tagged(position)


def evaluate(ast: Node, cfg: RunConfig) -> QSeries:
    """The series of an expression AST below q^order"""
    series = Evaluator(cfg).evaluate(ast)
    logger.debug(f"Evaluated expression to {len(series)} terms below q^{cfg.order}")
    return series
