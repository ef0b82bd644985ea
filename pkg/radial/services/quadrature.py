"""Adaptive Simpson quadrature and a dyadic tail integrator with divergence detection."""

import logging
import math
from dataclasses import dataclass
from typing import Callable

from radial.exceptions import InconclusiveTailError, QuadratureDivergenceError, RadialCapacityError

logger = logging.getLogger(__name__)

ABS_TOL = 1e-12
REL_TOL = 1e-10
MAX_DEPTH = 48

DIVERGENCE_RATIO = 0.99
DIVERGENCE_BLOCKS = 20
AGREEMENT_BLOCKS = 3
MAX_TAIL_BLOCKS = 400


@dataclass(frozen=True)
class QuadratureResult:
    """Integral estimate with its accumulated error indicator.

    ``divergent`` results carry ``value = inf``. ``converged`` is False when
    some subinterval hit the depth limit.
    """

    value: float
    error: float
    evaluations: int
    converged: bool = True
    divergent: bool = False


def _evaluate(func: Callable[[float], float], x: float) -> float:
    value = float(func(x))
    if not math.isfinite(value):
        raise QuadratureDivergenceError(f"Integrand is not finite at x = {x:.17g}.")
    return value


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    max_depth: int = MAX_DEPTH,
) -> QuadratureResult:
    """Integrate ``func`` over ``[a, b]`` by interval-halving Simpson with Richardson correction.

    A subinterval is accepted when the two-panel and one-panel estimates differ
    by at most ``15 * tol``, where ``tol`` starts at ``max(abs_tol, rel_tol *
    |first estimate|)`` and halves with every split.

    Raises:
        QuadratureDivergenceError: If the integrand is not finite somewhere it is sampled.
    """
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    fa, fb = _evaluate(func, a), _evaluate(func, b)
    m = 0.5 * (a + b)
    fm = _evaluate(func, m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    evaluations = 3
    tolerance = max(abs_tol, rel_tol * abs(whole))

    total = 0.0
    error = 0.0
    converged = True
    stack = [(a, b, fa, fm, fb, whole, tolerance, 0)]
    while stack:
        left_end, right_end, f_left, f_mid, f_right, estimate, tol, depth = stack.pop()
        mid = 0.5 * (left_end + right_end)
        f_lm = _evaluate(func, 0.5 * (left_end + mid))
        f_rm = _evaluate(func, 0.5 * (mid + right_end))
        evaluations += 2
        left = (mid - left_end) / 6.0 * (f_left + 4.0 * f_lm + f_mid)
        right = (right_end - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_right)
        delta = left + right - estimate
        if abs(delta) <= 15.0 * tol or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15.0 * tol:
                converged = False
            total += left + right + delta / 15.0
            error += abs(delta) / 15.0
        else:
            stack.append((left_end, mid, f_left, f_lm, f_mid, left, 0.5 * tol, depth + 1))
            stack.append((mid, right_end, f_mid, f_rm, f_right, right, 0.5 * tol, depth + 1))

    if not converged:
        logger.warning("Adaptive Simpson on [%g, %g] hit the depth limit %d", a, b, max_depth)
    return QuadratureResult(sign * total, error, evaluations, converged)


def tail_integral(
    func: Callable[[float], float],
    start: float,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
) -> QuadratureResult:
    """Integrate ``func`` over ``[start, inf)`` block by block.

    Block ``k`` is ``[2^k start, 2^(k+1) start]``, i.e. the dyadic block
    ``x in [1 - 2^-k, 1 - 2^-(k+1)]`` of the substitution ``s = start/(1 - x)``.
    With block ratio ``q < 0.99`` the remaining tail is estimated as
    ``block * q/(1 - q)``; the integral is accepted once the extrapolated sums
    of three consecutive blocks agree within tolerance. Twenty consecutive
    blocks with ``q >= 0.99`` declare divergence.

    Raises:
        InconclusiveTailError: If neither happens within the block budget.
    """
    if start <= 0:
        raise RadialCapacityError("Tail integration needs a positive start.")

    total = 0.0
    error = 0.0
    evaluations = 0
    converged = True
    previous_block = None
    previous_extrapolation = None
    slow_blocks = 0
    agreeing = 0
    left = start
    for _ in range(MAX_TAIL_BLOCKS):
        right = 2.0 * left
        block = adaptive_simpson(func, left, right, abs_tol, rel_tol)
        total += block.value
        error += block.error
        evaluations += block.evaluations
        converged = converged and block.converged
        left = right

        if block.value == 0.0:
            return QuadratureResult(total, error, evaluations, converged)
        if previous_block is None or previous_block == 0.0:
            previous_block = block.value
            continue

        ratio = block.value / previous_block
        previous_block = block.value
        if ratio >= DIVERGENCE_RATIO:
            slow_blocks += 1
            agreeing = 0
            previous_extrapolation = None
            if slow_blocks >= DIVERGENCE_BLOCKS:
                logger.debug("Tail integral diverges: %d blocks with ratio >= %g", slow_blocks, DIVERGENCE_RATIO)
                return QuadratureResult(math.inf, math.inf, evaluations, converged, divergent=True)
            continue

        slow_blocks = 0
        remainder = block.value * ratio / (1.0 - ratio)
        extrapolated = total + remainder
        tolerance = max(abs_tol, rel_tol * abs(extrapolated))
        spread = abs(remainder) if previous_extrapolation is None else abs(extrapolated - previous_extrapolation)
        agreeing = agreeing + 1 if spread <= tolerance else 0
        previous_extrapolation = extrapolated
        if agreeing >= AGREEMENT_BLOCKS - 1 or abs(remainder) <= tolerance:
            return QuadratureResult(extrapolated, error + min(spread, abs(remainder)), evaluations, converged)

    logger.warning("Tail test undecided after %d dyadic blocks from %g", MAX_TAIL_BLOCKS, start)
    raise InconclusiveTailError(
        f"Cannot decide convergence of the tail integral from {start:g} within {MAX_TAIL_BLOCKS} blocks."
    )
