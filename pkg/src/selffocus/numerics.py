"""Scalar root finding and finite differences.

The solver is a safeguarded bisection: each step tries a secant point and
falls back to the midpoint whenever the secant candidate leaves the bracket
or the previous step failed to halve it.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "Bracket",
    "RootResult",
    "NumericsError",
    "NoSignChangeError",
    "NonFiniteError",
    "IterationLimitError",
    "ExpansionLimitError",
    "find_root",
    "expand_bracket",
    "central_difference",
    "DEFAULT_REL_TOL",
    "MAX_ITERATIONS",
    "MAX_DOUBLINGS",
]

DEFAULT_REL_TOL = 1e-12
MAX_ITERATIONS = 200
MAX_DOUBLINGS = 64


class NumericsError(ArithmeticError):
    """Base class for solver failures."""


class NoSignChangeError(NumericsError):
    pass


class NonFiniteError(NumericsError):
    pass


class IterationLimitError(NumericsError):
    pass


class ExpansionLimitError(NumericsError):
    pass


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo!r}, {self.hi!r}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def _checked(f, x):
    y = f(x)
    if not cmath.isfinite(y):
        raise NonFiniteError(f"function returned {y!r} at x={x!r}")
    return y


def find_root(
    f: Callable[[float], float],
    bracket: Bracket,
    rel_tol: float = DEFAULT_REL_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> RootResult:
    """Locate a sign change of ``f`` inside ``bracket``.

    Stops once ``|f(x)| <= rel_tol * max(|f(lo)|, |f(hi)|)`` and the bracket
    width is ``<= rel_tol * max(1, |x|)``. Both conditions must hold.

    Raises:
        NoSignChangeError: f(lo) and f(hi) have the same strict sign.
        NonFiniteError: f evaluated to inf or nan.
        IterationLimitError: tolerances not reached within ``max_iter`` steps.
    """
    lo, hi = float(bracket.lo), float(bracket.hi)
    f_lo, f_hi = _checked(f, lo), _checked(f, hi)
    if f_lo * f_hi > 0:
        raise NoSignChangeError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}"
        )
    scale = max(abs(f_lo), abs(f_hi))
    f_tol = rel_tol * scale
    if f_lo == 0:
        return RootResult(lo, 0.0, 0)
    if f_hi == 0:
        return RootResult(hi, 0.0, 0)

    # best-so-far point, used for the residual test
    x_best, f_best = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    force_bisect = False
    for it in range(1, max_iter + 1):
        width = hi - lo
        x = lo - f_lo * width / (f_hi - f_lo)
        if force_bisect or not (lo < x < hi):
            x = lo + 0.5 * width
        fx = _checked(f, x)
        if abs(fx) <= abs(f_best):
            x_best, f_best = x, fx
        if fx == 0:
            return RootResult(x, 0.0, it)
        if (fx < 0) == (f_lo < 0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx
        force_bisect = (hi - lo) > 0.5 * width
        if abs(f_best) <= f_tol and (hi - lo) <= rel_tol * max(1.0, abs(x_best)):
            return RootResult(x_best, f_best, it)
        if hi - lo <= 0 or not (lo < lo + 0.5 * (hi - lo) < hi):
            # bracket collapsed to adjacent floats
            if abs(f_best) <= f_tol:
                return RootResult(x_best, f_best, it)
            break
    raise IterationLimitError(
        f"root not converged after {max_iter} iterations; bracket [{lo!r}, {hi!r}], "
        f"|f|={abs(f_best)!r} vs tolerance {f_tol!r}"
    )


def expand_bracket(f: Callable[[float], float], seed: float) -> Bracket:
    """Grow ``[0, seed]`` by doubling until ``f`` changes sign.

    Each failed interval becomes the left edge of the next one, so the
    returned bracket is ``[seed * 2**(j-1), seed * 2**j]`` (or ``[0, seed]``).

    >>> expand_bracket(lambda x: x - 5.0, 1.0)
    Bracket(lo=4.0, hi=8.0)
    """
    if not seed > 0:
        raise ValueError(f"seed must be positive, got {seed!r}")
    lo, hi = 0.0, float(seed)
    f_lo = _checked(f, lo)
    for _ in range(MAX_DOUBLINGS + 1):
        f_hi = _checked(f, hi)
        if f_lo * f_hi <= 0:
            return Bracket(lo, hi)
        lo, f_lo = hi, f_hi
        hi *= 2.0
    raise ExpansionLimitError(
        f"no sign change found after {MAX_DOUBLINGS} doublings from seed {seed!r}"
    )


def central_difference(f: Callable, x: float, h: float):
    """Second-order central difference ``(f(x+h) - f(x-h)) / 2h``.

    ``f`` may be complex valued; the result then is complex too.
    """
    if not h > 0:
        raise ValueError(f"step must be positive, got {h!r}")
    d = (_checked(f, x + h) - _checked(f, x - h)) / (2.0 * h)
    if not cmath.isfinite(d):
        raise NonFiniteError(f"derivative estimate {d!r} at x={x!r}")
    return d

