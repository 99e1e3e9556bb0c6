"""Bracketed scalar root finding for monotone functions.

Bisection guarantees progress on the bracket; a secant step is attempted
first and accepted whenever it lands strictly inside the current bracket.
This is enough for every inversion in the package (the period function and
the time reparametrization are strictly monotone on their domains).
"""

from __future__ import annotations

from typing import Callable

from .errors import ConvergenceError


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-14,
    ftol: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Root of f on [lo, hi]; f(lo) and f(hi) must have opposite signs.

    Terminates when the bracket width drops below ``xtol`` (absolute,
    plus a relative floor at machine precision) or |f| <= ftol.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ConvergenceError(f"root not bracketed on [{lo}, {hi}]")
    for it in range(max_iter):
        # secant proposal on even iterations, guaranteed bisection on odd
        # ones so the bracket width halves at least every two steps
        x = hi - fhi * (hi - lo) / (fhi - flo)
        if it % 2 == 1 or not (lo < x < hi):
            x = 0.5 * (lo + hi)
        fx = f(x)
        if fx == 0.0 or (ftol > 0.0 and abs(fx) <= ftol):
            return x
        if (fx > 0.0) == (flo > 0.0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        if hi - lo <= xtol + 4e-16 * max(abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations; bracket [{lo}, {hi}]"
    )
