"""Real-argument elliptic integrals and Jacobi elliptic functions.

Everything downstream (period function, action, time reparametrization,
resonance atlas) reduces to the Legendre integrals K, E, Pi and the Jacobi
functions sn, cn, dn with modulus k in [0, 1).  The implementations are
self-contained:

* complete first/second kind via the arithmetic-geometric mean (DLMF 19.8),
* incomplete integrals and the third kind via Carlson symmetric forms
  R_F, R_D, R_J, R_C evaluated with the duplication algorithm,
* sn/cn/dn and the amplitude via the descending Landen/AGM recursion
  (DLMF 22.20(ii)), with the argument reduced modulo the full period 4K so
  the dilated phase stays small.

Argument conventions, fixed once for the whole package:

* the modulus k is passed, never the parameter m = k**2;
* the third kind is ``Pi(n_char, phi, k)`` with *characteristic* n_char < 1
  (circular branch only), complete when phi = pi/2;
* ``*_s`` companions take the sine of the amplitude instead of the amplitude;
* ``jacobi_epsilon(u, k)`` is the second-kind integral along the Jacobi
  argument, int_0^u dn(t, k)^2 dt;
* ``third_kind_lawden(u, a, k)`` is the third kind in Lawden's parameter
  convention, k^2 sn(a) cn(a) dn(a) int_0^u sn(t)^2/(1 - k^2 sn(a)^2 sn(t)^2) dt,
  whose complete version satisfies the zeta identity
  third_kind_lawden(K, a, k) = K(k) * jacobi_epsilon(a, k) - a * E(k).

All functions are pure and safe for concurrent use.  Termination tolerances
are module constants; a PrecisionWarning is emitted instead of silently
degrading when the complementary modulus drops below ``KPRIME_WARN`` or a
characteristic comes within ``CHAR_WARN`` of 1.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

from .errors import DomainError, PrecisionWarning

# Internal termination tolerances.  AGM_TOL is the relative gap at which the
# arithmetic-geometric mean is declared converged; CARLSON_TOL bounds the
# deviation entering the truncated Taylor tail (error ~ tol**6).
AGM_TOL = 1e-14
CARLSON_TOL = 1.0e-3
KPRIME_WARN = 1e-8
CHAR_WARN = 1e-12

_SQRT2_INV = 1.0 / math.sqrt(2.0)


class JacobiTriple(NamedTuple):
    """Values of sn, cn, dn at a common argument and modulus."""

    sn: float
    cn: float
    dn: float


def complementary_modulus(k: float) -> float:
    """k' with k^2 + k'^2 = 1, computed as sqrt((1-k)(1+k)) for accuracy."""
    return math.sqrt((1.0 - k) * (1.0 + k))


def _check_modulus(k: float, allow_one: bool = False) -> None:
    hi_ok = (k <= 1.0) if allow_one else (k < 1.0)
    if not (0.0 <= k and hi_ok) or math.isnan(k):
        rng = "[0, 1]" if allow_one else "[0, 1)"
        raise DomainError(f"modulus k={k!r} outside {rng}")
    kp = complementary_modulus(k) if k < 1.0 else 0.0
    if 0.0 < kp < KPRIME_WARN:
        warnings.warn(
            f"complementary modulus k'={kp:.3e} nearly degenerate; "
            "results may lose accuracy",
            PrecisionWarning,
            stacklevel=3,
        )


def _check_characteristic(n_char: float) -> None:
    if not n_char < 1.0:
        raise DomainError(
            f"characteristic n={n_char!r} >= 1: hyperbolic branch unsupported"
        )
    if 0.0 < 1.0 - n_char < CHAR_WARN:
        warnings.warn(
            f"characteristic n={n_char!r} within {CHAR_WARN:g} of 1; "
            "third-kind integral close to divergence",
            PrecisionWarning,
            stacklevel=3,
        )


# ----------------------------------------------------------------------
# Carlson symmetric forms (duplication algorithm).
# ----------------------------------------------------------------------

def carlson_rc(x: float, y: float) -> float:
    """Degenerate symmetric integral R_C(x, y); x >= 0, y > 0."""
    if x < 0.0 or y <= 0.0:
        raise DomainError(f"carlson_rc domain: x={x!r}, y={y!r}")
    while True:
        lam = 2.0 * math.sqrt(x) * math.sqrt(y) + y
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        ave = (x + 2.0 * y) / 3.0
        s = (y - ave) / ave
        if abs(s) < CARLSON_TOL:
            break
    # 5th-order Taylor tail of the defining series
    return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / math.sqrt(ave)


def carlson_rf(x: float, y: float, z: float) -> float:
    """Symmetric integral of the first kind R_F(x, y, z); at most one of
    the non-negative arguments may vanish."""
    if min(x, y, z) < 0.0 or (x + y) <= 0.0 or (y + z) <= 0.0 or (x + z) <= 0.0:
        raise DomainError(f"carlson_rf domain: ({x!r}, {y!r}, {z!r})")
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < CARLSON_TOL:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / math.sqrt(ave)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Degenerate third-kind integral R_D(x, y, z); z > 0, x + y > 0."""
    if min(x, y) < 0.0 or (x + y) <= 0.0 or z <= 0.0:
        raise DomainError(f"carlson_rd domain: ({x!r}, {y!r}, {z!r})")
    total = 0.0
    fac = 1.0
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        total += fac / (sz * (z + lam))
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        ave = 0.2 * (x + y + 3.0 * z)
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < CARLSON_TOL:
            break
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    tail = 1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee) + dz * (
        ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea)
    )
    return 3.0 * total + fac * tail / (ave * math.sqrt(ave))


def carlson_rj(x: float, y: float, z: float, p: float) -> float:
    """Symmetric integral of the third kind R_J(x, y, z, p) for p > 0."""
    if min(x, y, z) < 0.0 or (x + y) <= 0.0 or (y + z) <= 0.0 or (x + z) <= 0.0 or p <= 0.0:
        raise DomainError(f"carlson_rj domain: ({x!r}, {y!r}, {z!r}, {p!r})")
    total = 0.0
    fac = 1.0
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        alpha = (p * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = p * (p + lam) ** 2
        total += fac * carlson_rc(alpha, beta)
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        ave = 0.2 * (x + y + z + 2.0 * p)
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        dp = (ave - p) / ave
        if max(abs(dx), abs(dy), abs(dz), abs(dp)) < CARLSON_TOL:
            break
    ea = dx * (dy + dz) + dy * dz
    eb = dx * dy * dz
    ec = dp * dp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * dp * (ea - ec)
    tail = (
        1.0
        + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * ee)
        + eb * (1.0 / 6.0 + dp * (-3.0 / 11.0 + dp * 3.0 / 26.0))
        + dp * ea * (1.0 / 6.0 - dp * 3.0 / 22.0)
        - dp * ec / 6.0
    )
    return 3.0 * total + fac * tail / (ave * math.sqrt(ave))


# ----------------------------------------------------------------------
# Complete integrals (AGM).
# ----------------------------------------------------------------------

def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k), 0 <= k < 1."""
    _check_modulus(k)
    a, b = 1.0, complementary_modulus(k)
    while abs(a - b) > AGM_TOL * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def complete_E(k: float) -> float:
    """Complete elliptic integral of the second kind, E(k), 0 <= k <= 1."""
    _check_modulus(k, allow_one=True)
    if k == 1.0:
        return 1.0
    a, b = 1.0, complementary_modulus(k)
    csum = 0.5 * k * k  # 2^(n-1) c_n^2 starting at c_0 = k
    pow2 = 1.0
    while abs(a - b) > AGM_TOL * a:
        c = 0.5 * (a - b)
        csum += pow2 * c * c
        pow2 *= 2.0
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    K = math.pi / (a + b)
    return K * (1.0 - csum)


def complete_Pi(n_char: float, k: float) -> float:
    """Complete elliptic integral of the third kind with characteristic
    n_char < 1 (circular branch), Pi(n, k) = int_0^{pi/2}
    dtheta / ((1 - n sin^2) sqrt(1 - k^2 sin^2))."""
    _check_modulus(k)
    _check_characteristic(n_char)
    kp2 = (1.0 - k) * (1.0 + k)
    rf = carlson_rf(0.0, kp2, 1.0)
    if n_char == 0.0:
        return rf
    return rf + (n_char / 3.0) * carlson_rj(0.0, kp2, 1.0, 1.0 - n_char)


# ----------------------------------------------------------------------
# Incomplete integrals (Carlson forms + quasi-periodic extension).
# ----------------------------------------------------------------------

def _reduce_amplitude(phi: float) -> tuple[int, float]:
    """phi = m*pi + r with r in (-pi/2, pi/2]; returns (m, r)."""
    m = math.floor(phi / math.pi + 0.5)
    return m, phi - m * math.pi


def incomplete_F(phi: float, k: float) -> float:
    """Incomplete first kind F(phi, k) for any real amplitude phi."""
    _check_modulus(k)
    m, r = _reduce_amplitude(phi)
    s = math.sin(r)
    c2 = math.cos(r) ** 2
    val = s * carlson_rf(c2, 1.0 - (k * s) ** 2, 1.0)
    if m == 0:
        return val
    return 2.0 * m * complete_K(k) + val


def incomplete_E(phi: float, k: float) -> float:
    """Incomplete second kind E(phi, k) for any real amplitude phi."""
    _check_modulus(k)
    m, r = _reduce_amplitude(phi)
    s = math.sin(r)
    c2 = math.cos(r) ** 2
    d2 = 1.0 - (k * s) ** 2
    val = s * carlson_rf(c2, d2, 1.0)
    if k != 0.0 and s != 0.0:
        val -= (k * k / 3.0) * s ** 3 * carlson_rd(c2, d2, 1.0)
    if m == 0:
        return val
    return 2.0 * m * complete_E(k) + val


def incomplete_Pi(n_char: float, phi: float, k: float) -> float:
    """Incomplete third kind Pi(n, phi, k), characteristic n < 1."""
    _check_modulus(k)
    _check_characteristic(n_char)
    m, r = _reduce_amplitude(phi)
    s = math.sin(r)
    c2 = math.cos(r) ** 2
    d2 = 1.0 - (k * s) ** 2
    val = s * carlson_rf(c2, d2, 1.0)
    if n_char != 0.0 and s != 0.0:
        val += (n_char / 3.0) * s ** 3 * carlson_rj(c2, d2, 1.0, 1.0 - n_char * s * s)
    if m == 0:
        return val
    return 2.0 * m * complete_Pi(n_char, k) + val


def incomplete_F_s(s: float, k: float) -> float:
    """F in the sine-of-amplitude convention: F(s, k) with s = sin(phi)."""
    if not -1.0 <= s <= 1.0:
        raise DomainError(f"sine of amplitude s={s!r} outside [-1, 1]")
    return incomplete_F(math.asin(s), k)


def incomplete_E_s(s: float, k: float) -> float:
    """E in the sine-of-amplitude convention."""
    if not -1.0 <= s <= 1.0:
        raise DomainError(f"sine of amplitude s={s!r} outside [-1, 1]")
    return incomplete_E(math.asin(s), k)


def incomplete_Pi_s(n_char: float, s: float, k: float) -> float:
    """Third kind in the sine-of-amplitude convention."""
    if not -1.0 <= s <= 1.0:
        raise DomainError(f"sine of amplitude s={s!r} outside [-1, 1]")
    return incomplete_Pi(n_char, math.asin(s), k)


# ----------------------------------------------------------------------
# Jacobi elliptic functions (descending Landen / AGM).
# ----------------------------------------------------------------------

def _am_agm(u: float, k: float) -> float:
    """Jacobi amplitude am(u, k) by the AGM descent; |u| should already be
    reduced to a few periods so the dilated phase 2^N a_N u stays small."""
    a, b = 1.0, complementary_modulus(k)
    a_seq = [a]
    c_seq = [k]
    while abs(c_seq[-1]) > AGM_TOL * a:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    phi = math.ldexp(a_seq[-1], len(a_seq) - 1) * u
    for n in range(len(a_seq) - 1, 0, -1):
        t = c_seq[n] / a_seq[n] * math.sin(phi)
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, t))))
    return phi


def jacobi_am(nu: float, k: float) -> float:
    """Jacobi amplitude am(nu, k) for any real nu (monotone, unbounded)."""
    _check_modulus(k)
    if k == 0.0:
        return nu
    period = 4.0 * complete_K(k)
    wind = math.floor(nu / period)
    return 2.0 * math.pi * wind + _am_agm(nu - period * wind, k)


def jacobi(nu: float, k: float) -> JacobiTriple:
    """Jacobi elliptic functions (sn, cn, dn)(nu, k) for real nu, 0 <= k < 1.

    dn is recovered from dn^2 = 1 - k^2 sn^2 (positive branch; dn >= k' > 0
    for real modulus), which enforces the delta-amplitude identity exactly.
    """
    _check_modulus(k)
    if k == 0.0:
        return JacobiTriple(math.sin(nu), math.cos(nu), 1.0)
    period = 4.0 * complete_K(k)
    r = nu - period * math.floor(nu / period)
    phi = _am_agm(r, k)
    sn = math.sin(phi)
    cn = math.cos(phi)
    dn = math.sqrt(1.0 - (k * sn) ** 2)
    return JacobiTriple(sn, cn, dn)


def jacobi_epsilon(u: float, k: float) -> float:
    """Jacobi epsilon function int_0^u dn(t, k)^2 dt (second kind along the
    Jacobi argument); quasi-periodic with eps(u + 2K) = eps(u) + 2E."""
    _check_modulus(k)
    if k == 0.0:
        return u
    twoK = 2.0 * complete_K(k)
    m = math.floor(u / twoK)
    r = u - twoK * m
    val = incomplete_E(_am_agm(r, k), k)
    if m == 0:
        return val
    return 2.0 * m * complete_E(k) + val


def jacobi_pi(u: float, n_char: float, k: float) -> float:
    """Third-kind integral along the Jacobi argument,
    int_0^u dt / (1 - n_char sn(t, k)^2), characteristic n_char < 1."""
    _check_modulus(k)
    _check_characteristic(n_char)
    if k == 0.0:
        # sn = sin; closed form of the circular integral
        if n_char == 0.0:
            return u
        m, r = _reduce_amplitude(u)
        rt = math.sqrt(1.0 - n_char)
        if r == 0.5 * math.pi:
            val = 0.5 * math.pi / rt
        else:
            val = math.atan(rt * math.tan(r)) / rt
        return val + m * math.pi / rt
    twoK = 2.0 * complete_K(k)
    m = math.floor(u / twoK)
    r = u - twoK * m
    val = incomplete_Pi(n_char, _am_agm(r, k), k)
    if m == 0:
        return val
    return 2.0 * m * complete_Pi(n_char, k) + val


def heuman_lambda(eps: float, k: float) -> float:
    """Heuman's lambda function Lambda_0(eps, k) = (2/pi) * (E(k) F(eps, k')
    + K(k) E(eps, k') - K(k) F(eps, k')); Lambda_0(pi/2, k) = 1 by the
    Legendre relation."""
    _check_modulus(k)
    kp = complementary_modulus(k)
    f_val = incomplete_F(eps, kp)
    e_val = incomplete_E(eps, kp)
    return (2.0 / math.pi) * (complete_E(k) * f_val + complete_K(k) * (e_val - f_val))


def third_kind_lawden(u: float, a: float, k: float) -> float:
    """Third-kind integral in Lawden's parameter convention:
    k^2 sn(a) cn(a) dn(a) int_0^u sn(t)^2 / (1 - k^2 sn(a)^2 sn(t)^2) dt.

    The complete value obeys the Jacobi-zeta identity
    third_kind_lawden(K(k), a, k) = K(k) jacobi_epsilon(a, k) - a E(k).
    """
    _check_modulus(k)
    sn_a, cn_a, dn_a = jacobi(a, k)
    if sn_a == 0.0 or k == 0.0:
        return 0.0
    n = (k * sn_a) ** 2
    # int sn^2/(1 - n sn^2) = (jacobi_pi(u, n) - u)/n, then multiply back
    return (cn_a * dn_a / sn_a) * (jacobi_pi(u, n, k) - u)
