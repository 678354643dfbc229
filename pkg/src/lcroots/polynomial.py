"""Monic polynomials over the complex field.

A degree-n polynomial is stored as the coefficient tuple (C1, ..., Cn) of

    p(z) = z**n + C1 z**(n-1) + ... + C(n-1) z + Cn

i.e. the leading coefficient is implicit. Alongside construction and
evaluation this module carries the variable-shift identity, a quartic solver
built on the resolvent cubic, and a self-contained simultaneous root finder
used as the independent reference ("oracle") by everything else.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

_TAU = 2.0 * math.pi
# fixed irrational angular offset for oracle start points, keeps the start
# configuration away from real-axis symmetries
_ORACLE_OFFSET = math.sqrt(2.0)


@dataclass(frozen=True)
class MonicPolynomial:
    """Coefficients (C1, ..., Cn) of a monic degree-n polynomial, n >= 1."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("polynomial needs at least one coefficient (degree >= 1)")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def fixed_point(self) -> complex:
        """The line anchor P1 = -C1/2 shared by the whole method."""
        return -0.5 * self.coeffs[0]


@dataclass(frozen=True)
class RootSet:
    """Roots paired with their theta angles (None where the angle is undefined)."""

    roots: tuple[complex, ...]
    theta_roots: tuple[float | None, ...]


def from_roots(roots) -> MonicPolynomial:
    """Monic polynomial with the given roots, by synthetic multiplication."""
    roots = [complex(r) for r in roots]
    if not roots:
        raise ValueError("at least one root required")
    # poly holds (1, C1, ..., Ck) for the product built so far
    poly = [1.0 + 0.0j]
    for r in roots:
        poly.append(0.0 + 0.0j)
        for i in range(len(poly) - 1, 0, -1):
            poly[i] = poly[i] - r * poly[i - 1]
    return MonicPolynomial(tuple(poly[1:]))


def evaluate(p: MonicPolynomial, z: complex) -> complex:
    """Horner evaluation of p at z."""
    acc = 1.0 + 0.0j
    for c in p.coeffs:
        acc = acc * z + c
    return acc


def _refine_root(p: MonicPolynomial, z: complex, steps: int = 16) -> complex:
    """Newton-polish an approximate root of p, keeping the best iterate."""
    n = p.degree
    # derivative coefficients: n, (n-1)C1, ..., 1*C_{n-1}
    dcoeffs = (complex(n),) + tuple((n - k) * c for k, c in enumerate(p.coeffs[:-1], start=1))
    best = z
    best_res = abs(evaluate(p, z))
    for _ in range(steps):
        dv = 0.0 + 0.0j
        for c in dcoeffs:
            dv = dv * z + c
        if dv == 0:
            break
        z = z - evaluate(p, z) / dv
        res = abs(evaluate(p, z))
        if res < best_res:
            best, best_res = z, res
            if res == 0.0:
                break
        else:
            break
    return best


def theta_root(p: MonicPolynomial, root: complex) -> float:
    """Angle in [-pi, pi) of the ray from the fixed point P1 to ``root``.

    Raises
    ------
    ValueError
        If the root coincides with the fixed point (no ray direction).
    """
    w = root - p.fixed_point
    if w == 0:
        raise ValueError("root coincides with fixed point")
    th = math.atan2(w.imag, w.real)
    if th == math.pi:
        th = -math.pi
    return th


def shift_variable(p: MonicPolynomial, a: complex) -> MonicPolynomial:
    """Coefficients of q(z) = p(z - a); the roots of q are those of p plus a.

    D_k = sum_{i=0}^{k} binom(n-k+i, i) * (-a)^i * C_{k-i}, with C_0 = 1.
    """
    a = complex(a)
    n = p.degree
    c = (1.0 + 0.0j,) + p.coeffs
    na = -a
    out = []
    for k in range(1, n + 1):
        s = 0.0 + 0.0j
        for i in range(k + 1):
            s += math.comb(n - k + i, i) * (na ** i) * c[k - i]
        out.append(s)
    return MonicPolynomial(tuple(out))


def oracle_roots(p: MonicPolynomial, max_iterations: int = 512) -> RootSet:
    """All n roots by deterministic simultaneous (Weierstrass) iteration.

    Start points sit on a circle of radius 1 + max|C_k| with a fixed
    irrational angular offset, so repeated calls are bit-identical. Converged
    when every residual |p(r_j)| <= 1e-10 * (1 + max|C_k|).

    Raises
    ------
    ArithmeticError
        If the residual target is not met; the message carries the
        best-so-far roots.
    """
    n = p.degree
    cmax = max(abs(c) for c in p.coeffs)
    radius = 1.0 + cmax
    tol = 1e-10 * (1.0 + cmax)
    z = [radius * cmath.exp(1j * (_TAU * j / n + _ORACLE_OFFSET)) for j in range(n)]
    if n == 1:
        z = [-p.coeffs[0]]
    best = list(z)
    best_res = math.inf
    for _ in range(max_iterations):
        worst = 0.0
        for j in range(n):
            num = evaluate(p, z[j])
            den = 1.0 + 0.0j
            for k in range(n):
                if k != j:
                    den *= z[j] - z[k]
            if den == 0:
                # collided iterates, nudge deterministically
                z[j] += (1e-12 + 1e-12j) * (j + 1)
                worst = math.inf
                continue
            z[j] = z[j] - num / den
            r = abs(evaluate(p, z[j]))
            if r > worst:
                worst = r
        if worst < best_res:
            best_res = worst
            best = list(z)
        if worst <= tol:
            break
    else:
        raise ArithmeticError(
            "root iteration did not reach residual %.3e; best roots: %r"
            % (tol, best))
    # simultaneous iteration stalls near the scaled residual target; a Newton
    # polish costs nothing and keeps per-root accuracy independent of cmax
    roots = tuple(sorted((_refine_root(p, r) for r in best),
                         key=lambda w: (w.real, w.imag)))
    thetas = []
    for r in roots:
        try:
            thetas.append(theta_root(p, r))
        except ValueError:
            thetas.append(None)
    return RootSet(roots, tuple(thetas))


def quartic_resolvent(p: MonicPolynomial) -> MonicPolynomial:
    """Resolvent cubic of a degree-4 polynomial.

    q(x) = x^3 - C2 x^2 + (C1 C3 - 4 C4) x + (4 C2 C4 - C1^2 C4 - C3^2).
    """
    if p.degree != 4:
        raise ValueError("resolvent cubic requires degree 4")
    c1, c2, c3, c4 = p.coeffs
    return MonicPolynomial((
        -c2,
        c1 * c3 - 4.0 * c4,
        4.0 * c2 * c4 - c1 * c1 * c4 - c3 * c3,
    ))


def _quadratic_pair(b: complex, c: complex) -> tuple[complex, complex]:
    # roots of x^2 + b x + c
    h = -0.5 * b
    s = cmath.sqrt(h * h - c)
    return h - s, h + s


def solve_quartic_resolvent(p: MonicPolynomial) -> RootSet:
    """All four roots of a degree-4 polynomial via its resolvent cubic.

    One resolvent root S1 splits the quartic into two quadratics
    x^2 + C1 x + (C2 - S1) -> T11, T12 and x^2 - S1 x + C4 -> T21, T22;
    the candidate factor pairings (T11,T21)/(T12,T22) and the swapped one
    are disambiguated by evaluating the quartic on the produced roots and
    keeping the pairing with the smaller residual.
    """
    if p.degree != 4:
        raise ValueError("quartic solver requires degree 4")
    c1, c2, c3, c4 = p.coeffs
    res = quartic_resolvent(p)
    s1 = _refine_root(res, oracle_roots(res).roots[0])
    t11, t12 = _quadratic_pair(c1, c2 - s1)
    t21, t22 = _quadratic_pair(-s1, c4)

    def roots_for(pairing):
        (u1, w1), (u2, w2) = pairing
        # factors x^2 - u x + w
        r = _quadratic_pair(-u1, w1) + _quadratic_pair(-u2, w2)
        return r

    direct = roots_for(((t11, t21), (t12, t22)))
    swapped = roots_for(((t11, t22), (t12, t21)))
    res_direct = max(abs(evaluate(p, r)) for r in direct)
    res_swapped = max(abs(evaluate(p, r)) for r in swapped)
    roots = direct if res_direct <= res_swapped else swapped
    roots = tuple(sorted((_refine_root(p, r) for r in roots),
                         key=lambda w: (w.real, w.imag)))
    thetas = []
    for r in roots:
        try:
            thetas.append(theta_root(p, r))
        except ValueError:
            thetas.append(None)
    return RootSet(roots, tuple(thetas))


# ---------------------------------------------------------------------------
# parsing and formatting

_COMPLEX_LITERAL = re.compile(r"^[0-9+\-.eEij ]+$")


def parse_complex(token: str) -> complex:
    """Parse one complex entry.

    Accepts the two-float form "re im" and literal forms like "1+2i",
    "-0.5i", "3". Both i and j denote the imaginary unit.
    """
    s = token.strip()
    if not s:
        raise ValueError("empty coefficient entry")
    parts = s.split()
    if len(parts) == 2:
        try:
            return complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ValueError(f"cannot parse complex value from {token!r}") from exc
    if len(parts) != 1:
        raise ValueError(f"cannot parse complex value from {token!r}")
    compact = parts[0].replace("i", "j")
    if not _COMPLEX_LITERAL.match(compact):
        raise ValueError(f"cannot parse complex value from {token!r}")
    try:
        return complex(compact)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex value from {token!r}") from exc


def parse_coefficients_text(text: str) -> list[complex]:
    """Coefficient list from text, one entry per line, C1 first."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_complex(line))
    if not out:
        raise ValueError("no coefficients found")
    return out


def parse_coefficients_inline(text: str) -> list[complex]:
    """Coefficient list from a comma-separated inline string, C1 first."""
    entries = [e for e in text.split(",")]
    if not any(e.strip() for e in entries):
        raise ValueError("no coefficients found")
    return [parse_complex(e) for e in entries if e.strip()]


def format_complex_text(z: complex) -> str:
    """The two-float "re im" text form, shortest round-trip floats."""
    return f"{z.real!r} {z.imag!r}"


def format_complex_pretty(z: complex) -> str:
    """Human form like 0.2938057-0.2115485i used in tables."""
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.7f}{sign}{abs(z.imag):.7f}i"


def coeffs_to_json(coeffs) -> list[dict]:
    return [{"re": complex(c).real, "im": complex(c).imag} for c in coeffs]


def coeffs_from_json(items) -> list[complex]:
    out = []
    for it in items:
        if isinstance(it, dict):
            out.append(complex(float(it.get("re", 0.0)), float(it.get("im", 0.0))))
        elif isinstance(it, (list, tuple)) and len(it) == 2:
            out.append(complex(float(it[0]), float(it[1])))
        elif isinstance(it, str):
            out.append(parse_complex(it))
        elif isinstance(it, (int, float)):
            out.append(complex(float(it), 0.0))
        else:
            raise ValueError(f"cannot parse coefficient entry {it!r}")
    if not out:
        raise ValueError("no coefficients found")
    return out
