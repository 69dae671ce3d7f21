"""Dense univariate polynomials, Wronskians of 2-planes, and the second-order
Fuchsian equation whose solution space is a given plane.

Two coefficient backends share one implementation: ``ExactPolynomial`` over
``Fraction`` for identities, ``NumericPolynomial`` over ``complex`` for the
solver pipeline. Coefficients are stored lowest degree first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number, Rational
from typing import Any, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    DegeneratePointError,
    InvalidArgumentError,
    InvalidConfigurationError,
    NotASolutionError,
    PreconditionError,
)

__all__ = [
    "ExactPolynomial",
    "NumericPolynomial",
    "PolyPlane",
    "FuchsianEquation",
    "DEFAULT_DIVISION_TOL",
    "wronskian",
    "wronskian_of_configuration",
    "poly_gcd",
    "divide_exactly",
    "monic_distance",
    "coprimality_margin",
    "min_root_separation",
    "plane_type",
    "local_wronskian_identity_check",
    "fuchsian_from_plane",
    "all_solutions_polynomial_check",
]

DEFAULT_DIVISION_TOL = 1e-8


class _Polynomial:
    """Shared dense-coefficient arithmetic. Subclasses fix the coefficient ring."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Any] = ()):
        self.coeffs = self._trim(tuple(self._coerce(c) for c in coeffs))

    # -- ring specifics -------------------------------------------------
    @staticmethod
    def _coerce(c: Any) -> Any:
        raise NotImplementedError

    def _trim(self, coeffs: tuple) -> tuple:
        raise NotImplementedError

    def _new(self, coeffs: Sequence[Any]):
        return type(self)(coeffs)

    # -- basic queries --------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self._coerce(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.coeffs)!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, _Polynomial):
            return type(self) is type(other) and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coeffs))

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, _Polynomial):
            raise TypeError(f"cannot mix {type(self).__name__} and {type(other).__name__}")
        return self._new([other])

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, _Polynomial):
            c = self._coerce(other)
            return self._new([c * a for a in self.coeffs])
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return self._new([])
        out = [self._coerce(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise InvalidArgumentError("negative polynomial power")
        out, base = self._new([1]), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __call__(self, x):
        acc = self._coerce(0) * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self, order: int = 1):
        c = list(self.coeffs)
        for _ in range(order):
            c = [i * c[i] for i in range(1, len(c))]
        return self._new(c)

    def integ(self):
        """Antiderivative with zero constant term."""
        return self._new([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        lead = dv[-1]
        nq = len(rem) - len(dv) + 1
        if nq <= 0:
            return self._new([]), self
        quot = [self._coerce(0)] * nq
        for i in range(nq - 1, -1, -1):
            c = rem[i + len(dv) - 1] / lead
            quot[i] = c
            if c == 0:
                continue
            for j, b in enumerate(dv):
                rem[i + j] -= c * b
        return self._new(quot), self._new(rem[: len(dv) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic normalisation")
        lead = self.leading
        return self._new([c / lead for c in self.coeffs])

    def norm_inf(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence[Any], multiplicities: Sequence[int] | None = None):
        out = cls([1])
        mults = multiplicities if multiplicities is not None else [1] * len(roots)
        for r, k in zip(roots, mults):
            out = out * cls([-r, 1]) ** k
        return out


class ExactPolynomial(_Polynomial):
    """Polynomial with arbitrary-precision rational coefficients."""

    __slots__ = ()

    @staticmethod
    def _coerce(c: Any) -> Fraction:
        if isinstance(c, Fraction):
            return c
        if isinstance(c, (Rational, str)):
            return Fraction(c)
        raise TypeError(f"exact polynomial needs rational coefficients, got {c!r}")

    def _trim(self, coeffs: tuple) -> tuple:
        n = len(coeffs)
        while n and coeffs[n - 1] == 0:
            n -= 1
        return coeffs[:n]

    def to_numeric(self, degree_tol: float | None = None) -> "NumericPolynomial":
        return NumericPolynomial([complex(c) for c in self.coeffs], degree_tol=degree_tol)

    def to_json(self) -> dict:
        return {"coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict | str) -> "ExactPolynomial":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls([Fraction(s) for s in obj["coeffs"]])


class NumericPolynomial(_Polynomial):
    """Polynomial with complex double coefficients.

    Leading coefficients whose magnitude is at most ``degree_tol`` times the
    largest coefficient magnitude are trimmed on construction.
    """

    __slots__ = ("degree_tol",)
    DEFAULT_DEGREE_TOL = 1e-13

    def __init__(self, coeffs: Sequence[Any] = (), degree_tol: float | None = None):
        self.degree_tol = self.DEFAULT_DEGREE_TOL if degree_tol is None else float(degree_tol)
        super().__init__(coeffs)

    @staticmethod
    def _coerce(c: Any) -> complex:
        if isinstance(c, Number) or isinstance(c, np.number):
            return complex(c)
        raise TypeError(f"numeric polynomial needs numeric coefficients, got {c!r}")

    def _trim(self, coeffs: tuple) -> tuple:
        n = len(coeffs)
        scale = max((abs(c) for c in coeffs), default=0.0)
        while n and abs(coeffs[n - 1]) <= self.degree_tol * scale:
            n -= 1
        return coeffs[:n]

    def _new(self, coeffs):
        return NumericPolynomial(coeffs, degree_tol=self.degree_tol)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NumericPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = _Polynomial.__hash__

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return np.roots(self.as_array()[::-1])

    def to_json(self) -> dict:
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict | str) -> "NumericPolynomial":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls([complex(re, im) for re, im in obj["coeffs"]])


def _same_ring(*polys: _Polynomial) -> None:
    kinds = {type(p) for p in polys}
    if len(kinds) > 1:
        raise TypeError("polynomials from different backends")


def wronskian(g: _Polynomial, f: _Polynomial) -> _Polynomial:
    """W[g, f] = g' f - g f'."""
    _same_ring(g, f)
    return g.deriv() * f - g * f.deriv()


def wronskian_of_configuration(
    z: Sequence[Any], m: Sequence[int], exact: bool = False
) -> _Polynomial:
    """prod_j (x - z_j)^{m_j}: the monic Wronskian fixed by the critical data."""
    if len(z) != len(m):
        raise InvalidArgumentError("z and m must have the same length")
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if z[i] == z[j]:
                raise InvalidConfigurationError(f"repeated critical point z[{i}] = z[{j}] = {z[i]}")
    cls = ExactPolynomial if exact else NumericPolynomial
    return cls.from_roots(list(z), list(m))


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd over Q (zero if both are zero)."""
    if not (isinstance(a, ExactPolynomial) and isinstance(b, ExactPolynomial)):
        raise TypeError("poly_gcd is only defined for exact polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a if a.is_zero() else a.monic()


def divide_exactly(num: _Polynomial, den: _Polynomial, tol: float = DEFAULT_DIVISION_TOL):
    """num / den, raising NotASolutionError if the remainder does not vanish.

    Numeric remainders count as zero below ``tol`` times the dividend norm.
    """
    q, r = divmod(num, den)
    if isinstance(num, ExactPolynomial):
        bad = not r.is_zero()
    else:
        bad = r.norm_inf() >= tol * max(num.norm_inf(), 1e-300)
    if bad:
        raise NotASolutionError(f"division leaves remainder of size {float(r.norm_inf()):.3e}")
    return q


def monic_distance(a: _Polynomial, b: _Polynomial) -> float:
    """Max-norm distance between the monic normalisations of a and b."""
    am, bm = a.monic(), b.monic()
    if am.degree != bm.degree:
        return float("inf")
    return max(abs(complex(x) - complex(y)) for x, y in zip(am.coeffs, bm.coeffs))


def _relative_value(p: _Polynomial, x: complex) -> float:
    """|p(x)| / sum_i |p_i| |x|^i, a scale-free measure of how close x is to a root of p."""
    num = abs(complex(p(x)))
    den = sum(abs(complex(c)) * abs(x) ** i for i, c in enumerate(p.coeffs))
    return num / den if den else 0.0


def _numeric(p: _Polynomial) -> NumericPolynomial:
    return p.to_numeric() if isinstance(p, ExactPolynomial) else p


def coprimality_margin(g: _Polynomial, f: _Polynomial) -> float:
    """Min over roots r of f of the relative size of g(r); 1.0 when f is constant.

    Near zero means g and f almost share a root. g is rewritten in the
    coordinate u = (x - c) / R, with c and R the mean and spread of the roots
    of f and g, so the value does not depend on where the origin sits.
    """
    gn, fn = _numeric(g), _numeric(f)
    roots = fn.roots()
    if len(roots) == 0:
        return 1.0
    if gn.degree < 1:
        return 1.0 if not gn.is_zero() else 0.0
    pts = np.concatenate([roots, gn.roots()])
    c = complex(pts.mean())
    R = float(np.abs(pts - c).max()) or 1.0
    gu = Polynomial(gn.as_array())(Polynomial([c, R]))
    local = NumericPolynomial(gu.coef)
    return min(_relative_value(local, (r - c) / R) for r in roots)


def min_root_separation(f: _Polynomial) -> float:
    """Smallest pairwise distance between roots of f (inf for fewer than two roots)."""
    roots = _numeric(f).roots()
    if len(roots) < 2:
        return float("inf")
    diffs = np.abs(roots[:, None] - roots[None, :])
    diffs[np.diag_indices(len(roots))] = np.inf
    return float(diffs.min())


@dataclass(frozen=True)
class PolyPlane:
    """Span{g, f} with deg g > deg f: degree is deg g, order is deg f."""

    g: _Polynomial
    f: _Polynomial

    def __post_init__(self) -> None:
        _same_ring(self.g, self.f)
        if self.f.is_zero():
            raise InvalidArgumentError("f must be nonzero")
        if self.g.degree <= self.f.degree:
            raise InvalidArgumentError(
                f"basis must have deg g > deg f, got {self.g.degree} and {self.f.degree}"
            )

    @property
    def degree(self) -> int:
        return self.g.degree

    @property
    def order(self) -> int:
        return self.f.degree

    @property
    def exact(self) -> bool:
        return isinstance(self.g, ExactPolynomial)

    def wronskian(self) -> _Polynomial:
        return wronskian(self.g, self.f)

    def is_generic(self, tol: float = 1e-6) -> bool:
        """True if g and f share no root (exact gcd, or numeric margin above tol)."""
        if self.exact:
            return poly_gcd(self.g, self.f).degree == 0
        return coprimality_margin(self.g, self.f) > tol


def plane_type(plane: PolyPlane) -> tuple[int, int, int]:
    return plane.degree, plane.order, plane.wronskian().degree


def local_wronskian_identity_check(plane: PolyPlane, z: Any, tol: float = 1e-8) -> bool:
    """Check W'(z)/W(z) = p''(z)/p'(z) for the member p of the plane vanishing at z."""
    g, f = plane.g, plane.f
    p = f * g(z) - g * f(z)
    if p.is_zero():
        p = f
    dp = p.deriv()
    if plane.exact:
        degenerate = dp(z) == 0
    else:
        degenerate = _relative_value(_numeric(dp), z) <= tol
    if degenerate:
        raise DegeneratePointError(f"{z} is a critical point of the plane; identity does not apply")
    W = plane.wronskian()
    Wz = W(z)
    if abs(complex(Wz)) <= (0 if plane.exact else tol):
        return False
    lhs = W.deriv()(z) / Wz
    rhs = p.deriv(2)(z) / dp(z)
    if plane.exact:
        return lhs == rhs
    return abs(complex(lhs) - complex(rhs)) < tol


@dataclass(frozen=True)
class FuchsianEquation:
    """F u'' + G u' + H u = 0 with F = prod(x - z_j) and G/F = sum -m_j/(x - z_j)."""

    F: _Polynomial
    G: _Polynomial
    H: _Polynomial

    def apply(self, u: _Polynomial) -> _Polynomial:
        return self.F * u.deriv(2) + self.G * u.deriv() + self.H * u

    def residual(self, u: _Polynomial) -> float:
        """Max-norm of F u'' + G u' + H u relative to the size of its three terms."""
        terms = [self.F * u.deriv(2), self.G * u.deriv(), self.H * u]
        scale = max(t.norm_inf() for t in terms)
        out = (terms[0] + terms[1] + terms[2]).norm_inf()
        return float(out / scale) if scale else float(out)

    def perturbed(self, delta: Any) -> "FuchsianEquation":
        return FuchsianEquation(self.F, self.G, self.H + delta)


def fuchsian_from_plane(
    plane: PolyPlane,
    z: Sequence[Any],
    m: Sequence[int],
    tol: float = DEFAULT_DIVISION_TOL,
) -> FuchsianEquation:
    """The reduced second-order equation whose solution space is ``plane``.

    Starts from W u'' - W' u' + h u = 0 with W = prod (x - z_j)^{m_j} and
    h = (W' f' - W f'') / f, then strips the common factor prod (x - z_j)^{m_j - 1}.
    """
    W = wronskian_of_configuration(list(z), list(m), exact=plane.exact)
    f = plane.f
    dW = W.deriv()
    h = divide_exactly(dW * f.deriv() - W * f.deriv(2), f, tol)
    common = type(W).from_roots(list(z), [mj - 1 for mj in m])
    F = divide_exactly(W, common, tol)
    G = -divide_exactly(dW, common, tol)
    H = divide_exactly(h, common, tol)
    if H.degree > len(m) - 2:
        raise NotASolutionError(f"deg H = {H.degree} exceeds n-2 = {len(m) - 2}")
    eq = FuchsianEquation(F, G, H)
    for name, u in (("g", plane.g), ("f", plane.f)):
        if plane.exact:
            if not eq.apply(u).is_zero():
                raise NotASolutionError(f"{name} does not solve the reduced equation")
        elif eq.residual(u) >= tol:
            raise NotASolutionError(f"{name} residual {eq.residual(u):.3e} exceeds {tol:g}")
    return eq


def all_solutions_polynomial_check(
    eq: FuchsianEquation,
    plane: PolyPlane,
    tol: float = DEFAULT_DIVISION_TOL,
    sep_tol: float = 1e-6,
) -> bool:
    """Both basis polynomials solve ``eq``; f must be square-free.

    A square-free polynomial solution forces every solution to be polynomial,
    so this is the checkable stand-in for that statement. Numerically, f
    counts as square-free when its roots are more than ``sep_tol`` apart; a
    double root only splits by about sqrt(machine epsilon).
    """
    f = plane.f
    if plane.exact:
        if poly_gcd(f, f.deriv()).degree > 0:
            raise PreconditionError("f has a multiple root")
        return eq.apply(plane.g).is_zero() and eq.apply(f).is_zero()
    if min_root_separation(f) <= sep_tol:
        raise PreconditionError("f has (numerically) multiple roots")
    return eq.residual(plane.g) < tol and eq.residual(f) < tol
