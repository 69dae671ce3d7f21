"""Critical points of the master function and the rational-function classes
they label.

For a configuration z with multiplicities m and k = M + 1 - d, the master
function on k points is

    Phi(t) = prod_{i<j} (t_i - t_j)^2 / prod_i W(t_i),    W = prod (x - z_l)^{m_l}.

Its logarithmic gradient

    G_i(t) = sum_l -m_l / (t_i - z_l) + sum_{j != i} 2 / (t_i - t_j)

vanishes exactly at the critical points. Each S_k-orbit of critical points
gives f = prod (x - t_i), and g is recovered from W / f^2 by partial
fractions, so that g / f is a degree-d rational function with Wronskian W.

The solver is a multi-start damped Newton iteration, vectorised over a batch
of starts. Newton runs on the coefficients of f rather than on t: the
condition "t is critical" is equivalent to F f'' + F_1 f' = 0 mod f with F, F_1
fixed polynomials in z, and that residual has no poles and does not flatten
out at infinity, where G does and root-space iterates drift away. Roots are
then polished by a few Newton steps on G itself. Each start draws its randomness from ``(seed, start_index)`` and
starts are merged strictly in index order, so results do not depend on the
batch size or on how many threads are used.
"""

from __future__ import annotations

import json
import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .combinatorics import ProblemSpec, count_classes
from .errors import (
    DomainError,
    InvalidArgumentError,
    InvalidConfigurationError,
    NotASolutionError,
    NotCriticalError,
    PreconditionError,
    ReconstructionError,
    SolverCoverageWarning,
)
from .polywronski import (
    NumericPolynomial,
    PolyPlane,
    all_solutions_polynomial_check,
    coprimality_margin,
    divide_exactly,
    fuchsian_from_plane,
    min_root_separation,
    monic_distance,
    wronskian,
    wronskian_of_configuration,
)

log = logging.getLogger(__name__)

__all__ = [
    "SolverConfig",
    "MasterProblem",
    "CriticalOrbit",
    "ReconstructedClass",
    "VerificationReport",
    "master_function",
    "master_log_gradient",
    "master_log_hessian",
    "canonicalize_orbit",
    "orbit_distance",
    "solve_orbits",
    "reconstruct_class",
    "boundary_class",
    "verify_class",
    "exact_k1_oracle",
    "sample_generic_z",
    "genericity_spot_check",
]

HESSIAN_DEGENERATE = 1e10
# Relative size of G against its own terms; rejects runaway starts where G
# is small only because every t_i has drifted off to infinity.
_RELATIVE_RESIDUAL_GUARD = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    max_starts: int | None = None
    saturation_window: int = 500
    eps_newton: float = 1e-10
    eps_verify: float = 1e-8
    delta_dedupe: float = 1e-6
    delta_sep: float = 1e-6
    max_iter: int = 100
    batch_size: int = 256
    threads: int | None = None

    JSON_KEYS = (
        "seed",
        "max_starts",
        "saturation_window",
        "eps_newton",
        "eps_verify",
        "delta_dedupe",
        "delta_sep",
    )

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.max_starts is not None and self.max_starts < 1:
            raise InvalidConfigurationError("max_starts must be positive")
        if self.saturation_window < 1 or self.batch_size < 1 or self.max_iter < 1:
            raise InvalidConfigurationError("window, batch size and iteration cap must be positive")
        for name in ("eps_newton", "eps_verify", "delta_dedupe", "delta_sep"):
            if not getattr(self, name) > 0:
                raise InvalidConfigurationError(f"{name} must be positive")

    @classmethod
    def from_json(cls, source: str | Path | dict, **overrides: Any) -> "SolverConfig":
        if isinstance(source, dict):
            data = dict(source)
        else:
            data = json.loads(Path(source).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfigurationError(f"unknown solver config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.JSON_KEYS}

    def worker_count(self) -> int:
        env = os.environ.get("WRONSKI_THREADS")
        cap = int(env) if env else None
        n = self.threads if self.threads is not None else (cap or 1)
        if cap:
            n = min(n, cap)
        return max(1, n)


@dataclass(frozen=True)
class MasterProblem:
    z: tuple[complex, ...]
    m: tuple[int, ...]
    d: int

    def __post_init__(self) -> None:
        z = tuple(complex(x) for x in self.z)
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "m", m)
        if len(z) != len(m):
            raise InvalidArgumentError("z and m must have the same length")
        for i in range(len(z)):
            for j in range(i + 1, len(z)):
                if z[i] == z[j]:
                    raise InvalidConfigurationError(f"z[{i}] == z[{j}] == {z[i]}")
        spec = self.spec
        if not spec.admissible:
            raise InvalidArgumentError(f"inadmissible problem d={self.d}, m={m}")
        if not 0 <= spec.k < self.d:
            raise InvalidArgumentError(f"need 0 <= k < d, got k={spec.k}")

    @classmethod
    def from_spec(cls, spec: ProblemSpec, z: Sequence[complex] | None = None) -> "MasterProblem":
        z = spec.z if z is None else z
        if z is None:
            raise InvalidArgumentError("no critical points given")
        return cls(tuple(z), spec.m, spec.d)

    @property
    def spec(self) -> ProblemSpec:
        return ProblemSpec(self.d, self.m)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def M(self) -> int:
        return sum(self.m)

    @property
    def k(self) -> int:
        return self.M + 1 - self.d

    @property
    def z_array(self) -> np.ndarray:
        return np.array(self.z, dtype=complex)

    @property
    def m_array(self) -> np.ndarray:
        return np.array(self.m, dtype=float)

    def centroid(self) -> complex:
        return complex(np.mean(self.z_array))

    def radius(self) -> float:
        """Largest distance from the centroid to a z_j (1.0 if that is zero)."""
        r = float(np.max(np.abs(self.z_array - self.centroid())))
        return r if r > 0 else 1.0

    def wronskian(self) -> NumericPolynomial:
        return wronskian_of_configuration(list(self.z), list(self.m))


def _sort_key(t: complex) -> tuple:
    return (round(t.real, 10), round(t.imag, 10), t.real, t.imag)


@dataclass(frozen=True)
class CriticalOrbit:
    points: tuple[complex, ...]
    hessian_condition: float
    residual: float

    @property
    def degenerate(self) -> bool:
        return not self.hessian_condition < HESSIAN_DEGENERATE

    @property
    def key(self) -> tuple:
        return tuple((round(t.real, 10), round(t.imag, 10)) for t in self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=complex)

    def to_json(self) -> dict:
        return {
            "points": [[t.real, t.imag] for t in self.points],
            "hessian_condition": self.hessian_condition,
            "residual": self.residual,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class ReconstructedClass:
    f: NumericPolynomial
    g: NumericPolynomial
    wronskian_residual: float
    coprimality_margin: float
    points: tuple[complex, ...] = ()
    max_residue: float = 0.0

    @property
    def plane(self) -> PolyPlane:
        return PolyPlane(self.g, self.f)

    def with_basis(self, g: NumericPolynomial, f: NumericPolynomial | None = None) -> "ReconstructedClass":
        f = self.f if f is None else f
        return ReconstructedClass(
            f=f,
            g=g,
            wronskian_residual=self.wronskian_residual,
            coprimality_margin=coprimality_margin(g, f),
            points=self.points,
            max_residue=self.max_residue,
        )

    def to_json(self) -> dict:
        return {
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "wronskian_residual": self.wronskian_residual,
            "coprimality_margin": self.coprimality_margin,
            "max_residue": self.max_residue,
        }


@dataclass(frozen=True)
class VerificationReport:
    wronskian_residual: float
    coprimality_margin: float
    root_gap: float
    degree: int
    order: int
    min_root_separation: float
    fuchsian_residual: float
    all_solutions_polynomial: bool
    gradient_norm: float
    checks: dict[str, bool] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    def to_json(self) -> dict:
        out = asdict(self)
        out["notes"] = list(self.notes)
        out["passed"] = self.passed
        return out


# -- master function and its derivatives -----------------------------------


def _check_domain(t: np.ndarray, z: np.ndarray, delta_sep: float) -> None:
    k = len(t)
    for i in range(k):
        for j in range(i + 1, k):
            if abs(t[i] - t[j]) <= delta_sep:
                raise DomainError(f"t[{i}] and t[{j}] coincide within {delta_sep:g}", ("t", i, "t", j))
        for l, zl in enumerate(z):
            if abs(t[i] - zl) <= delta_sep:
                raise DomainError(f"t[{i}] hits z[{l}] within {delta_sep:g}", ("t", i, "z", l))


def master_function(t: Sequence[complex], prob: MasterProblem) -> complex:
    """Phi(t) evaluated directly as a product."""
    t = np.asarray(t, dtype=complex)
    num = complex(1.0)
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            num *= (t[i] - t[j]) ** 2
    den = complex(1.0)
    for ti in t:
        for zj, mj in zip(prob.z_array, prob.m_array):
            den *= (ti - zj) ** int(mj)
    return num / den


def master_log_gradient(
    t: Sequence[complex], prob: MasterProblem, delta_sep: float = 1e-6
) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    if t.shape != (prob.k,):
        raise InvalidArgumentError(f"expected {prob.k} points, got shape {t.shape}")
    _check_domain(t, prob.z_array, delta_sep)
    G, *_ = _evaluate(t[None, :], prob.z_array, prob.m_array)
    return G[0]


def master_log_hessian(
    t: Sequence[complex], prob: MasterProblem, delta_sep: float = 1e-6
) -> np.ndarray:
    """Jacobian of the log-gradient (the complex Hessian of log Phi)."""
    t = np.asarray(t, dtype=complex)
    _check_domain(t, prob.z_array, delta_sep)
    _, J, _, _ = _evaluate(t[None, :], prob.z_array, prob.m_array, jacobian=True)
    return J[0]


def _evaluate(T: np.ndarray, z: np.ndarray, m: np.ndarray, jacobian: bool = False):
    """Batched G, optional Jacobian, domain separation and relative residual.

    T has shape (B, k). Returns G (B, k), J (B, k, k) or None, sep (B,), rel (B,).
    """
    B, k = T.shape
    Dz = T[:, :, None] - z[None, None, :]
    Dt = T[:, :, None] - T[:, None, :]
    diag = np.eye(k, dtype=bool)[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_z = 1.0 / Dz
        inv_t = np.where(diag, 0.0, 1.0 / np.where(diag, 1.0, Dt))
    G = -(inv_z * m).sum(axis=-1) + 2.0 * inv_t.sum(axis=-1)
    sep_z = np.abs(Dz).reshape(B, -1).min(axis=1) if z.size else np.full(B, np.inf)
    if k > 1:
        sep_t = np.where(diag, np.inf, np.abs(Dt)).reshape(B, -1).min(axis=1)
    else:
        sep_t = np.full(B, np.inf)
    sep = np.minimum(sep_z, sep_t)
    scale = (np.abs(inv_z) * m).sum(axis=-1) + 2.0 * np.abs(inv_t).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.max(np.abs(G) / scale, axis=1)
    J = None
    if jacobian:
        inv_t2 = inv_t**2
        J = 2.0 * inv_t2
        dvals = (m * inv_z**2).sum(axis=-1) - 2.0 * inv_t2.sum(axis=-1)
        idx = np.arange(k)
        J[:, idx, idx] = dvals
    return G, J, sep, rel


# -- orbit bookkeeping -------------------------------------------------------


def canonicalize_orbit(
    points: Sequence[complex], prob: MasterProblem, delta_sep: float = 1e-6
) -> CriticalOrbit:
    """Sort the points canonically and record residual and Hessian condition."""
    pts = sorted((complex(p) for p in points), key=_sort_key)
    arr = np.array(pts, dtype=complex)
    _check_domain(arr, prob.z_array, delta_sep)
    G, J, _, _ = _evaluate(arr[None, :], prob.z_array, prob.m_array, jacobian=True)
    cond = float(np.linalg.cond(J[0]))
    if not np.isfinite(cond):
        cond = float("inf")
    return CriticalOrbit(tuple(pts), cond, float(np.max(np.abs(G[0]))))


def orbit_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Largest point displacement under the optimal matching of a onto b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


class _OrbitSet:
    def __init__(self, delta: float):
        self.delta = delta
        self.items: list[np.ndarray] = []
        self._sums: list[complex] = []

    def add(self, pts: np.ndarray) -> bool:
        """Insert unless a stored orbit lies within delta; True if inserted."""
        s = complex(pts.sum())
        k = len(pts)
        for other, os_ in zip(self.items, self._sums):
            if abs(s - os_) > k * self.delta:
                continue
            if orbit_distance(pts, other) < self.delta:
                return False
        self.items.append(pts)
        self._sums.append(s)
        return True


# -- multi-start Newton ------------------------------------------------------


def _start_points(prob: MasterProblem, seed: int, indices: Sequence[int]) -> np.ndarray:
    """Initial guesses; each depends only on (seed, index).

    One in eight scatters around midpoints of pairs of z's. The rest are
    uniform in a disc around the centroid whose radius alternates between two
    and three times the configuration radius; rare orbits favour different
    scales, so mixing the two raises the worst-case hit rate.
    """
    k, n = prob.k, prob.n
    c, r = prob.centroid(), prob.radius()
    z = prob.z_array
    out = np.empty((len(indices), k), dtype=complex)
    for row, idx in enumerate(indices):
        rng = np.random.default_rng([int(seed), int(idx)])
        if idx % 8 == 7 and n >= 2:
            a = rng.integers(n, size=k)
            b = rng.integers(n - 1, size=k)
            b = b + (b >= a)
            noise = rng.normal(size=k) + 1j * rng.normal(size=k)
            out[row] = 0.5 * (z[a] + z[b]) + 0.1 * r * noise
        else:
            rad = (2.0 if idx % 2 == 0 else 3.0) * r * np.sqrt(rng.random(k))
            ang = 2.0 * np.pi * rng.random(k)
            out[row] = c + rad * np.exp(1j * ang)
    return out


def _solve_steps(J: np.ndarray, G: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(J, -G[..., None])[..., 0]
    except np.linalg.LinAlgError:
        steps = np.full_like(G, np.nan)
        for i in range(len(G)):
            try:
                steps[i] = np.linalg.solve(J[i], -G[i])
            except np.linalg.LinAlgError:
                pass
        return steps


class _CoefficientSystem:
    """Critical-point equations in terms of the coefficients of f.

    With F = prod (x - z_l) and F_1 = -sum_l m_l prod_{l' != l} (x - z_l'),
    t is critical iff E(f) = F f'' + F_1 f' vanishes at every root of f, i.e.
    E(f) mod f = 0. Unlike G this residual is polynomial: it has no poles at
    colliding roots and grows (rather than decays) at infinity. Coordinates
    are shifted to the centroid and scaled by the configuration radius.
    """

    def __init__(self, prob: MasterProblem):
        self.center = prob.centroid()
        self.scale = prob.radius()
        u = (prob.z_array - self.center) / self.scale
        m = prob.m_array
        k, n = prob.k, prob.n
        F = np.poly(u)[::-1]
        F1 = np.zeros(n, dtype=complex)
        for l in range(n):
            F1 -= m[l] * np.poly(np.delete(u, l))[::-1]
        width = k + n - 1
        # row j holds the coefficients of E(x^j)
        E = np.zeros((k + 1, width), dtype=complex)
        for j in range(k + 1):
            if j >= 2:
                E[j, j - 2 : j - 1 + n] += j * (j - 1) * F
            if j >= 1:
                E[j, j - 1 : j - 1 + n] += j * F1
        self.k = k
        self.E = E

    def to_coefficients(self, T: np.ndarray) -> np.ndarray:
        """Non-leading coefficients (low first) of the monic f with roots T."""
        U = (T - self.center) / self.scale
        B, k = U.shape
        c = np.zeros((B, k + 1), dtype=complex)
        c[:, 0] = 1.0
        for i in range(k):
            c[:, 1:] = c[:, 1:] - U[:, i : i + 1] * c[:, :-1]
        return c[:, ::-1][:, :k].copy()

    def to_roots(self, C: np.ndarray) -> np.ndarray:
        B, k = C.shape
        comp = np.zeros((B, k, k), dtype=complex)
        comp[:, 1:, :-1] = np.eye(k - 1)
        comp[:, :, -1] = -C
        return np.linalg.eigvals(comp) * self.scale + self.center

    @staticmethod
    def _reduce(P: np.ndarray, f: np.ndarray):
        """Remainder and quotient of P modulo the monic f (batched, low first)."""
        P = P.copy()
        k = f.shape[-1] - 1
        width = P.shape[-1]
        Q = np.zeros(P.shape[:-1] + (max(width - k, 0),), dtype=complex)
        for i in range(width - 1, k - 1, -1):
            q = P[..., i].copy()
            Q[..., i - k] = q
            P[..., i - k : i + 1] -= q[..., None] * f
        return P[..., :k], Q

    def residual(self, C: np.ndarray, jacobian: bool = False):
        B, k = C.shape
        f = np.concatenate([C, np.ones((B, 1))], axis=1)
        # elementwise sum rather than a BLAS product keeps rows batch-independent
        R, Q = self._reduce((f[:, :, None] * self.E[None]).sum(axis=1), f)
        if not jacobian:
            return R, None
        # d/dc_j (E(f) mod f) = (E(x^j) - Q x^j) mod f
        width = self.E.shape[1]
        D = np.broadcast_to(self.E[:k], (B, k, width)).copy()
        for j in range(k):
            span = min(Q.shape[1], width - j)
            D[:, j, j : j + span] -= Q[:, :span]
        Rj, _ = self._reduce(D, f[:, None, :])
        return R, np.transpose(Rj, (0, 2, 1))


def _damped_newton(C: np.ndarray, system: _CoefficientSystem, max_iter: int) -> np.ndarray:
    """Backtracking Newton on |R|^2 (halving, at most 40 times) per row."""
    C = C.copy()
    active = np.ones(len(C), dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        R, J = system.residual(C[idx], jacobian=True)
        phi0 = np.sum(np.abs(R) ** 2, axis=1)
        step = _solve_steps(J, R)
        keep = np.isfinite(phi0) & (phi0 > 1e-28) & np.all(np.isfinite(step), axis=1)
        active[idx[~keep]] = False
        idx, Cs, step, phi0 = idx[keep], C[idx[keep]], step[keep], phi0[keep]
        lam = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        accepted = np.zeros(len(idx), dtype=bool)
        for _ in range(41):
            if not pending.any():
                break
            p = np.flatnonzero(pending)
            trial = Cs[p] + lam[p, None] * step[p]
            Rt, _ = system.residual(trial)
            phi = np.sum(np.abs(Rt) ** 2, axis=1)
            good = np.isfinite(phi) & (phi <= (1 - 2e-4 * lam[p]) * phi0[p])
            gi = p[good]
            C[idx[gi]] = trial[good]
            accepted[gi] = True
            pending[gi] = False
            lam[p[~good]] *= 0.5
        active[idx[~accepted]] = False
    return C


def _polish(X: np.ndarray, prob: MasterProblem, cfg: SolverConfig, steps: int = 8):
    """A few plain Newton steps on G itself, then the acceptance test."""
    z, m = prob.z_array, prob.m_array
    for _ in range(steps):
        G, J, _, _ = _evaluate(X, z, m, jacobian=True)
        if np.all(np.max(np.abs(G), axis=1) < 1e-3 * cfg.eps_newton):
            break
        step = _solve_steps(J, G)
        step[~np.isfinite(step)] = 0.0
        X = X + step
    G, _, sep, rel = _evaluate(X, z, m)
    res = np.max(np.abs(G), axis=1)
    converged = (
        np.isfinite(res)
        & (res < cfg.eps_newton)
        & (rel < _RELATIVE_RESIDUAL_GUARD)
        & (sep > cfg.delta_sep)
    )
    return X, converged


def _newton_batch(T0: np.ndarray, prob: MasterProblem, cfg: SolverConfig):
    """Solve from every row of T0 independently; returns (points, converged mask).

    Each row sees identical arithmetic whatever else is in the batch.
    """
    system = _CoefficientSystem(prob)
    C = _damped_newton(system.to_coefficients(T0), system, cfg.max_iter)
    ok = np.all(np.isfinite(C), axis=1)
    X = np.full(T0.shape, np.nan, dtype=complex)
    if ok.any():
        X[ok] = system.to_roots(C[ok])
    X[~ok] = T0[~ok]
    with np.errstate(all="ignore"):
        X, converged = _polish(X, prob, cfg)
    return X, converged & ok


def solve_orbits(prob: MasterProblem, cfg: SolverConfig | None = None) -> list[CriticalOrbit]:
    """Enumerate S_k-orbits of critical points of the master function.

    Runs starts in index order until ``max_starts`` is reached or
    ``saturation_window`` consecutive starts bring nothing new. Finding
    fewer orbits than the closed formula predicts emits a
    SolverCoverageWarning; it is not an error.
    """
    cfg = cfg or SolverConfig()
    if prob.k < 1:
        raise InvalidArgumentError("no master function for k = 0; use boundary_class")
    expected = count_classes(prob.spec)
    max_starts = cfg.max_starts or 2000 * max(expected, 1)
    found = _OrbitSet(cfg.delta_dedupe)
    last_new = -1
    start = 0
    workers = cfg.worker_count()
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while start < max_starts and start - last_new - 1 < cfg.saturation_window:
            stop = min(start + cfg.batch_size, max_starts)
            indices = list(range(start, stop))
            T0 = _start_points(prob, cfg.seed, indices)
            if pool is None:
                X, conv = _newton_batch(T0, prob, cfg)
            else:
                chunks = np.array_split(np.arange(len(indices)), workers)
                parts = list(pool.map(lambda c: _newton_batch(T0[c], prob, cfg), chunks))
                X = np.concatenate([p[0] for p in parts])
                conv = np.concatenate([p[1] for p in parts])
            for row, idx in enumerate(indices):
                if idx - last_new - 1 >= cfg.saturation_window:
                    break
                if not conv[row]:
                    continue
                pts = np.array(sorted(X[row], key=_sort_key), dtype=complex)
                if found.add(pts):
                    last_new = idx
                    log.debug("start %d found orbit %d", idx, len(found.items))
            else:
                start = stop
                continue
            break
    finally:
        if pool is not None:
            pool.shutdown()
    orbits = [canonicalize_orbit(p, prob, cfg.delta_sep) for p in found.items]
    orbits.sort(key=lambda o: o.key)
    if not orbits and expected > 0:
        warnings.warn(
            f"no critical orbits found, formula predicts {expected} (d={prob.d}, m={prob.m})",
            SolverCoverageWarning,
            stacklevel=2,
        )
    return orbits


def exact_k1_oracle(prob: MasterProblem, delta_sep: float = 1e-6) -> list[CriticalOrbit]:
    """For k = 1 the critical points are the roots of W'/W = sum m_j / (x - z_j).

    Clearing denominators gives Q = sum_j m_j prod_{l != j} (x - z_l), built
    directly so no division by the repeated factors of W' is needed. Q(z_j) is
    nonzero for distinct z, so every root of Q is a critical point.
    """
    if prob.k != 1:
        raise InvalidArgumentError(f"the k=1 oracle needs k = 1, got k={prob.k}")
    z = list(prob.z)
    Q = NumericPolynomial([])
    for j, mj in enumerate(prob.m):
        others = z[:j] + z[j + 1 :]
        Q = Q + NumericPolynomial.from_roots(others, [1] * len(others)) * float(mj)
    dQ = Q.deriv()
    scale = prob.radius()
    orbits = []
    for r in Q.roots():
        r = complex(r)
        for _ in range(8):
            dq = dQ(r)
            if dq == 0:
                break
            step = Q(r) / dq
            r -= step
            if abs(step) < 1e-16 * max(1.0, abs(r)):
                break
        if min(abs(r - zj) for zj in z) <= delta_sep * scale:
            continue
        orbits.append(canonicalize_orbit([r], prob))
    orbits.sort(key=lambda o: o.key)
    return orbits


# -- reconstruction and verification ----------------------------------------


def _abs_eval(p: NumericPolynomial, x: complex) -> float:
    """sum |p_i| |x|^i, the size of p(x) before cancellation."""
    return float(sum(abs(c) * abs(x) ** i for i, c in enumerate(p.coeffs)))


def reconstruct_class(
    orbit: CriticalOrbit, prob: MasterProblem, tol: float = 1e-8, eps_verify: float = 1e-8
) -> ReconstructedClass:
    """Recover g with W[g, f] = W from f = prod (x - t_i).

    W / f^2 = p + sum_i a_i / (x - t_i) + b_i / (x - t_i)^2, and a_i = 0 at a
    critical point; then g = f * (integral of p) - sum_i b_i f / (x - t_i).
    """
    t = list(orbit.points)
    W = prob.wronskian()
    f = NumericPolynomial.from_roots(t)
    df, d2f, dW = f.deriv(), f.deriv(2), W.deriv()
    p, _ = divmod(W, f * f)
    g = p.integ() * f
    z, m = prob.z_array, prob.m_array
    residues = []
    for i, ti in enumerate(t):
        fp, fpp, Wt = df(ti), d2f(ti), W(ti)
        # product forms: near the z's, W(t_i) is tiny and Horner loses its
        # relative accuracy, which b_i would inherit
        others = np.delete(np.asarray(t), i)
        b = complex(np.prod((ti - z) ** m) / np.prod(ti - others) ** 2)
        # measured against the rounding scale of the two cancelling terms
        scale = _abs_eval(dW, ti) * _abs_eval(df, ti) + _abs_eval(W, ti) * _abs_eval(d2f, ti)
        rel = abs(dW(ti) * fp - Wt * fpp) / max(scale, 1e-300)
        if rel >= tol:
            raise NotCriticalError(f"relative residue {rel:.3e} at t={ti} is not negligible")
        residues.append(rel)
        q_i, _ = divmod(f, NumericPolynomial([-ti, 1]))
        g = g - q_i * b
    resid = monic_distance(wronskian(g, f), W)
    if not resid < eps_verify:
        raise ReconstructionError(f"Wronskian mismatch {resid:.3e} after reconstruction")
    return ReconstructedClass(
        f=f,
        g=g,
        wronskian_residual=resid,
        coprimality_margin=coprimality_margin(g, f),
        points=tuple(orbit.points),
        max_residue=max(residues, default=0.0),
    )


def boundary_class(prob: MasterProblem) -> ReconstructedClass:
    """The single class when M = d - 1: the primitive of W over the constant 1."""
    if prob.k != 0:
        raise InvalidArgumentError(f"boundary class needs k = 0, got k={prob.k}")
    W = prob.wronskian()
    g, f = W.integ(), NumericPolynomial([1])
    return ReconstructedClass(
        f=f,
        g=g,
        wronskian_residual=monic_distance(wronskian(g, f), W),
        coprimality_margin=1.0,
    )


def verify_class(
    rc: ReconstructedClass,
    prob: MasterProblem,
    tol: float = 1e-8,
    delta_sep: float = 1e-6,
) -> VerificationReport:
    """Independent checks of a reconstructed class; never raises on failure."""
    W = prob.wronskian()
    g, f = rc.g, rc.f
    notes: list[str] = []
    try:
        wres = monic_distance(wronskian(g, f), W)
    except ZeroDivisionError:
        wres = float("inf")
    margin = coprimality_margin(g, f)
    sep = min_root_separation(f)
    fuchs_res = float("inf")
    all_poly = False
    try:
        plane = PolyPlane(g, f)
        eq = fuchsian_from_plane(plane, prob.z, prob.m, tol)
        fuchs_res = max(eq.residual(g), eq.residual(f))
        all_poly = all_solutions_polynomial_check(eq, plane, tol, delta_sep)
    except (NotASolutionError, PreconditionError, InvalidArgumentError) as exc:
        notes.append(f"fuchsian: {exc}")
    grad = 0.0
    gap = float("inf")
    if f.degree >= 1:
        roots = f.roots()
        # re-rooting a clustered f from its coefficients costs digits; the
        # points f was built from are the better evaluation nodes
        if len(rc.points) == len(roots) and orbit_distance(rc.points, roots) < 1e-6 * prob.radius():
            roots = np.array(rc.points, dtype=complex)
        gap = float(np.abs(roots[:, None] - prob.z_array[None, :]).min()) / prob.radius()
        if len(roots) != prob.k:
            grad = float("inf")
            notes.append(f"f has {len(roots)} roots, expected {prob.k}")
        else:
            try:
                grad = float(np.max(np.abs(master_log_gradient(roots, prob, delta_sep))))
            except DomainError as exc:
                grad = float("inf")
                notes.append(f"gradient: {exc}")
    checks = {
        "wronskian": wres < tol,
        # a common root of g and f is a root of W[g, f] = W, so keeping the
        # roots of f off the z's certifies coprimality once "wronskian" holds
        "coprime": gap > delta_sep,
        "degree": g.degree == prob.d,
        "order": f.degree == prob.k,
        "degree_plus_order": g.degree + f.degree == prob.M + 1,
        "f_squarefree": sep > delta_sep,
        "fuchsian": fuchs_res < tol,
        "all_solutions_polynomial": all_poly,
        "gradient": grad < tol,
    }
    return VerificationReport(
        wronskian_residual=float(wres),
        coprimality_margin=float(margin),
        root_gap=gap,
        degree=g.degree,
        order=f.degree,
        min_root_separation=float(sep),
        fuchsian_residual=float(fuchs_res),
        all_solutions_polynomial=bool(all_poly),
        gradient_norm=grad,
        checks={k: bool(v) for k, v in checks.items()},
        notes=tuple(notes),
    )


# -- generic configurations --------------------------------------------------


def sample_generic_z(
    n: int, rng: np.random.Generator, radius: float = 1.0, min_rel_gap: float = 1e-2
) -> tuple[complex, ...]:
    """n points uniform in a disc, redrawn until no pair is closer than
    ``min_rel_gap`` times the diameter of the sample."""
    if n < 1:
        raise InvalidArgumentError("need at least one point")
    while True:
        rad = radius * np.sqrt(rng.random(n))
        ang = 2 * np.pi * rng.random(n)
        z = rad * np.exp(1j * ang)
        if n == 1:
            return (complex(z[0]),)
        dist = np.abs(z[:, None] - z[None, :])
        diam = dist.max()
        dist[np.diag_indices(n)] = np.inf
        if dist.min() >= min_rel_gap * diam:
            return tuple(complex(x) for x in z)


def genericity_spot_check(
    prob: MasterProblem, cfg: SolverConfig | None = None, size: float = 1e-6
) -> tuple[int, int]:
    """Orbit counts at z and at a perturbation of z of the given size.

    Unequal counts suggest z is special. This is a heuristic only.
    """
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng([cfg.seed, 0x5EED])
    dz = size * (rng.normal(size=prob.n) + 1j * rng.normal(size=prob.n))
    moved = MasterProblem(tuple(prob.z_array + dz), prob.m, prob.d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SolverCoverageWarning)
        return len(solve_orbits(prob, cfg)), len(solve_orbits(moved, cfg))
