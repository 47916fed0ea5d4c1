"""Coefficient-matrix environments and products of random matrices.

Provides the i.i.d. nonnegative matrix ensemble, overflow-safe log-norm
accumulation of long matrix products (renormalized to sup-norm 1 after
every factor), Monte Carlo estimation of the contraction rate lambda =
-lim ln||A_1...A_n|| / n, Perron root utilities for the constant
environment, the joint-positivity check (enumerated kappa, K), and the
entry-variation functionals used by the product lower bounds.

Norm convention: ||.|| is the sup norm (maximum row sum for matrices),
except the maximum column sum ||.||_1 inside the variation functional
delta, which is defined that way.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEnsemble,
    DimensionMismatch,
    NonPositive,
    NotPrimitive,
    SupportTooLarge,
    ZeroMatrix,
    ZeroProduct,
)
from .streams import child_rng

_PROB_TOL = 1e-12
_ENUM_BUDGET = 10**6


def sup_norm(a: np.ndarray) -> float:
    """Sup norm: max |entry| for vectors, max row sum for matrices."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return float(np.abs(a).max()) if a.size else 0.0
    return float(np.abs(a).sum(axis=1).max())


def col_norm(a: np.ndarray) -> float:
    """Maximum column sum (the l1-induced matrix norm)."""
    return float(np.abs(np.asarray(a, dtype=float)).sum(axis=0).max())


# ---------------------------------------------------------------------------
# ensemble
# ---------------------------------------------------------------------------


class MatrixEnsemble:
    """Finite-support law over nonnegative d x d coefficient matrices.

    A constant environment is the one-atom special case.  Probabilities
    must sum to 1 within 1e-12 and all entries must be >= 0.
    """

    def __init__(self, atoms, probs):
        mats = [np.array(a, dtype=float) for a in atoms]
        if not mats:
            raise ValueError("ensemble needs at least one atom")
        d = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (d, d):
                raise DimensionMismatch(f"atom shape {m.shape} != ({d}, {d})")
            if np.any(m < 0):
                raise ValueError("atom entries must be nonnegative")
            m.setflags(write=False)
        p = np.asarray(probs, dtype=float)
        if p.shape != (len(mats),) or np.any(p < 0):
            raise ValueError("probs must be nonnegative, one per atom")
        if abs(p.sum() - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        self.atoms: list[np.ndarray] = mats
        self.probs: np.ndarray = p / p.sum()
        self.probs.setflags(write=False)
        self.dim: int = d

    @classmethod
    def constant(cls, matrix) -> "MatrixEnsemble":
        return cls([matrix], [1.0])

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixEnsemble":
        atoms = [a["matrix"] for a in obj["atoms"]]
        probs = [a["p"] for a in obj["atoms"]]
        ens = cls(atoms, probs)
        if "dim" in obj and int(obj["dim"]) != ens.dim:
            raise DimensionMismatch(f"declared dim {obj['dim']} != atom dim {ens.dim}")
        return ens

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "atoms": [
                {"matrix": a.tolist(), "p": float(p)}
                for a, p in zip(self.atoms, self.probs)
            ],
        }

    @property
    def is_constant(self) -> bool:
        return len(self.atoms) == 1

    def sample_index(self, rng: np.random.Generator, size: int | None = None):
        if len(self.atoms) == 1:
            return 0 if size is None else np.zeros(size, dtype=np.int64)
        idx = rng.choice(len(self.atoms), size=size if size is not None else 1, p=self.probs)
        return int(idx[0]) if size is None else idx

    def bd1_gamma(self) -> int:
        """Smallest integer gamma_1 with ||A|| <= gamma_1 for every atom."""
        return max(1, math.ceil(max(sup_norm(a) for a in self.atoms)))

    def has_zero_column_atom(self) -> bool:
        """True when some atom has an all-zero column (joint positivity impossible)."""
        return any(np.any(a.sum(axis=0) == 0.0) for a in self.atoms)

    def __repr__(self) -> str:
        return f"MatrixEnsemble(dim={self.dim}, atoms={len(self.atoms)})"


def sample_matrix(ensemble: MatrixEnsemble, rng: np.random.Generator) -> np.ndarray:
    """Draw one coefficient matrix (an atom of the support)."""
    return ensemble.atoms[ensemble.sample_index(rng)]


# ---------------------------------------------------------------------------
# log-renormalized products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogProductState:
    """Running product A_n ... A_1 kept at sup-norm 1.

    log_norm is ln||A_n ... A_1|| (equal to -S_n); renormalizing after
    every absorbed factor keeps 1e6-step products representable since the
    raw norm decays like e^(-lambda n).
    """

    normalized: np.ndarray  # (d, d), sup-norm 1
    log_norm: float
    length: int

    @classmethod
    def start(cls, dim: int) -> "LogProductState":
        eye = np.eye(dim)
        eye.setflags(write=False)
        return cls(eye, 0.0, 0)

    @property
    def s_n(self) -> float:
        """S_n = -ln||A_n ... A_1||."""
        return -self.log_norm


def absorb(state: LogProductState, a: np.ndarray) -> LogProductState:
    """Multiply the next coefficient matrix onto the running product."""
    a = np.asarray(a, dtype=float)
    d = state.normalized.shape[0]
    if a.shape != (d, d):
        raise DimensionMismatch(f"matrix shape {a.shape} != ({d}, {d})")
    if np.any(a < 0):
        raise ValueError("coefficient matrix must be nonnegative")
    prod = a @ state.normalized
    nrm = sup_norm(prod)
    if nrm == 0.0:
        raise ZeroProduct(f"product annihilated at step {state.length + 1}")
    out = prod / nrm
    out.setflags(write=False)
    return LogProductState(out, state.log_norm + math.log(nrm), state.length + 1)


# ---------------------------------------------------------------------------
# Lyapunov estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LyapunovEstimate:
    lambda_hat: float
    half_width: float  # 99% normal-approximation half width across replicas
    trajectory_length: int
    replicas: int

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lambda_hat - self.half_width, self.lambda_hat + self.half_width)


_CI_Z = 2.576  # 99% two-sided normal quantile


def _replica_rate(ensemble: MatrixEnsemble, n: int, rng: np.random.Generator) -> float:
    """(S_n - S_n0)/(n - n0) for one replica, n0 = n//2.

    Discarding the first half removes the O(1/n) transient from the
    Perron projection, so constant ensembles resolve -ln(spectral
    radius) to near machine precision once n >= 200.
    """
    n0 = n // 2
    idx = ensemble.sample_index(rng, size=n)
    if ensemble.dim == 1:
        vals = np.array([float(a[0, 0]) for a in ensemble.atoms])[idx]
        if np.any(vals == 0.0):
            raise ZeroProduct("scalar coefficient 0 annihilates the product")
        return -float(np.log(vals[n0:]).mean())
    state = LogProductState.start(ensemble.dim)
    s_n0 = 0.0
    for step, k in enumerate(idx, start=1):
        state = absorb(state, ensemble.atoms[k])
        if step == n0:
            s_n0 = state.s_n
    return (state.s_n - s_n0) / (n - n0)


def estimate_lyapunov(
    ensemble: MatrixEnsemble, n: int, replicas: int, seed: int
) -> LyapunovEstimate:
    """Monte Carlo estimate of lambda over independent replica products.

    Each replica runs on its own child stream of `seed`, so the estimate
    is bit-identical for fixed (seed, replicas) regardless of scheduling.
    """
    if n < 1 or replicas < 1:
        raise ValueError("need n >= 1 and replicas >= 1")
    if ensemble.has_zero_column_atom():
        raise DegenerateEnsemble(
            "an atom has an all-zero column; no product can become positive"
        )
    rates = np.array(
        [_replica_rate(ensemble, n, child_rng(seed, i)) for i in range(replicas)]
    )
    lam = float(rates.mean())
    if replicas > 1:
        hw = _CI_Z * float(rates.std(ddof=1)) / math.sqrt(replicas)
    else:
        hw = 0.0
    return LyapunovEstimate(lam, hw, n, replicas)


def sigma_diagnostic(ensemble: MatrixEnsemble, n: int, rng: np.random.Generator) -> float:
    """One sampled value of sum over k of ||A_1 ... A_k||, truncated at n.

    Purely a Monte Carlo diagnostic of the product-norm series; carries no
    contract beyond finiteness for subcritical ensembles.
    """
    state = LogProductState.start(ensemble.dim)
    total = 0.0
    for _ in range(n):
        state = absorb(state, sample_matrix(ensemble, rng))
        total += math.exp(state.log_norm)
    return total


def sample_sn(ensemble: MatrixEnsemble, n: int, replicas: int, seed: int) -> np.ndarray:
    """S_n = -ln||A_n ... A_1|| across replicas (batched, per-replica streams)."""
    if ensemble.has_zero_column_atom():
        raise DegenerateEnsemble("an atom has an all-zero column")
    idx = np.stack(
        [ensemble.sample_index(child_rng(seed, i), size=n) for i in range(replicas)]
    )  # (replicas, n)
    d = ensemble.dim
    atom_stack = np.stack(ensemble.atoms)  # (k, d, d)
    prod = np.broadcast_to(np.eye(d), (replicas, d, d)).copy()
    log_norm = np.zeros(replicas)
    for step in range(n):
        prod = np.matmul(atom_stack[idx[:, step]], prod)
        nrm = np.abs(prod).sum(axis=2).max(axis=1)
        if np.any(nrm == 0.0):
            raise ZeroProduct(f"product annihilated at step {step + 1}")
        prod /= nrm[:, None, None]
        log_norm += np.log(nrm)
    return -log_norm


# ---------------------------------------------------------------------------
# Perron-Frobenius utilities (constant environment)
# ---------------------------------------------------------------------------

_RAYLEIGH_TOL = 1e-12
_POWER_MAX_ITER = 1_000_000


def is_primitive(a: np.ndarray) -> bool:
    """True iff A^k is entrywise positive for some k <= (d-1)^2 + 1.

    The Wielandt bound makes the check deterministic: if no power up to
    that exponent is positive, none is.
    """
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    pattern = a > 0
    power = pattern.copy()
    for _ in range((d - 1) ** 2 + 1):
        if power.all():
            return True
        power = (power.astype(np.int64) @ pattern.astype(np.int64)) > 0
    return False


def spectral_radius(a: np.ndarray, tol: float = _RAYLEIGH_TOL) -> float:
    """Perron root of a primitive nonnegative matrix by power iteration.

    Iterates until successive Rayleigh quotients differ by less than
    `tol`; raises NotPrimitive first, since power iteration may
    oscillate on imprimitive patterns.
    """
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise ValueError("matrix must be nonnegative")
    if not is_primitive(a):
        raise NotPrimitive("matrix is not primitive (some power pattern keeps zeros)")
    d = a.shape[0]
    if d == 1:
        return float(a[0, 0])
    x = np.full(d, 1.0 / d)
    prev = math.inf
    for _ in range(_POWER_MAX_ITER):
        y = a @ x
        rq = float(x @ y) / float(x @ x)
        if abs(rq - prev) < tol:
            return rq
        prev = rq
        x = y / np.abs(y).max()
    return prev


def perron_limit(a: np.ndarray, tol: float = 1e-14) -> tuple[float, np.ndarray]:
    """(rho, H) with H = lim rho^-n A^n, the stabilized power diagnostic.

    H = v w^T / (w^T v) from the right/left Perron vectors, which is the
    limit's exact normalization and immune to the scale drift a slightly
    inexact rho would feed into a naive power stack.
    """
    a = np.asarray(a, dtype=float)
    rho = spectral_radius(a)

    def _vector(mat: np.ndarray) -> np.ndarray:
        x = np.full(mat.shape[0], 1.0 / mat.shape[0])
        for _ in range(_POWER_MAX_ITER):
            y = mat @ x
            y /= np.abs(y).max()
            if np.abs(y - x).max() < tol:
                return y
            x = y
        return x

    v = _vector(a)
    w = _vector(a.T)
    return rho, np.outer(v, w) / float(w @ v)


def check_pr(
    ensemble: MatrixEnsemble, k_steps: int, budget: int = _ENUM_BUDGET
) -> float | None:
    """Enumerated joint-positivity constant.

    Walks every ordered product of K atoms and returns the minimum entry
    kappa if all products are entrywise positive, else None.  Raises
    SupportTooLarge when |support|^K exceeds the enumeration budget.
    """
    if k_steps < 1:
        raise ValueError("K must be >= 1")
    n_atoms = len(ensemble.atoms)
    if n_atoms**k_steps > budget:
        raise SupportTooLarge(f"{n_atoms}^{k_steps} ordered products exceed budget {budget}")
    kappa = math.inf
    for combo in itertools.product(range(n_atoms), repeat=k_steps):
        prod = ensemble.atoms[combo[0]]
        for j in combo[1:]:
            prod = ensemble.atoms[j] @ prod
        low = float(prod.min())
        if low <= 0.0:
            return None
        kappa = min(kappa, low)
    return kappa


# ---------------------------------------------------------------------------
# entry-variation functionals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VariationStats:
    """mu, delta, Delta of a positive matrix (delta <= d * Delta always)."""

    mu: float
    delta: float
    big_delta: float


def matrix_mu(a: np.ndarray) -> float:
    """mu(A) = min over columns of the column maximum."""
    a = np.asarray(a, dtype=float)
    return float(a.max(axis=0).min())


def matrix_delta(a: np.ndarray) -> float:
    """delta_A = ||A||_1 / mu(A), in [1, inf]; requires A != 0."""
    a = np.asarray(a, dtype=float)
    if np.all(a == 0.0):
        raise ZeroMatrix("delta undefined for the zero matrix")
    mu = matrix_mu(a)
    return math.inf if mu == 0.0 else col_norm(a) / mu


def matrix_big_delta(a: np.ndarray) -> float:
    """Delta_A = max same-row / same-column entry ratio; positive A only."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0.0):
        raise NonPositive("Delta undefined unless all entries are positive")
    row = float((a.max(axis=1) / a.min(axis=1)).max())
    col = float((a.max(axis=0) / a.min(axis=0)).max())
    return max(row, col)


def variation_stats(a: np.ndarray) -> VariationStats:
    """All three variation functionals of a strictly positive matrix."""
    return VariationStats(matrix_mu(a), matrix_delta(a), matrix_big_delta(a))
