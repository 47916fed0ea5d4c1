"""Innovation and immigration laws.

Each law knows how to sample itself by inverse transform and how to
evaluate its CDF/tail exactly, both at plain arguments x and at
log-scale arguments t = ln x.  The log-scale entry points exist because
the series criteria evaluate P[||Y|| <= y*e^(m*lambda)] for m up to 1e6,
far beyond float range for the plain argument.

`tail_class` reports the analytic tail metadata the classifier needs:
whether E[ln_+ ||Y||] is finite, the limsup/liminf of t * P[ln||Y|| > t],
and whether the regularity hypothesis on P[||Y|| > e^x] holds.

Vector innovations are supported through `scaled_vector`, which lifts a
scalar law to [0, inf)^d with i.i.d. components; its cdf/tail refer to
the sup-norm of the vector, whose CDF is the d-th power of the
component CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import Unsupported

FINITE = "finite"
INFINITE = "infinite"
UNKNOWN = "unknown"
YES = "yes"
NO = "no"

_DISCRETE_TABLE_CAP = 100_000


def _wrap(x, fn):
    """Apply an array function, preserving scalar-in scalar-out."""
    arr = np.asarray(x, dtype=float)
    out = fn(np.atleast_1d(arr))
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


@dataclass(frozen=True)
class TailClass:
    """Analytic tail metadata of a law (about t * P[ln||Y|| > t])."""

    log_moment_finite: str  # FINITE / INFINITE / UNKNOWN
    reg_satisfied: str      # YES / NO / UNKNOWN
    limsup_t_ln_tail: float
    liminf_t_ln_tail: float


class InnovationLaw:
    """Base law over [0, inf) (or [0, inf)^d for scaled_vector).

    Subclasses implement `_tail_arr` (tail at plain x) and `_tail_ln_arr`
    (tail at t = ln x); everything else derives from those plus
    `_quantile_arr` for inverse-transform sampling.
    """

    kind: str = "abstract"
    dim: int = 1  # >1 only for scaled_vector

    # -- evaluation ---------------------------------------------------------

    def cdf(self, x):
        """P[||Y|| <= x]."""
        return _wrap(x, lambda a: 1.0 - self._tail_arr(a))

    def tail(self, x):
        """P[||Y|| > x], exactly 1 - cdf."""
        return _wrap(x, self._tail_arr)

    def cdf_ln(self, t):
        """P[ln||Y|| <= t] = P[||Y|| <= e^t], stable for huge |t|."""
        return _wrap(t, lambda a: 1.0 - self._tail_ln_arr(a))

    def tail_ln(self, t):
        """P[ln||Y|| > t], stable for huge |t|."""
        return _wrap(t, self._tail_ln_arr)

    def ln_cdf_ln(self, t):
        """ln P[||Y|| <= e^t]; -inf where the probability is 0."""

        def f(a):
            tail = self._tail_ln_arr(a)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.log1p(-tail)
            out[tail >= 1.0] = -np.inf
            return out

        return _wrap(t, f)

    # -- sampling -----------------------------------------------------------

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Inverse-transform sample; shape () or (size,) ((size, d) for vectors)."""
        u = rng.random(size if size is not None else 1)
        out = self._quantile_arr(u)
        return float(out[0]) if size is None else out

    def sample_ln(self, rng: np.random.Generator, size: int | None = None):
        """ln of a sample, computed without overflow where possible."""
        u = rng.random(size if size is not None else 1)
        out = self._quantile_ln_arr(u)
        return float(out[0]) if size is None else out

    # -- metadata -----------------------------------------------------------

    @property
    def integer_valued(self) -> bool:
        return False

    def mean(self) -> float:
        raise Unsupported(f"mean not available for law kind '{self.kind}'")

    def upper_bound(self) -> float | None:
        """Essential sup of the law, or None if unbounded."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError

    # -- internals ----------------------------------------------------------

    def _tail_arr(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _tail_ln_arr(self, t: np.ndarray) -> np.ndarray:
        # Default: exponentiate with saturation. Heavy-tailed laws override.
        with np.errstate(over="ignore"):
            x = np.exp(t)
        return self._tail_arr(x)

    def _quantile_arr(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _quantile_ln_arr(self, u: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self._quantile_arr(u))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"


# ---------------------------------------------------------------------------
# scalar families
# ---------------------------------------------------------------------------


class LogPareto(InnovationLaw):
    """P[ln(1+Y) > t] = (1 + beta*t)^(-p) for t >= 0.

    The log-moment trichotomy is controlled by p: E[ln_+ Y] is finite iff
    p > 1, and t * P[ln Y > t] tends to 0 (p > 1), 1/beta (p = 1), or
    infinity (p < 1).
    """

    kind = "log_pareto"

    def __init__(self, beta: float, p: float):
        if beta <= 0 or p <= 0:
            raise ValueError("log_pareto requires beta > 0 and p > 0")
        self.beta = float(beta)
        self.p = float(p)

    def _tail_arr(self, x):
        out = np.ones_like(x)
        pos = x > -1.0
        out[pos] = (1.0 + self.beta * np.log1p(np.maximum(x[pos], 0.0))) ** (-self.p)
        return out

    def _tail_ln_arr(self, t):
        # ln(1 + e^t) without overflow
        s = np.logaddexp(0.0, t)
        return (1.0 + self.beta * s) ** (-self.p)

    def _quantile_arr(self, u):
        w = ((1.0 - u) ** (-1.0 / self.p) - 1.0) / self.beta
        with np.errstate(over="ignore"):
            return np.expm1(w)

    def _quantile_ln_arr(self, u):
        # ln(e^w - 1) = w + ln(1 - e^-w); exact even when e^w overflows
        w = ((1.0 - u) ** (-1.0 / self.p) - 1.0) / self.beta
        with np.errstate(divide="ignore"):
            return w + np.log1p(-np.exp(-w))

    def to_json(self):
        return {"kind": self.kind, "beta": self.beta, "p": self.p}


class ParetoTail(InnovationLaw):
    """P[Y > x] = min(1, a/x); support [a, inf)."""

    kind = "pareto_tail"

    def __init__(self, a: float):
        if a <= 0:
            raise ValueError("pareto_tail requires a > 0")
        self.a = float(a)

    def _tail_arr(self, x):
        with np.errstate(divide="ignore", over="ignore"):
            return np.minimum(1.0, self.a / np.maximum(x, 0.0))

    def _tail_ln_arr(self, t):
        # P[Y > e^t] = min(1, a e^-t), saturating at 1 below ln a
        la = math.log(self.a)
        out = np.ones_like(t)
        m = t > la
        out[m] = np.exp(la - t[m])
        return out

    def _quantile_arr(self, u):
        return self.a / (1.0 - u)

    def _quantile_ln_arr(self, u):
        return math.log(self.a) - np.log1p(-u)

    def to_json(self):
        return {"kind": self.kind, "a": self.a}


class Geometric(InnovationLaw):
    """Geometric on N0 with continuation probability q: P[Y=k] = (1-q) q^k."""

    kind = "geometric"

    def __init__(self, q: float):
        if not 0.0 < q < 1.0:
            raise ValueError("geometric requires q in (0,1)")
        self.q = float(q)

    def _tail_arr(self, x):
        # P[Y > x] = q^(floor(x)+1) for x >= 0
        out = np.ones_like(x)
        nn = x >= 0.0
        k = np.floor(x[nn]) + 1.0
        out[nn] = np.exp(k * math.log(self.q))
        return out

    def _tail_ln_arr(self, t):
        out = np.ones_like(t)
        # e^t beyond 2^53: tail underflows to exactly 0 long before that
        big = t > 60.0
        out[big] = 0.0
        rest = ~big
        with np.errstate(over="ignore"):
            x = np.exp(t[rest])
        out[rest] = self._tail_arr(np.maximum(x, -1.0))
        return out

    def _quantile_arr(self, u):
        k = np.ceil(np.log1p(-u) / math.log(self.q)) - 1.0
        return np.maximum(k, 0.0)

    @property
    def integer_valued(self):
        return True

    def mean(self):
        return self.q / (1.0 - self.q)

    def to_json(self):
        return {"kind": self.kind, "q": self.q}


class Poisson(InnovationLaw):
    """Poisson with the given mean."""

    kind = "poisson"

    def __init__(self, mean: float):
        if mean < 0:
            raise ValueError("poisson requires mean >= 0")
        self.mu = float(mean)

    def _tail_arr(self, x):
        out = np.ones_like(x)
        nn = x >= 0.0
        out[nn] = stats.poisson.sf(np.floor(x[nn]), self.mu)
        return out

    def _tail_ln_arr(self, t):
        out = np.ones_like(t)
        big = t > 60.0
        out[big] = 0.0
        rest = ~big
        out[rest] = self._tail_arr(np.exp(t[rest]))
        return out

    def _quantile_arr(self, u):
        # ppf(0) is -1 in scipy's convention; the law lives on N0
        return np.maximum(stats.poisson.ppf(u, self.mu).astype(float), 0.0)

    @property
    def integer_valued(self):
        return True

    def mean(self):
        return self.mu

    def to_json(self):
        return {"kind": self.kind, "mean": self.mu}


class Deterministic(InnovationLaw):
    """Point mass at v >= 0."""

    kind = "deterministic"

    def __init__(self, value: float):
        if value < 0:
            raise ValueError("deterministic requires value >= 0")
        self.value = float(value)

    def _tail_arr(self, x):
        return (x < self.value).astype(float)

    def _tail_ln_arr(self, t):
        if self.value == 0.0:
            return np.zeros_like(t)
        return (t < math.log(self.value)).astype(float)

    def _quantile_arr(self, u):
        return np.full_like(u, self.value)

    @property
    def integer_valued(self):
        return float(self.value).is_integer()

    def mean(self):
        return self.value

    def upper_bound(self):
        return self.value

    def to_json(self):
        return {"kind": self.kind, "value": self.value}


class DiscreteTable(InnovationLaw):
    """Finite table of atoms; inverse transform by binary search."""

    kind = "discrete_table"

    def __init__(self, values, probs):
        values = np.asarray(values, dtype=float)
        probs = np.asarray(probs, dtype=float)
        if values.ndim != 1 or values.shape != probs.shape:
            raise ValueError("discrete_table requires matching 1-d values/probs")
        if len(values) > _DISCRETE_TABLE_CAP:
            raise ValueError(f"discrete_table capped at {_DISCRETE_TABLE_CAP} atoms")
        if np.any(values < 0) or np.any(probs < 0):
            raise ValueError("discrete_table requires nonnegative values and probs")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("discrete_table probabilities must sum to 1")
        order = np.argsort(values, kind="stable")
        self.values = values[order]
        self.probs = probs[order]
        self._cum = np.cumsum(self.probs)
        self._cum[-1] = 1.0

    def _tail_arr(self, x):
        idx = np.searchsorted(self.values, x, side="right")
        cum = np.concatenate(([0.0], self._cum))
        return 1.0 - cum[idx]

    def _quantile_arr(self, u):
        idx = np.searchsorted(self._cum, u, side="right")
        return self.values[np.minimum(idx, len(self.values) - 1)]

    @property
    def integer_valued(self):
        return bool(np.all(self.values == np.floor(self.values)))

    def mean(self):
        return float(np.dot(self.values, self.probs))

    def upper_bound(self):
        return float(self.values[-1])

    def to_json(self):
        return {"kind": self.kind, "values": self.values.tolist(), "probs": self.probs.tolist()}


# ---------------------------------------------------------------------------
# compositions
# ---------------------------------------------------------------------------


class ScaledVector(InnovationLaw):
    """Scalar law lifted to [0, inf)^d with i.i.d. components.

    cdf/tail refer to the sup-norm: P[||Y|| <= x] = base.cdf(x)^d.
    """

    kind = "scaled_vector"

    def __init__(self, base: InnovationLaw, dim: int):
        if dim < 1:
            raise ValueError("scaled_vector requires dim >= 1")
        if base.dim != 1:
            raise ValueError("scaled_vector base must be scalar")
        self.base = base
        self.dim = int(dim)

    def _tail_arr(self, x):
        with np.errstate(divide="ignore"):
            return -np.expm1(self.dim * np.log1p(-self.base._tail_arr(x)))

    def _tail_ln_arr(self, t):
        with np.errstate(divide="ignore"):
            return -np.expm1(self.dim * np.log1p(-self.base._tail_ln_arr(t)))

    def sample(self, rng, size=None):
        n = 1 if size is None else size
        out = np.stack([self.base.sample(rng, n) for _ in range(self.dim)], axis=-1)
        return out[0] if size is None else out

    def sample_ln(self, rng, size=None):
        raise Unsupported("sample_ln is for scalar laws; sample vectors directly")

    @property
    def integer_valued(self):
        return self.base.integer_valued

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(), "dim": self.dim}


class ExpOf(InnovationLaw):
    """Y = exp(V) for V distributed per the base law.

    Turns a plain tail on V into a log-scale tail on Y:
    P[ln Y > t] = P[V > t].  The workhorse for super-heavy-tailed
    scenarios, e.g. exp of a Pareto tail gives t * P[ln Y > t] -> a.
    """

    kind = "exp_of"

    def __init__(self, base: InnovationLaw):
        if base.dim != 1:
            raise ValueError("exp_of base must be scalar")
        self.base = base

    def _tail_arr(self, x):
        with np.errstate(divide="ignore"):
            t = np.log(np.maximum(x, 0.0))
        return self.base._tail_arr(t)  # P[e^V > x] = P[V > ln x]

    def _tail_ln_arr(self, t):
        return self.base._tail_arr(t)

    def _quantile_arr(self, u):
        with np.errstate(over="ignore"):
            return np.exp(self.base._quantile_arr(u))

    def _quantile_ln_arr(self, u):
        return self.base._quantile_arr(u)

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json()}


class FloorOf(InnovationLaw):
    """Y = floor(V): the integer-part variant of a continuous base law."""

    kind = "floor_of"

    def __init__(self, base: InnovationLaw):
        if base.dim != 1:
            raise ValueError("floor_of base must be scalar")
        self.base = base

    def _tail_arr(self, x):
        # P[floor(V) > x] = P[V >= floor(x)+1]; base assumed atomless there
        return self.base._tail_arr(np.floor(np.maximum(x, -1.0)) + 1.0)

    def _tail_ln_arr(self, t):
        # flooring moves ln-arguments by less than e^-t; negligible beyond t ~ 40
        small = t <= 40.0
        out = np.empty_like(t)
        out[small] = self._tail_arr(np.exp(t[small]))
        out[~small] = self.base._tail_ln_arr(t[~small])
        return out

    def _quantile_arr(self, u):
        return np.floor(self.base._quantile_arr(u))

    def _quantile_ln_arr(self, u):
        # ln floor(V) differs from ln V by < e^-ln(V); keep the stable base value
        ln_v = self.base._quantile_ln_arr(u)
        small = ln_v <= 40.0
        out = ln_v.copy()
        with np.errstate(divide="ignore"):
            out[small] = np.log(np.floor(np.exp(ln_v[small])))
        return out

    @property
    def integer_valued(self):
        return True

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json()}


class ZeroInflated(InnovationLaw):
    """Mixture: Y = 0 with probability p_zero, else drawn from the base law.

    Keeps the tail shape of the base (scaled by 1 - p_zero) while putting
    mass at zero, which several of the lattice models require.
    """

    kind = "zero_inflated"

    def __init__(self, base: InnovationLaw, p_zero: float):
        if not 0.0 <= p_zero < 1.0:
            raise ValueError("zero_inflated requires p_zero in [0, 1)")
        if base.dim != 1:
            raise ValueError("zero_inflated base must be scalar")
        self.base = base
        self.p_zero = float(p_zero)

    def _tail_arr(self, x):
        out = np.ones_like(x)
        nn = x >= 0.0
        out[nn] = (1.0 - self.p_zero) * self.base._tail_arr(x[nn])
        return out

    def _tail_ln_arr(self, t):
        return (1.0 - self.p_zero) * self.base._tail_ln_arr(t)

    def _quantile_arr(self, u):
        rescaled = np.maximum(u - self.p_zero, 0.0) / (1.0 - self.p_zero)
        return np.where(u < self.p_zero, 0.0, self.base._quantile_arr(rescaled))

    @property
    def integer_valued(self):
        return self.base.integer_valued

    def mean(self):
        return (1.0 - self.p_zero) * self.base.mean()

    def upper_bound(self):
        return self.base.upper_bound()

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(), "p_zero": self.p_zero}


class Shifted(InnovationLaw):
    """Y = V + offset with offset >= 0; tail asymptotics unchanged."""

    kind = "shifted"

    def __init__(self, base: InnovationLaw, offset: float):
        if offset < 0:
            raise ValueError("shifted requires offset >= 0")
        if base.dim != 1:
            raise ValueError("shifted base must be scalar")
        self.base = base
        self.offset = float(offset)

    def _tail_arr(self, x):
        return self.base._tail_arr(x - self.offset)

    def _tail_ln_arr(self, t):
        big = t > 60.0  # e^t - offset == e^t at double precision
        out = np.empty_like(t)
        out[big] = self.base._tail_ln_arr(t[big])
        out[~big] = self.base._tail_arr(np.exp(t[~big]) - self.offset)
        return out

    def _quantile_arr(self, u):
        return self.base._quantile_arr(u) + self.offset

    @property
    def integer_valued(self):
        return self.base.integer_valued and float(self.offset).is_integer()

    def mean(self):
        return self.base.mean() + self.offset

    def upper_bound(self):
        ub = self.base.upper_bound()
        return None if ub is None else ub + self.offset

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json(), "offset": self.offset}


# ---------------------------------------------------------------------------
# tail classification
# ---------------------------------------------------------------------------


def tail_class(law: InnovationLaw) -> TailClass:
    """Analytic moment/regularity metadata of the law's log-tail.

    DiscreteTable deliberately reports Unknown so the classifier
    refuses sufficient-condition shortcuts and falls back to partial
    products only.
    """
    if isinstance(law, LogPareto):
        if law.p > 1:
            return TailClass(FINITE, YES, 0.0, 0.0)
        if law.p == 1:
            return TailClass(INFINITE, YES, 1.0 / law.beta, 1.0 / law.beta)
        return TailClass(INFINITE, YES, math.inf, math.inf)
    if isinstance(law, (ParetoTail, Geometric, Poisson, Deterministic)):
        return TailClass(FINITE, YES, 0.0, 0.0)
    if isinstance(law, DiscreteTable):
        return TailClass(UNKNOWN, UNKNOWN, math.nan, math.nan)
    if isinstance(law, ScaledVector):
        base = tail_class(law.base)
        if base.log_moment_finite == UNKNOWN:
            return base
        # P[ln||Y|| > t] ~ d * P[ln V > t] when the component tail vanishes
        return TailClass(
            base.log_moment_finite,
            base.reg_satisfied,
            law.dim * base.limsup_t_ln_tail,
            law.dim * base.liminf_t_ln_tail,
        )
    if isinstance(law, ExpOf):
        return _tail_class_exp(law.base)
    if isinstance(law, (FloorOf, Shifted)):
        return tail_class(law.base)
    if isinstance(law, ZeroInflated):
        base = tail_class(law.base)
        if base.log_moment_finite == UNKNOWN:
            return base
        scale = 1.0 - law.p_zero
        return TailClass(
            base.log_moment_finite,
            base.reg_satisfied,
            scale * base.limsup_t_ln_tail,
            scale * base.liminf_t_ln_tail,
        )
    return TailClass(UNKNOWN, UNKNOWN, math.nan, math.nan)


def _tail_class_exp(base: InnovationLaw) -> TailClass:
    """Tail class of exp(V): t * P[V > t] limits and E[V_+] finiteness."""
    if isinstance(base, ParetoTail):
        return TailClass(INFINITE, YES, base.a, base.a)
    if isinstance(base, (Geometric, Poisson, Deterministic)):
        return TailClass(FINITE, YES, 0.0, 0.0)
    if isinstance(base, DiscreteTable):
        return TailClass(FINITE, YES, 0.0, 0.0)  # finite table => bounded V
    if isinstance(base, LogPareto):
        return TailClass(INFINITE, YES, math.inf, math.inf)  # slowly varying V-tail
    if isinstance(base, Shifted):
        return _tail_class_exp(base.base)
    return TailClass(UNKNOWN, UNKNOWN, math.nan, math.nan)


# ---------------------------------------------------------------------------
# JSON construction
# ---------------------------------------------------------------------------

_SCALAR_KINDS = {
    "log_pareto": lambda d: LogPareto(d["beta"], d["p"]),
    "pareto_tail": lambda d: ParetoTail(d["a"]),
    "geometric": lambda d: Geometric(d["q"]),
    "poisson": lambda d: Poisson(d["mean"]),
    "deterministic": lambda d: Deterministic(d["value"]),
    "discrete_table": lambda d: DiscreteTable(d["values"], d["probs"]),
}


def law_from_json(obj: dict) -> InnovationLaw:
    """Build a law from its JSON literal, e.g. {"kind": "log_pareto", ...}."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("law literal must be an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind in _SCALAR_KINDS:
            return _SCALAR_KINDS[kind](obj)
        if kind == "scaled_vector":
            return ScaledVector(law_from_json(obj["base"]), obj["dim"])
        if kind == "exp_of":
            return ExpOf(law_from_json(obj["base"]))
        if kind == "floor_of":
            return FloorOf(law_from_json(obj["base"]))
        if kind == "shifted":
            return Shifted(law_from_json(obj["base"]), obj["offset"])
        if kind == "zero_inflated":
            return ZeroInflated(law_from_json(obj["base"]), obj["p_zero"])
    except KeyError as exc:
        raise ValueError(f"law kind '{kind}' missing parameter {exc}") from exc
    raise ValueError(f"unknown law kind '{kind}'")
