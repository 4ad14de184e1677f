"""Exact absorption-time and strong stationary time laws.

Every law here is evaluated through the pure-birth dual: the CDF at t is the
inner product of the dual's occupation vector at time t (started at level 0,
advanced through the upper bidiagonal kernel) with the link's target column.
That single evaluation path covers the closed-form cases (products and
mixtures of geometrics, hypoexponentials) and the numeric fallback for
complex or signed spectra; the closed forms are what the kind attribute and
the sampling routines expose when the spectral data supports them.

Discrete laws live on {0, 1, 2, ...}; continuous laws are their Poisson
mixtures through a uniformization rate.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .config import IMAG_PROB_TOL, MAX_HORIZON, TOL_NONNEG, TOL_SERIES, tol_alg
from .errors import (
    HorizonExceeded,
    ImaginaryResidue,
    MonotoneHypothesisFails,
    NotErgodic,
    PoleAtU,
    PreconditionError,
    TargetNotAccessible,
    ZeroSuperdiagonal,
)
from .chains import (
    RateGenerator,
    TransitionKernel,
    as_initial,
    classify_kernel,
    classify_generator,
    require_absorbing,
    stationary_law,
    uniformize,
)
from .duality import build_link, check_monotone_reversal, separation
from .spectral import eigenvalues, spectral_polynomials

__all__ = [
    "DiscreteAbsorptionLaw",
    "ContinuousAbsorptionLaw",
    "absorption_law",
    "sst_law",
    "hypoexp_law",
    "resolvent_entry",
]

_POLE_TOL = 1e-12


def _real_probability(values: np.ndarray, context: str):
    """Strip an imaginary part below tolerance; raise beyond it."""
    if not np.iscomplexobj(values):
        return values
    worst = float(np.abs(values.imag).max()) if values.size else 0.0
    if worst > IMAG_PROB_TOL:
        raise ImaginaryResidue(f"{context} retained imaginary part {worst!r}")
    return values.real


def resolvent_entry(thetas, u, i: int, j: int):
    """Entry (i, j) of (I - u Phat)^{-1} for the pure-birth dual.

    ``thetas`` is the full diagonal (unit eigenvalue last).  Closed form:
    product of (1 - theta_r) u over r = i..j-1, divided by the product of
    (1 - theta_r u) over r = i..j.
    """
    th = np.asarray(thetas)
    if i > j:
        return 0.0
    for r in range(i, j + 1):
        if abs(1.0 - th[r] * u) <= _POLE_TOL * (1.0 + abs(th[r] * u)):
            raise PoleAtU(f"resolvent evaluated at a pole: theta_{r} u = {(th[r] * u).item()!r}")
    num = np.prod([(1.0 - th[r]) * u for r in range(i, j)]) if j > i else 1.0
    den = np.prod([1.0 - th[r] * u for r in range(i, j + 1)])
    return num / den


class DiscreteAbsorptionLaw:
    """Law of a hitting time evaluated through the pure-birth dual.

    Parameters
    ----------
    thetas : array
        The d non-unit eigenvalues in canonical order.
    level_weights : array
        The link's target column w_j = Lambda(j, d) (rescaled for the strong
        stationary route); the last entry must be 1 within tolerance and is
        snapped to exactly 1.

    Attributes
    ----------
    weights : ndarray
        The mixture weights a_0..a_d (successive differences of
        ``level_weights``).
    kind : str
        'geometric_convolution', 'mixture', or 'numeric_cdf'.
    stochastic : bool
        True when the closed-form sampling representation exists.
    """

    def __init__(self, thetas, level_weights):
        thetas = np.atleast_1d(np.asarray(thetas))
        w = np.atleast_1d(np.asarray(level_weights)).copy()
        if len(w) != len(thetas) + 1:
            raise ValueError("level_weights must have one more entry than thetas")
        self.normalization_residual = float(abs(w[-1] - 1.0))
        if self.normalization_residual > tol_alg(len(w)):
            raise PreconditionError(
                f"target column does not reach 1 (residual {self.normalization_residual!r})"
            )
        w[-1] = 1.0
        if np.iscomplexobj(thetas) and np.abs(thetas.imag).max() == 0.0:
            thetas = thetas.real
        if np.iscomplexobj(w) and np.abs(w.imag).max() == 0.0:
            w = w.real
        self.thetas = thetas
        self.level_weights = w
        self.weights = np.concatenate([[w[0]], np.diff(w)])

        real = not (np.iscomplexobj(thetas) or np.iscomplexobj(w))
        thetas_ok = bool(real and thetas.min() >= 0.0 and thetas.max() < 1.0)
        weights_ok = bool(real and self.weights.min() >= -TOL_NONNEG)
        self.stochastic = thetas_ok and weights_ok
        if self.stochastic and w[0] == 0.0 and np.all(w[:-1] == 0.0):
            self.kind = "geometric_convolution"
        elif self.stochastic:
            self.kind = "mixture"
        else:
            self.kind = "numeric_cdf"

        self._dtype = float if real else complex
        hold = np.append(np.asarray(thetas, dtype=self._dtype), 1.0)
        self._hold = hold
        self._move = 1.0 - hold
        v0 = np.zeros(len(w), dtype=self._dtype)
        v0[0] = 1.0
        self._occ = v0
        self._cdf_cache = [complex(v0 @ w) if self._dtype is complex else float(v0 @ w)]

    @property
    def d(self) -> int:
        return len(self.thetas)

    def __repr__(self) -> str:
        return f"DiscreteAbsorptionLaw(kind={self.kind!r}, d={self.d})"

    # -- evaluation ----------------------------------------------------

    def _extend(self, t: int) -> None:
        while len(self._cdf_cache) <= t:
            v = self._occ
            nxt = v * self._hold
            nxt[1:] += v[:-1] * self._move[:-1]
            self._occ = nxt
            val = nxt @ self.level_weights
            self._cdf_cache.append(complex(val) if self._dtype is complex else float(val))

    def _cdf_raw(self, t: int):
        if t < 0:
            return 0.0
        self._extend(t)
        return self._cdf_cache[t]

    def cdf(self, t):
        """P(T <= t) for integer t (scalar or array)."""
        ts = np.atleast_1d(np.asarray(t, dtype=int))
        vals = np.array([self._cdf_raw(int(x)) for x in ts])
        vals = _real_probability(vals, "cdf")
        return float(vals[0]) if np.ndim(t) == 0 else vals

    def pmf(self, t):
        """P(T = t) for integer t (scalar or array)."""
        ts = np.atleast_1d(np.asarray(t, dtype=int))
        vals = np.array([self._cdf_raw(int(x)) - self._cdf_raw(int(x) - 1) for x in ts])
        vals = _real_probability(vals, "pmf")
        return float(vals[0]) if np.ndim(t) == 0 else vals

    def pgf(self, u, form: str = "product"):
        """E[u^T], by the mixture product form or through the dual resolvent.

        Both forms are exact; they are kept separate so they can cross-check
        each other.  Raises ``PoleAtU`` within ``1e-12`` of a pole 1/theta_j.
        """
        if form not in ("product", "resolvent"):
            raise ValueError(f"unknown pgf form {form!r}")
        th = self.thetas
        for theta in th:
            if abs(1.0 - theta * u) <= _POLE_TOL * (1.0 + abs(theta * u)):
                raise PoleAtU(f"pgf evaluated at a pole of 1/(1 - theta u), theta={theta!r}")
        if form == "product":
            factors = (1.0 - th) * u / (1.0 - th * u)
            prefixes = np.concatenate([[1.0], np.cumprod(factors)])
            total = np.sum(self.weights * prefixes)
        else:
            d = self.d
            # term_j = (1 - u) * resolvent(0, j); the j = d term cancels its
            # (1 - u) pole analytically, so it is assembled without that factor
            num = np.concatenate([[1.0], np.cumprod((1.0 - th) * u)])
            den = np.concatenate([[1.0], np.cumprod(1.0 - th * u)])
            total = 0.0
            for j in range(d):
                total += self.level_weights[j] * (1.0 - u) * num[j] / den[j + 1]
            total += self.level_weights[d] * num[d] / den[d]
        total = np.asarray(total)
        if np.iscomplexobj(total) and not np.iscomplexobj(np.asarray(u)):
            total = _real_probability(total.reshape(1), "pgf")[0]
        return complex(total) if np.iscomplexobj(total) else float(total)

    def mean(self):
        """E[T] = sum over j < d of (1 - w_j) / (1 - theta_j)."""
        total = np.sum((1.0 - self.level_weights[:-1]) / (1.0 - self.thetas))
        total = _real_probability(np.atleast_1d(total), "mean")
        return float(total[0])

    def quantile(self, q: float) -> int:
        """Smallest t with F(t) >= q."""
        if not 0.0 <= q < 1.0 + 1e-15:
            raise ValueError("quantile level must be in [0, 1)")
        t = 1
        while True:
            self._extend(min(t, MAX_HORIZON))
            arr = _real_probability(np.asarray(self._cdf_cache), "cdf")
            hits = np.nonzero(arr >= q)[0]
            if len(hits):
                return int(hits[0])
            if t >= MAX_HORIZON:
                raise HorizonExceeded(f"quantile {q} unreachable within {MAX_HORIZON} steps")
            t *= 2

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw by structure: mixture index, then independent geometric factors."""
        if not self.stochastic:
            raise PreconditionError(f"cannot sample a {self.kind} law by structure")
        n = 1 if size is None else int(size)
        probs = np.clip(self.weights, 0.0, None)
        probs /= probs.sum()
        ks = rng.choice(len(probs), size=n, p=probs)
        out = np.zeros(n, dtype=np.int64)
        for j, theta in enumerate(self.thetas):
            draws = rng.geometric(1.0 - theta, size=n)
            out += np.where(ks > j, draws, 0)
        return int(out[0]) if size is None else out


class ContinuousAbsorptionLaw:
    """Poisson mixture of a discrete law through a uniformization rate.

    ``rates`` holds the exponential rates theta -> rate * (1 - theta) when the
    spectrum is real (they are positive even for negative eigenvalues); the
    law is then a hypoexponential or a mixture of hypoexponential prefixes.
    """

    def __init__(self, discrete: DiscreteAbsorptionLaw, rate: float):
        self.discrete = discrete
        self.rate = float(rate)
        th = discrete.thetas
        if np.iscomplexobj(th):
            self.rates = None
        else:
            self.rates = self.rate * (1.0 - th)
        # exponential-factor sampling only needs positive real rates and
        # nonnegative weights; negative eigenvalues are fine here even though
        # the embedded discrete law has no geometric representation then
        weights_ok = bool(
            not np.iscomplexobj(discrete.weights) and discrete.weights.min() >= -TOL_NONNEG
        )
        if self.rates is not None and weights_ok and np.all(discrete.level_weights[:-1] == 0.0):
            self.kind = "hypoexponential"
        elif self.rates is not None and weights_ok:
            self.kind = "mixture"
        else:
            self.kind = "numeric_cdf"

    def __repr__(self) -> str:
        return f"ContinuousAbsorptionLaw(kind={self.kind!r}, d={self.discrete.d})"

    def cdf(self, t):
        """P(T <= t) as a Poisson-weighted sum of discrete CDF values."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if (ts < 0).any():
            raise ValueError("times must be nonnegative")
        mus = self.rate * ts
        k_max = int(stats.poisson.isf(TOL_SERIES, mus.max())) if ts.size else 0
        self.discrete._extend(k_max)
        f_disc = _real_probability(np.asarray(self.discrete._cdf_cache[: k_max + 1]), "cdf")
        ks = np.arange(k_max + 1)
        out = np.empty(len(ts))
        for i, mu in enumerate(mus):
            pmf = stats.poisson.pmf(ks, mu)
            out[i] = float(pmf @ f_disc + (1.0 - pmf.sum()) * f_disc[-1])
        return float(out[0]) if np.ndim(t) == 0 else out

    def laplace(self, s, form: str = "product"):
        """E[exp(-s T)] = discrete pgf at u = rate / (rate + s)."""
        return self.discrete.pgf(self.rate / (self.rate + s), form=form)

    def mean(self) -> float:
        return self.discrete.mean() / self.rate

    def quantile(self, q: float) -> float:
        """Smallest t with F(t) >= q, by bracketed bisection."""
        if not 0.0 <= q < 1.0:
            raise ValueError("quantile level must be in [0, 1)")
        if self.cdf(0.0) >= q:
            return 0.0
        hi = max(self.mean(), 1.0 / self.rate)
        for _ in range(80):
            if self.cdf(hi) >= q:
                break
            hi *= 2.0
        else:
            raise HorizonExceeded(f"quantile {q} unreachable")
        lo = 0.0
        while hi - lo > 1e-12 * (1.0 + hi):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) >= q:
                hi = mid
            else:
                lo = mid
        return hi

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw by structure: mixture index, then independent exponential factors."""
        if self.kind == "numeric_cdf":
            raise PreconditionError("cannot sample a numeric_cdf law by structure")
        disc = self.discrete
        n = 1 if size is None else int(size)
        probs = np.clip(disc.weights, 0.0, None)
        probs /= probs.sum()
        ks = rng.choice(len(probs), size=n, p=probs)
        out = np.zeros(n)
        for j, nu in enumerate(self.rates):
            draws = rng.exponential(1.0 / nu, size=n)
            out += np.where(ks > j, draws, 0.0)
        return float(out[0]) if size is None else out


def _is_delta0(vec: np.ndarray) -> bool:
    return vec[0] == 1.0


def absorption_law(kernel: TransitionKernel, m0=None) -> DiscreteAbsorptionLaw:
    """Exact law of the hitting time of the (absorbing) target state.

    Skip-free chains started at 0 go through the structural route: the link is
    lower triangular with unit corner, so the law is the convolution of d
    geometrics (when the spectrum is real nonnegative) without building the
    link at all.  Everything else builds the link and takes the target
    column's successive differences as mixture weights.

    Raises
    ------
    ZeroSuperdiagonal
        Skip-free chain with a vanishing upward step (checked first).
    TargetNotAccessible
        Some state never reaches the target.
    PreconditionError
        Target not absorbing.
    """
    cls = classify_kernel(kernel)
    vec = as_initial(m0, kernel.n)
    if cls.skip_free_up and not cls.superdiag_positive:
        raise ZeroSuperdiagonal("skip-free analysis requires p(i, i+1) > 0 for every i < d")
    if not cls.target_accessible:
        raise TargetNotAccessible("target state is not accessible from every state")
    require_absorbing(kernel)
    spectrum = eigenvalues(kernel, cls)

    if cls.skip_free_up and _is_delta0(vec):
        w = np.zeros(kernel.n, dtype=float if spectrum.all_real else complex)
        w[-1] = 1.0
        law = DiscreteAbsorptionLaw(spectrum.nonunit, w)
    else:
        polys = spectral_polynomials(kernel, spectrum)
        link = build_link(kernel, spectrum, polys, vec)
        law = DiscreteAbsorptionLaw(spectrum.nonunit, link.rows[:, -1])
        law.link = link
    law.spectrum = spectrum
    return law


def sst_law(kernel: TransitionKernel, m0=None, scan_horizon: int | None = None) -> DiscreteAbsorptionLaw:
    """Law of the fastest strong stationary time of an ergodic chain.

    The CDF equals 1 - s(t) (separation from stationarity) whenever the
    separation is minimized at the target state; the target column of the
    link, rescaled by pi(d), supplies the level weights.

    The hypothesis is certified structurally when the time reversal is
    stochastically monotone and the initial ratios m0/pi are nonincreasing
    (point mass at 0 included); otherwise the separation profile is scanned
    up to ``scan_horizon`` (default: until the tail falls below CDF_TAIL).

    Raises
    ------
    NotErgodic
    MonotoneHypothesisFails
        Reversal not monotone, or separation minimizer leaves the target.
    """
    cls = classify_kernel(kernel)
    if not cls.ergodic:
        raise NotErgodic("strong stationary analysis requires an ergodic kernel")
    vec = as_initial(m0, kernel.n)
    pi = stationary_law(kernel)

    monotone = check_monotone_reversal(kernel)
    ratios = vec / pi
    structurally_ok = monotone.monotone and bool(np.all(np.diff(ratios) <= 1e-12))
    if not structurally_ok:
        if not monotone.monotone:
            raise MonotoneHypothesisFails(
                f"time reversal is not stochastically monotone (rows {monotone.witness})"
            )
        profile = separation(kernel, vec, t_max=scan_horizon)
        if not profile.minimized_at_target:
            bad = int(np.nonzero(profile.argmin_state != kernel.d)[0][0])
            raise MonotoneHypothesisFails(
                f"separation is not minimized at the target (first failure at t={bad})"
            )

    spectrum = eigenvalues(kernel, cls)
    polys = spectral_polynomials(kernel, spectrum)
    link = build_link(kernel, spectrum, polys, vec)
    if link.lower_triangular and _is_delta0(vec):
        w = np.zeros(kernel.n, dtype=link.rows.dtype)
        w[-1] = 1.0
    else:
        w = link.rows[:, -1] / pi[-1]
    law = DiscreteAbsorptionLaw(spectrum.nonunit, w)
    law.link = link
    law.spectrum = spectrum
    law.stationary = pi
    return law


def hypoexp_law(gen: RateGenerator, m0=None) -> ContinuousAbsorptionLaw:
    """Exact absorption-time law of a CTMC via uniformization.

    A skip-free generator started at 0 with real spectrum yields the
    hypoexponential with rates theta * (1 - theta_j); the general case is the
    continuous mixture built from the uniformized chain's link.  The discrete
    structure transfers exactly: the uniformized kernel's spectral polynomials
    are polynomials in G, so link, weights and level structure agree with the
    continuous-time intertwining.
    """
    cls = classify_generator(gen)
    vec = as_initial(m0, gen.n)
    if cls.skip_free_up and not cls.superdiag_positive:
        raise ZeroSuperdiagonal("skip-free analysis requires g(i, i+1) > 0 for every i < d")
    if not cls.target_accessible:
        raise TargetNotAccessible("target state is not accessible from every state")
    require_absorbing(gen)
    kernel, rate = uniformize(gen)
    discrete = absorption_law(kernel, vec)
    law = ContinuousAbsorptionLaw(discrete, rate)
    law.generator_class = cls
    return law
