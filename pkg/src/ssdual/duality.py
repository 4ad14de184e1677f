"""Intertwining duals: links, pure-birth dual kernels, mixture weights.

The central objects:

* the link Lambda, whose row i is m0 Q_i (so row 0 is the initial law), which
  intertwines the primal kernel with a pure-birth dual:  Lambda P = Phat Lambda;
* the dual kernel Phat, upper bidiagonal with diagonal theta_0..theta_d and
  superdiagonal 1 - theta_i;
* the mixture weights a_k = Lambda(k, d) - Lambda(k-1, d) (conventions
  Lambda(-1, d) = 0, Lambda(d+1, d) = 1), which express the hitting law as an
  a-mixture of partial sums of independent geometrics;
* the modified dual, which conditions the dual on not yet having produced the
  target: its kernel splits into a climb-or-hold bidiagonal part and a
  rank-one part that jumps straight to the target.

Separation and the stochastic-monotonicity check of the time reversal support
the strong stationary (ergodic) route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CDF_TAIL, MAX_HORIZON, TOL_NONNEG, tol_alg
from .errors import HorizonExceeded, NotErgodic
from .chains import TransitionKernel, as_initial, classify_kernel, stationary_law
from .spectral import SpectralPolynomials, SpectrumReport

__all__ = [
    "LinkMatrix",
    "DualKernel",
    "IntertwiningReport",
    "MixtureWeights",
    "ModifiedDual",
    "MonotoneReport",
    "SeparationProfile",
    "build_link",
    "build_dual",
    "check_intertwining",
    "mixture_weights",
    "build_modified_dual",
    "check_monotone_reversal",
    "separation",
]


@dataclass(frozen=True, slots=True)
class LinkMatrix:
    """Rows are the conditional laws of the primal state given the dual state.

    ``stochastic`` is true when every entry is real and >= -TOL_NONNEG and the
    rows sum to one within tolerance; tiny negatives in [-TOL_NONNEG, 0) are
    clamped to zero in the stored rows (``clamped`` counts them).
    ``lower_triangular`` reports whether everything above the diagonal
    vanishes within the algebraic tolerance.
    """

    rows: np.ndarray
    stochastic: bool
    lower_triangular: bool
    clamped: int
    rowsum_residual: float


@dataclass(frozen=True, slots=True)
class DualKernel:
    """Upper bidiagonal pure-birth kernel: diagonal thetas, superdiagonal 1 - thetas."""

    matrix: np.ndarray
    thetas: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.n - 1


@dataclass(frozen=True, slots=True)
class IntertwiningReport:
    """Residuals of Lambda P = Phat Lambda, one-step and at requested powers."""

    residual: float
    power_residuals: dict[int, float]
    tol: float
    passed: bool


@dataclass(frozen=True, slots=True)
class MixtureWeights:
    """a_0..a_{d+1} with a_k = Lambda(k, d) - Lambda(k-1, d).

    ``weights[d + 1]`` is the boundary convention term 1 - Lambda(d, d); it
    vanishes for absorbing chains.  ``stochastic`` means real entries that are
    >= -TOL_NONNEG and sum to one within tolerance.
    """

    weights: np.ndarray
    stochastic: bool
    sum_residual: float


@dataclass(frozen=True, slots=True)
class ModifiedDual:
    """Dual conditioned to avoid premature target discovery.

    ``kernel`` = ``bidiagonal`` + ``target_column``; the bidiagonal part climbs
    or holds, the rank-one part jumps straight to the target state d.  The
    start is the two-point law ``initial`` on {0, d}.  Absorption happens on
    ``absorbing_states`` = {absorbing_start, ..., d}, and within that set only
    ``absorbing_start`` and d can ever be entered.
    """

    link: LinkMatrix
    bidiagonal: np.ndarray
    target_column: np.ndarray
    kernel: np.ndarray
    initial: np.ndarray
    absorbing_start: int
    absorbing_states: tuple[int, ...]
    stochastic: bool
    intertwining_residual: float
    initial_residual: float


@dataclass(frozen=True, slots=True)
class MonotoneReport:
    """Outcome of the stochastic-monotonicity check of the time reversal."""

    monotone: bool
    witness: tuple[int, int] | None
    reversal: np.ndarray


@dataclass(frozen=True, slots=True)
class SeparationProfile:
    """Separation s(t) = 1 - min_x (m0 P^t)(x) / pi(x) and its minimizers."""

    s: np.ndarray
    argmin_state: np.ndarray
    minimized_at_target: bool


def build_link(
    kernel: TransitionKernel,
    spectrum: SpectrumReport,
    polys: SpectralPolynomials,
    m0=None,
) -> LinkMatrix:
    """Assemble the link whose row i is m0 Q_i.

    Row 0 is the initial law itself; the link is the unique matrix with that
    property intertwining the kernel with the pure-birth dual built from the
    same eigenvalue order.
    """
    vec = as_initial(m0, kernel.n)
    rows = np.array([vec @ q for q in polys.mats])
    n = kernel.n
    rowsum = float(np.abs(rows.sum(axis=1) - 1.0).max())
    clamped = 0
    stochastic = False
    if not np.iscomplexobj(rows):
        neg = rows.min()
        if neg >= -TOL_NONNEG:
            tiny = (rows < 0.0) & (rows >= -TOL_NONNEG)
            clamped = int(tiny.sum())
            rows[tiny] = 0.0
            stochastic = rowsum <= tol_alg(n)
    upper = np.abs(np.triu(rows, k=1)).max() if n > 1 else 0.0
    rows.setflags(write=False)
    return LinkMatrix(
        rows=rows,
        stochastic=stochastic,
        lower_triangular=bool(upper <= tol_alg(n)),
        clamped=clamped,
        rowsum_residual=rowsum,
    )


def build_dual(spectrum: SpectrumReport) -> DualKernel:
    """Pure-birth dual kernel from the ordered eigenvalues."""
    thetas = spectrum.values
    n = len(thetas)
    mat = np.zeros((n, n), dtype=thetas.dtype)
    for i in range(n):
        mat[i, i] = thetas[i]
        if i + 1 < n:
            mat[i, i + 1] = 1.0 - thetas[i]
    mat.setflags(write=False)
    return DualKernel(matrix=mat, thetas=thetas)


def check_intertwining(
    link: LinkMatrix,
    kernel: TransitionKernel,
    dual: DualKernel,
    powers: tuple[int, ...] = (),
) -> IntertwiningReport:
    """Residuals of Lambda P^t = Phat^t Lambda for t = 1 and any extra powers."""
    lam = link.rows
    residual = float(np.abs(lam @ kernel.matrix - dual.matrix @ lam).max())
    power_residuals: dict[int, float] = {}
    for t in powers:
        pt = np.linalg.matrix_power(kernel.matrix, t)
        qt = np.linalg.matrix_power(dual.matrix, t)
        power_residuals[t] = float(np.abs(lam @ pt - qt @ lam).max())
    tol = tol_alg(kernel.n)
    worst = max([residual, *power_residuals.values()])
    return IntertwiningReport(
        residual=residual, power_residuals=power_residuals, tol=tol, passed=worst <= tol
    )


def mixture_weights(link: LinkMatrix, normalizer: float = 1.0) -> MixtureWeights:
    """Successive differences of the link's target column.

    ``normalizer`` rescales the target column first (used by the strong
    stationary route, where the column tends to pi(d) rather than 1).
    """
    col = link.rows[:, -1] / normalizer
    d = len(col) - 1
    weights = np.empty(d + 2, dtype=col.dtype)
    weights[0] = col[0]
    weights[1 : d + 1] = np.diff(col)
    weights[d + 1] = 1.0 - col[d]
    total = weights.sum()
    sum_residual = float(abs(total - 1.0))
    stochastic = bool(
        not np.iscomplexobj(weights)
        and weights.min() >= -TOL_NONNEG
        and sum_residual <= tol_alg(d + 1)
    )
    weights.setflags(write=False)
    return MixtureWeights(weights=weights, stochastic=stochastic, sum_residual=sum_residual)


def build_modified_dual(
    kernel: TransitionKernel,
    link: LinkMatrix,
    spectrum: SpectrumReport,
    m0=None,
) -> ModifiedDual:
    """Condition the dual on not having discovered the target yet.

    Row i of the modified link is the law of the primal state given dual
    state i and target not yet produced; rows whose original law already
    sits on the target collapse to the point mass there.  The modified dual
    kernel keeps the climb-or-hold structure plus a rank-one jump to the
    target state, and the modified start splits the initial mass between
    dual state 0 and the target.
    """
    vec = as_initial(m0, kernel.n)
    lam = link.rows
    n = kernel.n
    d = kernel.d
    tol = tol_alg(n)
    thetas = spectrum.values
    a = mixture_weights(link).weights

    lam_d = lam[:, d]
    at_target = np.abs(lam_d - 1.0) <= tol

    dtype = lam.dtype
    lam_bar = np.zeros_like(lam)
    delta_d = np.zeros(n, dtype=dtype)
    delta_d[d] = 1.0
    for i in range(n):
        if at_target[i]:
            lam_bar[i] = delta_d
        else:
            lam_bar[i] = (lam[i] - lam_d[i] * delta_d) / (1.0 - lam_d[i])

    bidiag = np.zeros((n, n), dtype=dtype)
    column = np.zeros((n, n), dtype=dtype)
    for i in range(n):
        if at_target[i]:
            bidiag[i, i] = 1.0
            continue
        bidiag[i, i] = thetas[i]
        if i + 1 <= d:
            bidiag[i, i + 1] = (1.0 - lam_d[i + 1]) / (1.0 - lam_d[i]) * (1.0 - thetas[i])
            column[i, d] = a[i + 1] / (1.0 - lam_d[i]) * (1.0 - thetas[i])

    m_bar = np.zeros(n, dtype=dtype)
    m0_d = vec[d]
    m_bar[0] = 1.0 - m0_d
    m_bar[d] += m0_d

    start_candidates = np.nonzero(at_target)[0]
    absorbing_start = int(start_candidates[0]) if len(start_candidates) else d

    clamped = 0
    stochastic = False
    if not np.iscomplexobj(bidiag):
        if min(bidiag.min(), column.min(), lam_bar.min()) >= -TOL_NONNEG:
            for arr in (bidiag, column, lam_bar):
                tiny = (arr < 0.0) & (arr >= -TOL_NONNEG)
                clamped += int(tiny.sum())
                arr[tiny] = 0.0
            stochastic = True
    kernel_bar = bidiag + column
    rowsum = float(np.abs(kernel_bar.sum(axis=1) - 1.0).max())
    stochastic = stochastic and rowsum <= tol

    link_bar = LinkMatrix(
        rows=lam_bar,
        stochastic=stochastic,
        lower_triangular=bool(np.abs(np.triu(lam_bar, k=1)).max() <= tol) if n > 1 else True,
        clamped=clamped,
        rowsum_residual=float(np.abs(lam_bar.sum(axis=1) - 1.0).max()),
    )
    intertwining_residual = float(np.abs(lam_bar @ kernel.matrix - kernel_bar @ lam_bar).max())
    initial_residual = float(np.abs(m_bar @ lam_bar - vec).max())

    for arr in (bidiag, column, kernel_bar, m_bar):
        arr.setflags(write=False)
    return ModifiedDual(
        link=link_bar,
        bidiagonal=bidiag,
        target_column=column,
        kernel=kernel_bar,
        initial=m_bar,
        absorbing_start=absorbing_start,
        absorbing_states=tuple(range(absorbing_start, n)),
        stochastic=stochastic,
        intertwining_residual=intertwining_residual,
        initial_residual=initial_residual,
    )


def check_monotone_reversal(kernel: TransitionKernel) -> MonotoneReport:
    """Check that the time reversal is stochastically monotone.

    The reversal is Ptilde(x, y) = pi(y) P(y, x) / pi(x); monotone means the
    partial sums of row x dominate those of row x + 1 for every x.  Returns
    the first violating pair as witness.
    """
    pi = stationary_law(kernel)
    rev = (kernel.matrix.T * pi[None, :]) / pi[:, None]
    prefix = np.cumsum(rev, axis=1)
    n = kernel.n
    witness = None
    for x in range(n - 1):
        bad = np.nonzero(prefix[x] < prefix[x + 1] - tol_alg(n))[0]
        if len(bad):
            witness = (x, x + 1)
            break
    rev.setflags(write=False)
    return MonotoneReport(monotone=witness is None, witness=witness, reversal=rev)


def separation(kernel: TransitionKernel, m0=None, t_max: int | None = None) -> SeparationProfile:
    """Separation from stationarity along time.

    s(t) = 1 - min_x (m0 P^t)(x) / pi(x).  When ``t_max`` is None the scan
    runs until s(t) < CDF_TAIL (raising ``HorizonExceeded`` past the cap).
    ``minimized_at_target`` records whether the minimizing state was the
    target at every step, ties counted in the target's favor.
    """
    cls = classify_kernel(kernel)
    if not cls.ergodic:
        raise NotErgodic("separation requires an ergodic kernel")
    pi = stationary_law(kernel)
    vec = as_initial(m0, kernel.n)
    d = kernel.d

    s_vals: list[float] = []
    argmins: list[int] = []
    at_target = True
    horizon = t_max if t_max is not None else MAX_HORIZON
    v = vec.copy()
    t = 0
    while True:
        ratios = v / pi
        m = ratios.min()
        s_vals.append(1.0 - m)
        tie = m + 1e-12 * (1.0 + abs(m))
        arg = d if ratios[d] <= tie else int(np.argmin(ratios))
        argmins.append(arg)
        if arg != d:
            at_target = False
        if t_max is not None and t >= t_max:
            break
        if t_max is None and s_vals[-1] < CDF_TAIL:
            break
        if t >= horizon:
            raise HorizonExceeded(f"separation did not fall below {CDF_TAIL} within {horizon} steps")
        v = v @ kernel.matrix
        t += 1
    return SeparationProfile(
        s=np.array(s_vals), argmin_state=np.array(argmins), minimized_at_target=at_target
    )
