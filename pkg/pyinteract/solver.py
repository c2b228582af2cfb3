'''Numerical minimizers of the interaction energy.

:func:`solve_particles` moves n equal weight atoms by gradient descent
with a backtracking line search. :func:`solve_grid_fw` fixes a grid and
minimizes the quadratic energy of the weights over the probability
simplex with Frank-Wolfe steps, each followed by a fully corrective
solve on the active nodes.

Both return the computed measure together with a :class:`SolveReport`.
'''
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

import numpy

from pyinteract.closedform import build_solution
from pyinteract.kernel import Kernel
from pyinteract.measure import (
    DiscreteMeasure,
    GridMeasure,
    near_field_correction,
    pair_matrix,
    pairwise_energy,
    pairwise_gradient,
    wasserstein1,
)
from pyinteract.rng import XorShift64Star
from pyinteract.utils import (
    AccuracyError,
    DomainError,
    InitializationError,
    log,
    tree_sum,
)

# the line search gives up below this step
MIN_STEP = 1e-30
# relative slack when accepting a corrective step
CORRECTIVE_SLACK = 1e-13
INIT_NOISE = 0.1
# fractions of a grid step below this are not interpolated
FRACTION_TOL = 1e-12
RECENTER_MODES = ("shift", "interpolate")


@dataclass(frozen=True)
class ParticleOpts:
    n: int = 200
    max_iters: int = 100000
    grad_tol: float = 1e-8
    initial_step: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    seed: int = 0
    init: Optional[Tuple[float, ...]] = None
    log_every: int = 1000

    def __post_init__(self):
        if self.init is not None:
            object.__setattr__(self, "init", tuple(float(v) for v in self.init))
            object.__setattr__(self, "n", len(self.init))
        if self.n < 2:
            raise DomainError("at least two particles are needed, got %r" % self.n)
        if not self.grad_tol > 0:
            raise DomainError("grad_tol must be > 0")
        if not 0 < self.shrink < 1:
            raise DomainError("shrink factor must lie in (0, 1), got %r" % self.shrink)
        if not 0 < self.armijo < 1:
            raise DomainError("sufficient decrease constant must lie in (0, 1)")
        if not self.initial_step > 0:
            raise DomainError("initial step must be > 0")
        if self.max_iters < 0:
            raise DomainError("max_iters must be >= 0")


@dataclass(frozen=True)
class FwOpts:
    '''grid and stopping options; *lo* and *hi* default to -2R and 2R.'''
    lo: Optional[float] = None
    hi: Optional[float] = None
    m: int = 801
    max_iters: int = 10000
    gap_tol: float = 1e-8
    recenter_each_iter: bool = True
    recenter_mode: str = "shift"
    log_every: int = 100

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise DomainError("grid requires lo < hi, got %r, %r" % (self.lo, self.hi))
        if self.m < 3:
            raise DomainError("grid needs at least 3 points, got %r" % self.m)
        if not self.gap_tol > 0:
            raise DomainError("gap_tol must be > 0")
        if self.recenter_mode not in RECENTER_MODES:
            raise DomainError("recenter_mode must be one of %s, got %r" %
                              (", ".join(RECENTER_MODES), self.recenter_mode))
        if self.max_iters < 0:
            raise DomainError("max_iters must be >= 0")

    def nodes(self, R: float):
        lo = -2 * R if self.lo is None else self.lo
        hi = 2 * R if self.hi is None else self.hi
        return numpy.linspace(lo, hi, self.m)


@dataclass(frozen=True)
class SolveReport:
    '''outcome of a solve.

    *energy_gap* is the final energy plus *near_field* minus the
    reference energy of the closed form (the quadrature value for the
    logarithmic kernel, flagged by *reference_empirical*). *near_field*
    is the cell correction of particles without self pairs and 0
    otherwise, see :func:`pyinteract.measure.near_field_correction`.
    *residual* is the max norm of the gradient for particles and the
    Frank-Wolfe gap for grids.
    '''
    method: str
    alpha: float
    regime: str
    size: int
    energy: float
    initial_energy: float
    reference_energy: float
    reference_empirical: bool
    energy_gap: float
    relative_gap: float
    iterations: int
    termination: str
    residual: float
    residual_kind: str
    wasserstein1: float
    diagonal: str
    near_field: float = 0.0
    seed: Optional[int] = None
    history: Tuple[float, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["history"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _reference(k):
    s = build_solution(k)
    if s.energy is not None:
        return s, s.energy, False
    return s, s.energy_empirical(), True


def _diagonal_flag(k):
    return "included" if k.finite_at_zero else "excluded"


def _initial_positions(k, opts, R):
    if opts.init is not None:
        return numpy.array(opts.init, dtype=float)
    rng = XorShift64Star(opts.seed)
    x = numpy.linspace(-R, R, opts.n)
    h = x[1] - x[0]
    noise = rng.uniform_array(opts.n, -INIT_NOISE * h, INIT_NOISE * h)
    return x + noise


def solve_particles(k: Kernel, opts: ParticleOpts = ParticleOpts()):
    '''minimize the energy of n equal weight atoms over their positions.

    Self pairs never enter the objective; for kernels with K(0) = 0
    this is the same as including them. For singular kernels the
    report adds the near field correction of the final atoms before
    comparing with the continuum energy. The result is recentred to
    centre of mass 0.

    Raises :class:`InitializationError` if the starting configuration
    has infinite energy.
    '''
    solution, ref, empirical = _reference(k)
    n = opts.n
    w = numpy.full(n, 1.0 / n)

    def objective(y):
        return pairwise_energy(y, w, k, include_diagonal=False)

    x = _initial_positions(k, opts, solution.R)
    E = objective(x)
    if not math.isfinite(E):
        raise InitializationError("initial particle energy is %r" % E)
    E0 = E
    history = [E]
    log.info("particle solve: alpha=%g regime=%s n=%i", k.alpha, k.regime.value, n)

    g = pairwise_gradient(x, k)
    gnorm = float(numpy.max(numpy.abs(g)))
    x_prev = g_prev = None
    termination = "max_iters"
    it = 0
    while it < opts.max_iters:
        if gnorm < opts.grad_tol:
            termination = "converged"
            break
        # Barzilai-Borwein trial step
        t = opts.initial_step
        if x_prev is not None:
            s = x - x_prev
            y = g - g_prev
            sy = float(tree_sum(s * y))
            if sy > 0:
                t = float(tree_sum(s * s)) / sy
        gg = float(tree_sum(g * g))
        while True:
            x_new = x - t * g
            E_new = objective(x_new)
            if E_new <= E - opts.armijo * t * gg:
                break
            t *= opts.shrink
            if t < MIN_STEP:
                break
        if t < MIN_STEP:
            termination = "line_search_failed"
            break
        x_prev, g_prev = x, g
        x, E = x_new, E_new
        history.append(E)
        g = pairwise_gradient(x, k)
        gnorm = float(numpy.max(numpy.abs(g)))
        it += 1
        if opts.log_every and it % opts.log_every == 0:
            log.debug("particles iter=%i energy=%.17g grad=%.3g step=%.3g", it, E, gnorm, t)
    else:
        if gnorm < opts.grad_tol:
            termination = "converged"

    x = numpy.sort(x - float(tree_sum(x)) / n)
    mu = DiscreteMeasure(x, w)
    near = near_field_correction(x, w, k)
    report = SolveReport(
        method="particles",
        alpha=k.alpha,
        regime=k.regime.value,
        size=n,
        energy=E,
        initial_energy=E0,
        reference_energy=ref,
        reference_empirical=empirical,
        energy_gap=E + near - ref,
        relative_gap=abs(E + near - ref) / max(abs(ref), 1e-300),
        iterations=it,
        termination=termination,
        residual=gnorm,
        residual_kind="grad_norm",
        wasserstein1=wasserstein1(mu, solution),
        diagonal=_diagonal_flag(k),
        near_field=near,
        seed=opts.seed,
        history=tuple(history),
    )
    log.info("particle solve finished: %s after %i iterations, energy=%.12g",
             termination, it, E)
    return mu, report


def grid_gram(k: Kernel, grid):
    '''the matrix of the grid quadratic form.

    Point values of the kernel when K(0) is finite. Otherwise cell
    averages on a uniform grid, which makes ``1/2 w' G w`` the exact
    energy of the piecewise constant density.
    '''
    x = numpy.asarray(grid, dtype=float)
    if k.finite_at_zero:
        return pair_matrix(x, k, include_diagonal=True), "included"
    h = (x[-1] - x[0]) / (x.size - 1)
    G = numpy.array(k.cell_average(x[:, None] - x[None, :], h), ndmin=2)
    return G, "cell"


def _quad_energy(G, w):
    return 0.5 * float(tree_sum(w * tree_sum(G * w[None, :], axis=1)))


def _corrective(G, x, w):
    '''minimize the quadratic over the active nodes keeping mass and
    centre of mass, dropping nodes whose weight would turn negative.'''
    active = numpy.flatnonzero(w > 0)
    c = float(tree_sum(w * x))
    w = w.copy()
    for _ in range(active.size):
        if active.size <= 2:
            break
        S = active
        n = S.size
        A = numpy.zeros((n + 2, n + 2))
        A[:n, :n] = G[numpy.ix_(S, S)]
        A[:n, n] = A[n, :n] = 1.0
        A[:n, n + 1] = A[n + 1, :n] = x[S]
        rhs = numpy.zeros(n + 2)
        rhs[n] = 1.0
        rhs[n + 1] = c
        try:
            v = numpy.linalg.solve(A, rhs)[:n]
        except numpy.linalg.LinAlgError:
            log.warning("singular corrective system on %i nodes, using least squares", n)
            v = numpy.linalg.lstsq(A, rhs, rcond=None)[0][:n]
        if numpy.all(v > 0):
            w[S] = v
            break
        cur = w[S]
        neg = v <= 0
        theta = numpy.min(cur[neg] / (cur[neg] - v[neg]))
        blocking = S[neg][numpy.argmin(cur[neg] / (cur[neg] - v[neg]))]
        w[S] = cur + theta * (v - cur)
        w[blocking] = 0.0
        w = numpy.maximum(w, 0.0)
        active = numpy.flatnonzero(w > 0)
    return w / float(tree_sum(w))


def _shift(w, shift):
    # moves every weight *shift* nodes to the left, None if mass would leave
    if shift == 0:
        return w
    if shift > 0:
        if numpy.any(w[:shift] > 0):
            return None
        return numpy.concatenate([w[shift:], numpy.zeros(shift)])
    if numpy.any(w[shift:] > 0):
        return None
    return numpy.concatenate([numpy.zeros(-shift), w[:shift]])


def _recenter(w, x, h, interpolate=False):
    '''translate the weights so the centre of mass moves to 0.

    Whole grid steps keep the grid energy unchanged. With *interpolate*
    the remaining fraction of a step is split linearly between the two
    neighbouring shifts, which puts the centre of mass at 0 exactly.
    '''
    s = float(tree_sum(w * x)) / h
    if interpolate:
        shift = int(math.floor(s))
        frac = s - shift
        if frac > 1 - FRACTION_TOL:
            shift, frac = shift + 1, 0.0
        elif frac < FRACTION_TOL:
            frac = 0.0
    else:
        shift, frac = int(round(s)), 0.0
    if shift == 0 and frac == 0:
        return w, True
    lower = _shift(w, shift)
    if frac == 0:
        return (w, False) if lower is None else (lower, True)
    upper = _shift(w, shift + 1)
    if lower is None or upper is None:
        return w, False
    return (1 - frac) * lower + frac * upper, True


def solve_grid_fw(k: Kernel, opts: FwOpts = FwOpts(), grid=None):
    '''minimize ``1/2 w' G w`` over the probability simplex on a grid.

    Each iteration evaluates the potential ``phi = G w`` on the grid,
    takes the Frank-Wolfe step towards the node of least potential
    (lowest index on ties) with the exact step length and then solves
    the problem restricted to the active nodes. The reported gap
    ``w . phi - min phi`` is the violation of the discrete
    Euler-Lagrange conditions.

    *grid* overrides the grid described by *opts*. Raises
    :class:`AccuracyError` carrying ``(measure, report)`` as
    :attr:`result` when the gap tolerance is not met within
    ``opts.max_iters`` iterations.
    '''
    solution, ref, empirical = _reference(k)
    x = opts.nodes(solution.R) if grid is None else numpy.asarray(grid, dtype=float)
    m = x.size
    G, diagonal = grid_gram(k, x) if m > 1 else (pair_matrix(x, k), _diagonal_flag(k))
    h = (x[-1] - x[0]) / (m - 1) if m > 1 else 1.0
    log.info("grid solve: alpha=%g regime=%s m=%i", k.alpha, k.regime.value, m)

    w = numpy.zeros(m)
    w[int(numpy.argmin(numpy.abs(x)))] = 1.0
    E = E0 = _quad_energy(G, w)
    history = [E]
    termination = "max_iters"
    warned = False
    gap = math.inf
    it = 0
    while True:
        phi = tree_sum(G * w[None, :], axis=1)
        eta = float(tree_sum(w * phi))
        j = int(numpy.argmin(phi))
        # a single node is its own minimizer, also when K(0) = inf
        gap = eta - float(phi[j]) if m > 1 else 0.0
        if gap < opts.gap_tol:
            termination = "converged"
            break
        if it >= opts.max_iters:
            break
        curv = G[j, j] - 2 * phi[j] + eta
        gamma = 1.0 if curv <= 0 else min(1.0, gap / curv)
        w_new = (1 - gamma) * w
        w_new[j] += gamma
        E_new = _quad_energy(G, w_new)

        w_corr = _corrective(G, x, w_new)
        E_corr = _quad_energy(G, w_corr)
        if E_corr <= E_new + CORRECTIVE_SLACK * max(1.0, abs(E_new)):
            w_new, E_new = w_corr, E_corr

        if opts.recenter_each_iter and m > 1:
            shifted, ok = _recenter(w_new, x, h, opts.recenter_mode == "interpolate")
            if not ok and not warned:
                log.warning("recentering would move mass off the grid, skipped")
                warned = True
            if ok:
                w_new = shifted
                E_new = _quad_energy(G, w_new)
        w, E = w_new, E_new
        history.append(E)
        it += 1
        if opts.log_every and it % opts.log_every == 0:
            log.debug("fw iter=%i energy=%.17g gap=%.3g active=%i",
                      it, E, gap, int(numpy.count_nonzero(w)))

    mu = GridMeasure(x, w)
    report = SolveReport(
        method="grid",
        alpha=k.alpha,
        regime=k.regime.value,
        size=m,
        energy=E,
        initial_energy=E0,
        reference_energy=ref,
        reference_empirical=empirical,
        energy_gap=E - ref,
        relative_gap=abs(E - ref) / max(abs(ref), 1e-300),
        iterations=it,
        termination=termination,
        residual=gap,
        residual_kind="fw_gap",
        wasserstein1=wasserstein1(mu, solution),
        diagonal=diagonal,
        history=tuple(history),
    )
    log.info("grid solve finished: %s after %i iterations, energy=%.12g gap=%.3g",
             termination, it, E, gap)
    if termination != "converged":
        raise AccuracyError("Frank-Wolfe gap %g above %g after %i iterations" %
                            (gap, opts.gap_tol, it),
                            estimate=E, error=gap, result=(mu, report))
    return mu, report


__all__ = [
    "ParticleOpts",
    "FwOpts",
    "SolveReport",
    "solve_particles",
    "solve_grid_fw",
    "grid_gram",
]
