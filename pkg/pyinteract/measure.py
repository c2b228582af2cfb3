'''Probability measures on the line and the interaction functionals.

Three representations are supported:

* :class:`DiscreteMeasure` -- finitely many weighted atoms,
* :class:`GridMeasure` -- weights on a strictly increasing grid,
* :class:`pyinteract.closedform.ClosedFormSolution` -- the explicit
  minimizer.

Pair sums over atoms are reduced in a fixed tree order (see
:func:`pyinteract.utils.tree_sum`), so energies and potentials are
reproducible bit for bit. The compiled module
``pyinteract.libcpairwise`` is used when it has been built; it follows
the same reduction order.
'''
import json
import math
from dataclasses import dataclass
from typing import Union

import numpy

from pyinteract.closedform import ClosedFormSolution, build_solution
from pyinteract.kernel import LOG, Kernel, Regime, near_field_constants
from pyinteract.utils import DomainError, chebyshev_points, log, tree_sum

try:
    from pyinteract import libcpairwise
except ImportError:
    libcpairwise = None

MASS_TOL = 1e-12
# comparison points per closed-form support in wasserstein1
CHEBYSHEV_POINTS = 512
LEGENDRE_ORDER = 8

CONVENTIONS = ("atomic", "cell")


def _frozen_array(values):
    a = numpy.array(values, dtype=float).reshape(-1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    '''weighted atoms; weights must be positive and sum to one.'''
    positions: numpy.ndarray
    weights: numpy.ndarray

    def __post_init__(self):
        x = _frozen_array(self.positions)
        w = _frozen_array(self.weights)
        if x.size == 0 or x.size != w.size:
            raise DomainError("positions and weights must be nonempty and of equal length")
        if not numpy.all(numpy.isfinite(x)):
            raise DomainError("positions must be finite")
        if not numpy.all(w > 0):
            raise DomainError("weights of a discrete measure must be positive")
        if abs(math.fsum(w) - 1.0) > MASS_TOL:
            raise DomainError("weights sum to %r, not 1" % math.fsum(w))
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, positions) -> "DiscreteMeasure":
        x = numpy.asarray(positions, dtype=float)
        return cls(x, numpy.full(x.size, 1.0 / x.size))

    def __len__(self):
        return self.positions.size

    def to_dict(self):
        return {"type": "discrete",
                "positions": self.positions.tolist(),
                "weights": self.weights.tolist()}


@dataclass(frozen=True, eq=False)
class GridMeasure:
    '''nonnegative weights on a strictly increasing grid.'''
    grid: numpy.ndarray
    weights: numpy.ndarray

    def __post_init__(self):
        x = _frozen_array(self.grid)
        w = _frozen_array(self.weights)
        if x.size == 0 or x.size != w.size:
            raise DomainError("grid and weights must be nonempty and of equal length")
        if not numpy.all(numpy.diff(x) > 0):
            raise DomainError("grid must be strictly increasing")
        if not numpy.all(w >= 0):
            raise DomainError("grid weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > MASS_TOL:
            raise DomainError("weights sum to %r, not 1" % math.fsum(w))
        object.__setattr__(self, "grid", x)
        object.__setattr__(self, "weights", w)

    @property
    def positions(self):
        return self.grid

    @property
    def spacing(self) -> float:
        '''the grid step; raises :class:`DomainError` unless uniform.'''
        if self.grid.size < 2:
            raise DomainError("a one point grid has no spacing")
        d = numpy.diff(self.grid)
        h = (self.grid[-1] - self.grid[0]) / (self.grid.size - 1)
        if numpy.max(numpy.abs(d - h)) > 1e-9 * max(1.0, abs(h)):
            raise DomainError("grid is not uniform")
        return float(h)

    @classmethod
    def from_closed_form(cls, solution: ClosedFormSolution, grid) -> "GridMeasure":
        '''assign to every node the closed-form mass of its cell.'''
        x = numpy.asarray(grid, dtype=float)
        if x.size == 1:
            return cls(x, [1.0])
        mid = 0.5 * (x[1:] + x[:-1])
        edges = numpy.concatenate([[-numpy.inf], mid, [numpy.inf]])
        w = numpy.maximum(numpy.diff(solution.cdf(edges)), 0.0)
        return cls(x, w / math.fsum(w))

    def support(self, threshold: float = 0.0):
        '''nodes carrying more than *threshold* mass.'''
        return self.grid[self.weights > threshold]

    def __len__(self):
        return self.grid.size

    def to_dict(self):
        return {"type": "grid",
                "positions": self.grid.tolist(),
                "weights": self.weights.tolist()}


Measure = Union[DiscreteMeasure, GridMeasure, ClosedFormSolution]


@dataclass(frozen=True)
class CenterOfMass:
    value: float


def _is_atomic(mu):
    return isinstance(mu, (DiscreteMeasure, GridMeasure))


def _regime_code(k):
    return 0 if k.regime is Regime.A else 1


def _check_kernel(s, k):
    if s.kernel != k:
        raise DomainError("closed form of %r evaluated with kernel %r" % (s.kernel, k))


def pair_matrix(x, k: Kernel, include_diagonal: bool = True):
    '''the matrix K(|x_i - x_j|), with a zero diagonal when excluded.'''
    x = numpy.asarray(x, dtype=float)
    K = k.value(numpy.abs(x[:, None] - x[None, :]))
    K = numpy.array(K, dtype=float, ndmin=2)
    if not include_diagonal:
        numpy.fill_diagonal(K, 0.0)
    return K


def pairwise_energy(x, w, k: Kernel, include_diagonal: bool = True) -> float:
    '''``1/2 sum_ij w_i w_j K(|x_i - x_j|)`` in tree order.'''
    x = numpy.ascontiguousarray(x, dtype=float)
    w = numpy.ascontiguousarray(w, dtype=float)
    if libcpairwise is not None:
        return float(libcpairwise.pair_energy(x, w, k.alpha, _regime_code(k), include_diagonal))
    K = pair_matrix(x, k, include_diagonal)
    with numpy.errstate(invalid="ignore"):
        rows = tree_sum((w[:, None] * w[None, :]) * K, axis=1)
    return float(0.5 * tree_sum(rows))


def pairwise_potential(x, w, k: Kernel, points):
    '''``sum_j w_j K(|p - x_j|)`` for each p in *points*.'''
    x = numpy.ascontiguousarray(x, dtype=float)
    w = numpy.ascontiguousarray(w, dtype=float)
    p = numpy.ascontiguousarray(numpy.atleast_1d(points), dtype=float)
    if libcpairwise is not None:
        return numpy.asarray(libcpairwise.potential(x, w, p, k.alpha, _regime_code(k)))
    K = numpy.array(k.value(numpy.abs(p[:, None] - x[None, :])), dtype=float, ndmin=2)
    return numpy.atleast_1d(tree_sum(w[None, :] * K, axis=1))


def pairwise_gradient(x, k: Kernel):
    '''gradient of the equal weight energy without self pairs,
    ``(1/n**2) sum_{j != i} K'(|x_i - x_j|) sgn(x_i - x_j)``.'''
    x = numpy.ascontiguousarray(x, dtype=float)
    n = x.size
    if libcpairwise is not None:
        return numpy.asarray(libcpairwise.pair_gradient(x, k.alpha, _regime_code(k)))
    d = x[:, None] - x[None, :]
    with numpy.errstate(divide="ignore", invalid="ignore"):
        f = numpy.where(d != 0, numpy.sign(d) * k.derivative(numpy.abs(d)), 0.0)
    return (1.0 / (float(n) * n)) * tree_sum(f, axis=1)


def near_field_correction(x, w, k: Kernel) -> float:
    '''energy the atoms at *x* are missing against a continuous density.

    Each atom stands for a cell as wide as its local spacing. The
    correction is the self energy of that cell plus, for the neighbours
    on either side, the cell average minus the point value of the
    singular term, taken at the local spacing. Zero when K(0) is finite.
    The off-diagonal atomic energy plus this correction is the estimate
    of the continuum energy used for singular kernels.
    '''
    x = numpy.asarray(x, dtype=float)
    w = numpy.asarray(w, dtype=float)
    if k.finite_at_zero or x.size < 2:
        return 0.0
    order = numpy.argsort(x, kind="stable")
    xs, ws = x[order], w[order]
    gaps = numpy.diff(xs)
    h = numpy.empty(xs.size)
    h[1:-1] = 0.5 * (gaps[1:] + gaps[:-1])
    h[0], h[-1] = gaps[0], gaps[-1]
    sides = numpy.full(xs.size, 2.0)
    sides[0] = sides[-1] = 1.0
    s, b = near_field_constants(k)
    coef, power = k.terms[-1]
    with numpy.errstate(divide="ignore"):
        if power == LOG:
            g = s + coef * numpy.log(h) + sides * b
        else:
            g = (s + sides * b) * h ** power
    return float(0.5 * tree_sum(ws * ws * g))


def cell_energy(mu: GridMeasure, k: Kernel) -> float:
    '''energy of the piecewise constant density that spreads each
    node's weight uniformly over its cell.'''
    h = mu.spacing
    x = mu.grid
    G = numpy.array(k.cell_average(x[:, None] - x[None, :], h), ndmin=2)
    w = mu.weights
    return float(0.5 * tree_sum(tree_sum((w[:, None] * w[None, :]) * G, axis=1)))


def energy(mu: Measure, k: Kernel, convention: str = "atomic") -> float:
    '''interaction energy ``1/2 iint K(|x - y|) dmu dmu``.

    For atoms the self pairs are included when K(0) is finite and
    left out otherwise. With ``convention="cell"`` a grid measure is
    read as a piecewise constant density instead. For the closed form
    the exact energy is returned when it exists and the quadrature
    energy otherwise.
    '''
    if convention not in CONVENTIONS:
        raise DomainError("unknown energy convention %r" % (convention,))
    if isinstance(mu, ClosedFormSolution):
        _check_kernel(mu, k)
        if mu.energy is not None:
            return mu.energy
        return mu.energy_quadrature()
    if convention == "cell":
        if not isinstance(mu, GridMeasure):
            raise DomainError("the cell convention requires a grid measure")
        return cell_energy(mu, k)
    return pairwise_energy(mu.positions, mu.weights, k, k.finite_at_zero)


def energy_quadrature(s: ClosedFormSolution, n: int = 16) -> float:
    '''energy of the closed form by quadrature, ignoring the exact value.'''
    return s.energy_quadrature(n)


def potential_at(mu: Measure, k: Kernel, x):
    '''the potential ``int K(|x - y|) dmu(y)``, vectorised over *x*.

    May be +inf for singular kernels when *x* hits an atom.
    '''
    if isinstance(mu, ClosedFormSolution):
        _check_kernel(mu, k)
        xs = numpy.atleast_1d(numpy.asarray(x, dtype=float))
        out = numpy.array([mu.potential_quadrature(v) for v in xs])
        return out.reshape(numpy.shape(x))[()]
    out = pairwise_potential(mu.positions, mu.weights, k, x)
    return out.reshape(numpy.shape(x))[()]


def center_of_mass(mu: Measure) -> CenterOfMass:
    if isinstance(mu, ClosedFormSolution):
        return CenterOfMass(mu.center)
    return CenterOfMass(float(tree_sum(mu.weights * mu.positions)))


def translate(mu: Measure, t: float) -> Measure:
    '''shift *mu* by *t*.'''
    t = float(t)
    if isinstance(mu, ClosedFormSolution):
        return build_solution(mu.kernel, mu.center + t)
    return type(mu)(mu.positions + t, mu.weights)


def second_moment_of(mu: Measure) -> float:
    '''second moment about the centre of mass.'''
    if isinstance(mu, ClosedFormSolution):
        return mu.second_moment()
    c = center_of_mass(mu).value
    return float(tree_sum(mu.weights * (mu.positions - c) ** 2))


def _atomic_cdf(mu, x):
    order = numpy.argsort(mu.positions, kind="stable")
    xs = mu.positions[order]
    cum = numpy.cumsum(mu.weights[order])
    idx = numpy.searchsorted(xs, numpy.asarray(x, dtype=float), side="right")
    return numpy.where(idx > 0, cum[numpy.maximum(idx - 1, 0)], 0.0)


def cdf_of(mu: Measure, x):
    '''right continuous distribution function, vectorised.'''
    if isinstance(mu, ClosedFormSolution):
        return mu.cdf(x)
    return numpy.minimum(_atomic_cdf(mu, x), 1.0)[()]


def _breakpoints(mu):
    if isinstance(mu, ClosedFormSolution):
        lo, hi = mu.support
        return numpy.concatenate([[lo, hi], chebyshev_points(lo, hi, CHEBYSHEV_POINTS)])
    return numpy.asarray(mu.positions)


def wasserstein1(mu: Measure, nu: Measure) -> float:
    '''one dimensional Wasserstein-1 distance ``int |F_mu - F_nu| dx``.

    Exact for two atomic measures. Otherwise the line is cut at the
    atoms, the support ends and Chebyshev points of every closed-form
    support, and each piece is integrated with Gauss-Legendre.
    '''
    z = numpy.unique(numpy.concatenate([_breakpoints(mu), _breakpoints(nu)]))
    if z.size < 2:
        return 0.0
    if _is_atomic(mu) and _is_atomic(nu):
        diff = numpy.abs(cdf_of(mu, z[:-1]) - cdf_of(nu, z[:-1]))
        return float(tree_sum(diff * numpy.diff(z)))
    t, wt = numpy.polynomial.legendre.leggauss(LEGENDRE_ORDER)
    lo, hi = z[:-1, None], z[1:, None]
    pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t[None, :]
    diff = numpy.abs(cdf_of(mu, pts) - cdf_of(nu, pts))
    pieces = 0.5 * (hi[:, 0] - lo[:, 0]) * (diff @ wt)
    return float(tree_sum(pieces))


def two_dirac(m: float, a: float = 0.0) -> DiscreteMeasure:
    '''``m delta(a - 1/2) + (1 - m) delta(a + 1/2)``.'''
    m = float(m)
    if not 0 < m < 1:
        raise DomainError("two_dirac requires 0 < m < 1, got %r" % m)
    return DiscreteMeasure([a - 0.5, a + 0.5], [m, 1 - m])


def measure_to_dict(mu: Measure, alpha=None) -> dict:
    doc = mu.to_dict()
    if alpha is not None and "alpha" not in doc:
        doc["alpha"] = float(alpha)
    return doc


def measure_from_dict(doc: dict) -> Measure:
    '''rebuild a measure from its JSON document.'''
    kind = doc.get("type")
    if kind == "discrete":
        return DiscreteMeasure(doc["positions"], doc["weights"])
    if kind == "grid":
        return GridMeasure(doc["positions"], doc["weights"])
    if kind == "closedform":
        k = Kernel.create(doc["alpha"], doc.get("regime"))
        return build_solution(k, doc.get("center", 0.0))
    raise DomainError("unknown measure type %r" % (kind,))


def dump_measure(mu: Measure, path: str, alpha=None):
    '''write *mu* as JSON to *path*.'''
    with open(path, "w") as outf:
        json.dump(measure_to_dict(mu, alpha), outf, indent=1)
    log.debug("wrote %s measure to %s", type(mu).__name__, path)


def load_measure(path: str) -> Measure:
    with open(path) as inf:
        return measure_from_dict(json.load(inf))


__all__ = [
    "DiscreteMeasure",
    "GridMeasure",
    "CenterOfMass",
    "pair_matrix",
    "pairwise_energy",
    "pairwise_potential",
    "pairwise_gradient",
    "near_field_correction",
    "cell_energy",
    "energy",
    "energy_quadrature",
    "potential_at",
    "center_of_mass",
    "translate",
    "second_moment_of",
    "cdf_of",
    "wasserstein1",
    "two_dirac",
    "measure_to_dict",
    "measure_from_dict",
    "dump_measure",
    "load_measure",
]
