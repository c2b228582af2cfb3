'''Numerical certification of the closed-form solution.

Three kinds of checks are provided:

* the integral identities behind the solution, each evaluated with the
  integral side computed by singular quadrature and the formula side
  from the constants (:func:`verify_identity`),
* the Euler-Lagrange conditions: the potential of the closed form,
  computed by direct quadrature, is constant on the support and not
  smaller outside (:func:`verify_euler_lagrange`),
* the positivity of the quadratic form that makes the energy convex on
  the relevant set of perturbations (:func:`convexity_probe`).
'''
import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy
import scipy.linalg
import scipy.optimize

from pyinteract.closedform import (
    build_solution,
    constants,
    remainder_f,
    remainder_g,
    tail_integral,
)
from pyinteract.kernel import LOG, Kernel, Regime, cell_average
from pyinteract.measure import potential_at
from pyinteract.quadrature import integrate_adaptive, integrate_weighted, jacobi_power_integral
from pyinteract.rng import XorShift64Star
from pyinteract.utils import DomainError, chebyshev_points, log

IDENTITY_RANGES = {
    "INT": (2.0, 3.0),
    "INT1": (1.0, 3.0),
    "INT2": (1.0, 3.0),
    "INT3": (1.0, 3.0),
    "COMPINT": (2.0, 3.0),
    "INT1A": (1.0, 2.0),
    "INT2A": (0.0, 2.0),
    "INT3A": (-1.0, 2.0),
}

IDENTITIES = tuple(IDENTITY_RANGES)

# power of |x - y| and parity of the integrand, per identity
_LHS_FORM = {
    "INT": (-3.0, True),
    "INT1": (-2.0, False),
    "INT2": (-1.0, True),
    "INT3": (0.0, False),
    "COMPINT": (0.0, False),
    "INT1A": (-2.0, False),
    "INT2A": (-1.0, True),
    "INT3A": (0.0, False),
}

DEFAULT_ALPHAS = {
    "INT": (2.1, 2.5, 2.9),
    "INT1": (1.5, 2.5, 2.9),
    "INT2": (1.5, 2.5, 2.9),
    "INT3": (1.5, 2.5, 2.9),
    "COMPINT": (2.1, 2.5, 2.9),
    "INT1A": (1.2, 1.5, 1.8),
    "INT2A": (0.3, 1.0, 1.5),
    "INT3A": (-0.5, 0.5, 1.5),
}

INTERIOR_POINTS = (0.0, 0.3, -0.7)
EXTERIOR_POINTS = (1.5, -2.0, 3.0)

EL_ALPHAS = (
    (2.1, "A"), (2.25, "A"), (2.5, "A"), (2.75, "A"), (2.9, "A"),
    (-0.5, "B"), (-0.25, "B"), (0.0, "B"), (0.5, "B"), (1.0, "B"), (1.5, "B"), (1.9, "B"),
)

QUAD_TOL = 1e-11


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    alpha: float
    points: Tuple[float, ...]
    lhs: Tuple[float, ...]
    rhs: Tuple[float, ...]
    max_abs_err: float
    max_rel_err: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_err <= self.tol

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


@dataclass(frozen=True)
class ELReport:
    alpha: float
    regime: str
    eta_ref: float
    eta_empirical: bool
    interior_points: int
    exterior_points: int
    max_interior_dev: float
    min_exterior_slack: float
    tol: float

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.eta_ref))

    @property
    def passed(self) -> bool:
        return (self.max_interior_dev <= self.tol * self.scale and
                self.min_exterior_slack >= -self.tol * self.scale)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


@dataclass(frozen=True)
class ProbeReport:
    alpha: float
    regime: str
    min_value: float
    trials: int
    skipped: int

    @property
    def positive(self) -> bool:
        return self.trials > self.skipped and self.min_value > 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["positive"] = self.positive
        return d


def check_identity(identity: str, alpha: float):
    '''raise :class:`DomainError` unless *identity* holds at *alpha*.'''
    if identity not in IDENTITY_RANGES:
        raise DomainError("unknown identity %r, expected one of %s" % (identity, ", ".join(IDENTITIES)))
    lo, hi = IDENTITY_RANGES[identity]
    if not lo < alpha < hi:
        raise DomainError("%s holds for %g < alpha < %g, got alpha=%r" % (identity, lo, hi, alpha))


def identity_lhs(identity: str, alpha: float, x: float, tol: float = QUAD_TOL) -> float:
    '''the integral side, ``int sgn(x - y)**odd |x - y|**beta (1 - y**2)**p dy``.'''
    check_identity(identity, alpha)
    shift, odd = _LHS_FORM[identity]
    return jacobi_power_integral(alpha + shift, x, -(alpha - 1) / 2, odd=odd, tol=tol)


def _h_power(alpha):
    return -(3 - alpha) / 2


def _h_integral(alpha, X):
    # int_1^X (w**2 - 1)**q dw
    q = _h_power(alpha)
    return integrate_weighted(lambda w, dl, dr: (2.0 + dl) ** q, 1.0, X, left=q, tol=QUAD_TOL)


def _h_first_moment(alpha, X):
    # int_1^X (w**2 - 1)**q (X - w) dw
    q = _h_power(alpha)
    return integrate_weighted(lambda w, dl, dr: (2.0 + dl) ** q * dr, 1.0, X, left=q, tol=QUAD_TOL)


def _h_shifted_moment(alpha, X):
    # int_1^X (w**2 - 1)**q (w - 1) dw
    q = _h_power(alpha)
    return integrate_weighted(lambda w, dl, dr: (2.0 + dl) ** q, 1.0, X, left=q + 1, tol=QUAD_TOL)


def _h_nested(alpha, X):
    # int_1^X int_1^y (z**2 - 1)**q (y - z) dz dy, both levels numerically
    q = _h_power(alpha)

    def inner(y):
        if y <= 1:
            return 0.0
        return integrate_weighted(lambda z, dl, dr: (2.0 + dl) ** q * dr, 1.0, y,
                                  left=q, tol=QUAD_TOL)

    return integrate_adaptive(numpy.vectorize(inner, otypes=[float]), 1.0, X, tol=QUAD_TOL)


def identity_rhs(identity: str, alpha: float, x: float) -> float:
    '''the closed-form side of an identity.'''
    check_identity(identity, alpha)
    a = float(alpha)
    x = float(x)
    X = abs(x)
    s = math.copysign(1.0, x)
    cst = constants(a)
    C, Cp = cst.C_alpha, cst.C_alpha_prime
    outside = X > 1
    if X == 1 and identity == "INT":
        raise DomainError("INT is singular at |x| = 1")

    if identity == "INT":
        return s * C * (X * X - 1) ** _h_power(a) if outside else 0.0
    if identity == "INT1":
        value = cst.c_alpha
        if outside:
            value += (a - 2) * C * _h_integral(a, X)
        return value
    if identity == "INT2":
        value = 2 * Cp * x
        if outside:
            value += (a - 1) * (a - 2) * C * s * _h_first_moment(a, X)
        return value
    if identity == "INT3":
        value = a * Cp * x * x + Cp
        if outside:
            value += a * (a - 1) * (a - 2) * C * _h_nested(a, X)
        return value
    if identity == "COMPINT":
        return a * Cp * x * x + Cp + a * remainder_f(a, x)
    if identity == "INT1A":
        value = cst.c_alpha
        if outside:
            value += cst.c_alpha_1 - (a - 2) * C * tail_integral(a, X)
        return value
    if identity == "INT2A":
        value = 2 * Cp * x
        if outside:
            value -= 2 * cst.D_alpha * s * (X - 1)
            if a != 1:
                tail_sum = _h_shifted_moment(a, X) + (X - 1) * tail_integral(a, X)
                value -= (a - 1) * (a - 2) * C * s * tail_sum
        return value
    # INT3A
    return a * Cp * x * x + Cp - a * remainder_g(a, x)


def verify_identity(identity: str, alpha: float, xs: Sequence[float],
                    tol: float = 1e-6) -> IdentityReport:
    '''compare both sides of an identity at the points *xs*.

    The relative error is ``|lhs - rhs| / max(|rhs|, 1)``.
    '''
    check_identity(identity, alpha)
    xs = tuple(float(x) for x in xs)
    lhs = tuple(identity_lhs(identity, alpha, x) for x in xs)
    rhs = tuple(identity_rhs(identity, alpha, x) for x in xs)
    abs_err = [abs(l - r) for l, r in zip(lhs, rhs)]
    rel_err = [e / max(abs(r), 1.0) for e, r in zip(abs_err, rhs)]
    report = IdentityReport(identity, float(alpha), xs, lhs, rhs,
                            max(abs_err, default=0.0), max(rel_err, default=0.0), tol)
    log.info("identity %s alpha=%g: max relative error %.3g (%s)", identity, alpha,
             report.max_rel_err, "pass" if report.passed else "FAIL")
    return report


def verify_identity_suite(alphas_by_id: Optional[Dict[str, Iterable[float]]] = None,
                          interior: Sequence[float] = INTERIOR_POINTS,
                          exterior: Sequence[float] = EXTERIOR_POINTS,
                          tol: float = 1e-6):
    '''run :func:`verify_identity` over identities and exponents.'''
    if alphas_by_id is None:
        alphas_by_id = DEFAULT_ALPHAS
    points = tuple(interior) + tuple(exterior)
    return [verify_identity(ident, a, points, tol)
            for ident, alphas in alphas_by_id.items()
            for a in alphas]


_CHAIN = {
    ("INT3", "INT2"): lambda a: a,
    ("INT2", "INT1"): lambda a: a - 1,
    ("INT1", "INT"): lambda a: a - 2,
}


def identity_chain_residual(pair: Tuple[str, str], alpha: float, xs: Sequence[float],
                            h: float = 1e-3) -> float:
    '''largest relative mismatch between the central difference of the
    higher identity's formula side and the lower one's, scaled by the
    exponent factor.'''
    pair = tuple(pair)
    if pair not in _CHAIN:
        raise DomainError("no derivative relation between %s and %s" % pair)
    upper, lower = pair
    check_identity(upper, alpha)
    check_identity(lower, alpha)
    factor = _CHAIN[pair](alpha)
    worst = 0.0
    for x in xs:
        d = (identity_rhs(upper, alpha, x + h) - identity_rhs(upper, alpha, x - h)) / (2 * h)
        expected = factor * identity_rhs(lower, alpha, x)
        worst = max(worst, abs(d - expected) / max(1.0, abs(expected)))
    return worst


def verify_euler_lagrange(k: Kernel, interior_pts: int = 50, exterior_span: Optional[float] = None,
                          tol: float = 1e-6, n_exterior: int = 1000) -> ELReport:
    '''check that the quadrature potential of the closed form equals eta
    on the support and is not below it outside.

    Interior points are Chebyshev points of the open support, exterior
    points *n_exterior* equispaced points on each side over
    *exterior_span* (default 3R). For the logarithmic kernel eta is
    the quadrature potential at the centre.
    '''
    s = build_solution(k)
    a, R = s.center, s.R
    span = 3 * R if exterior_span is None else float(exterior_span)
    empirical = s.eta is None
    eta = s.eta_empirical() if empirical else s.eta

    inside = chebyshev_points(a - R, a + R, interior_pts)
    right = numpy.linspace(a + R, a + R + span, n_exterior)
    outside = numpy.concatenate([right, 2 * a - right])

    dev = numpy.abs(potential_at(s, k, inside) - eta)
    slack = potential_at(s, k, outside) - eta
    report = ELReport(k.alpha, k.regime.value, eta, empirical, int(inside.size),
                      int(outside.size), float(numpy.max(dev)), float(numpy.min(slack)), tol)
    log.info("Euler-Lagrange alpha=%g regime=%s: interior %.3g, exterior %.3g (%s)",
             k.alpha, k.regime.value, report.max_interior_dev, report.min_exterior_slack,
             "pass" if report.passed else "FAIL")
    return report


def verify_el_suite(kernels: Optional[Iterable] = None, tol: float = 1e-6):
    '''run :func:`verify_euler_lagrange` for kernels or (alpha, regime) pairs.'''
    if kernels is None:
        kernels = EL_ALPHAS
    out = []
    for k in kernels:
        if not isinstance(k, Kernel):
            k = Kernel.create(*k)
        out.append(verify_euler_lagrange(k, tol=tol))
    return out


def recovered_support_radius(k: Kernel, threshold: float = 1e-8) -> float:
    '''distance from the centre at which the quadrature potential first
    exceeds eta by *threshold*.'''
    s = build_solution(k)
    eta = s.eta_empirical()

    def excess(r):
        return potential_at(s, k, s.center + r) - eta - threshold

    hi = 1.0
    while excess(hi) <= 0:
        hi *= 2
        if hi > 1e6:
            raise DomainError("potential does not grow away from the centre")
    return scipy.optimize.brentq(excess, 0.0, hi, xtol=1e-12)


def form_terms(k: Kernel):
    '''the kernel of the quadratic form whose positivity gives convexity.

    ``|r|**alpha / alpha`` in regime A, ``-|r|**alpha / alpha`` in
    regime B and ``-log|r|`` for the logarithmic kernel.
    '''
    a = k.alpha
    if k.regime is Regime.A:
        return ((1.0 / a, a),)
    if k.is_log:
        return ((-1.0, LOG),)
    return ((-1.0 / a, a),)


def form_matrix(k: Kernel, grid):
    '''matrix of the quadratic form on a uniform grid; cell averages
    where the form kernel is singular at 0.'''
    x = numpy.asarray(grid, dtype=float)
    d = numpy.abs(x[:, None] - x[None, :])
    terms = form_terms(k)
    if k.finite_at_zero:
        (coef, power), = terms
        return coef * d ** power
    h = (x[-1] - x[0]) / (x.size - 1)
    return numpy.array(cell_average(terms, d, h), ndmin=2)


def constraint_matrix(k: Kernel, grid):
    '''rows spanning the constraints: mass, plus first moment in regime A.'''
    x = numpy.asarray(grid, dtype=float)
    rows = [numpy.ones_like(x)]
    if k.regime is Regime.A:
        rows.append(x)
    return numpy.array(rows)


def _grid(k, grid):
    if grid is None:
        R = build_solution(k).R
        grid = (-1.5 * R, 1.5 * R, 101)
    lo, hi, m = grid
    return numpy.linspace(lo, hi, int(m))


def convexity_probe(k: Kernel, trials: int = 1000, grid=None, seed: int = 0) -> ProbeReport:
    '''evaluate the quadratic form at random admissible perturbations.

    Each draw is a standard normal vector on the grid, projected onto
    the complement of the constraint rows and normalised; draws that
    vanish after projection are skipped.
    '''
    if trials < 1:
        raise DomainError("trials must be >= 1, got %r" % trials)
    x = _grid(k, grid)
    M = form_matrix(k, x)
    Q, _ = numpy.linalg.qr(constraint_matrix(k, x).T)
    rng = XorShift64Star(seed)
    lowest = math.inf
    skipped = 0
    for _ in range(trials):
        nu = rng.normal_array(x.size)
        nu = nu - Q @ (Q.T @ nu)
        norm = numpy.linalg.norm(nu)
        if norm < 1e-12:
            skipped += 1
            continue
        nu /= norm
        lowest = min(lowest, float(nu @ M @ nu))
    report = ProbeReport(k.alpha, k.regime.value, lowest, trials, skipped)
    log.info("convexity probe alpha=%g regime=%s: min %.3g over %i draws",
             k.alpha, k.regime.value, lowest, trials - skipped)
    return report


def projected_gram_min_eigenvalue(k: Kernel, grid=None) -> float:
    '''smallest eigenvalue of the form matrix restricted to the
    admissible perturbations.'''
    x = _grid(k, grid)
    N = scipy.linalg.null_space(constraint_matrix(k, x))
    P = N.T @ form_matrix(k, x) @ N
    return float(scipy.linalg.eigvalsh(0.5 * (P + P.T))[0])


__all__ = [
    "IDENTITIES",
    "IdentityReport",
    "ELReport",
    "ProbeReport",
    "check_identity",
    "identity_lhs",
    "identity_rhs",
    "verify_identity",
    "verify_identity_suite",
    "identity_chain_residual",
    "verify_euler_lagrange",
    "verify_el_suite",
    "recovered_support_radius",
    "form_terms",
    "form_matrix",
    "convexity_probe",
    "projected_gram_min_eigenvalue",
]
