'''Explicit minimizers of the interaction energy.

For every admissible exponent the minimizer is, up to translation,
the measure with density ::

    rho(x) = R**(alpha - 2) / C * (R**2 - (x - a)**2) ** (-(alpha - 1) / 2)

on ``|x - a| < R``. This module provides the constants of the
solution, its energy, density, distribution function and the exact
potential, which is constant on the support and exceeds that constant
outside by a nonnegative remainder.

The remainders are one-dimensional integrals with an integrable
endpoint singularity and are evaluated with
:func:`pyinteract.quadrature.integrate_weighted`.
'''
import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy

from pyinteract.kernel import LOG, Kernel, Regime
from pyinteract.quadrature import gauss_jacobi, integrate_weighted, jacobi_power_integral
from pyinteract.specfun import gamma, ln_gamma, reg_inc_beta
from pyinteract.utils import DomainError, NotAvailableError, log, tree_sum

SQRT_PI = math.sqrt(math.pi)

# beyond this distance from the support the potential integrand is
# analytic enough for a plain Gauss-Jacobi rule
FAR_FIELD = 1.05

REMAINDER_TOL = 1e-12


@dataclass(frozen=True)
class Constants:
    '''the constants of the closed-form solution at exponent *alpha*.

    ``c_alpha`` equals ``pi / sin((alpha - 1) pi / 2)``; it is
    negative for alpha < 1 and infinite at alpha == 1.
    ``c_alpha_1`` is its negative and has the same pole.
    '''
    alpha: float
    C_alpha: float
    C_alpha_prime: float
    c_alpha: float
    c_alpha_1: float
    D_alpha: float
    tilde_C_alpha: float

    def to_dict(self):
        return {k: _jsonable(v) for k, v in self.__dict__.items()}


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


@functools.lru_cache(maxsize=256)
def constants(alpha: float) -> Constants:
    '''compute :class:`Constants` for ``-1 < alpha < 3``.'''
    a = float(alpha)
    if not -1 < a < 3:
        raise DomainError("constants are defined for -1 < alpha < 3, got %r" % a)
    C = SQRT_PI * math.exp(ln_gamma((3 - a) / 2) - ln_gamma((4 - a) / 2))
    # Gamma((a + 1) / 2) Gamma((3 - a) / 2) is continuous across a = 1
    Cp = math.exp(ln_gamma((a + 1) / 2) + ln_gamma((3 - a) / 2))
    if a == 1:
        c = math.inf
        c1 = -math.inf
    else:
        c = math.pi / math.sin((a - 1) * math.pi / 2)
        # sign carried by Gamma((a - 1) / 2), negative on (-1, 1)
        c1 = -C * gamma((a - 1) / 2) * math.exp(ln_gamma((4 - a) / 2)) / SQRT_PI
    D = C * math.exp(ln_gamma((a + 1) / 2) + ln_gamma((4 - a) / 2)) / SQRT_PI
    return Constants(a, C, Cp, c, c1, D, C / (4 - a))


def support_radius(alpha: float) -> float:
    '''half width of the support of the minimizer.

    Evaluated as ``R**(alpha - 2) = sqrt(pi) / (2 Gamma((4 - alpha) / 2)
    Gamma((alpha + 1) / 2))``, which equals ``C / (2 C')``.
    '''
    a = float(alpha)
    if not -1 < a < 3 or a == 2:
        raise DomainError("support radius is defined for -1 < alpha < 3, alpha != 2, got %r" % a)
    ln_inside = 0.5 * math.log(math.pi) - math.log(2) - ln_gamma((4 - a) / 2) - ln_gamma((a + 1) / 2)
    return math.exp(ln_inside / (a - 2))


def exact_energy(alpha: float, regime) -> float:
    '''the minimal energy; raises :class:`NotAvailableError` for the
    logarithmic kernel.'''
    regime = Regime.coerce(regime)
    a = float(alpha)
    if regime is Regime.B and a == 0:
        raise NotAvailableError("no closed form for the energy of the logarithmic kernel")
    R = support_radius(a)
    e = (a - 2) * R * R / (2 * a * (4 - a))
    return -e if regime is Regime.A else e


def two_dirac_energy(alpha: float) -> float:
    '''energy of ``(delta(-1/2) + delta(1/2)) / 2``, the minimizer for
    ``alpha >= 3``.'''
    a = float(alpha)
    if not a >= 3:
        raise DomainError("two_dirac_energy applies to alpha >= 3, got %r" % a)
    return (1 / a - 0.5) / 4


def profile_trend(alpha: float) -> str:
    '''how the density varies with the distance from the centre.'''
    a = float(alpha)
    if a < 1:
        return "decreasing"
    if a == 1:
        return "uniform"
    return "increasing"


def _tail(alpha, X):
    # integral of (w**2 - 1)**(-(3 - alpha) / 2) over [X, inf), written
    # with w = s**-0.5 as an integral over (0, 1 / X**2]
    q = -(3 - alpha) / 2
    top = 1.0 / (X * X)
    gap = 1.0 - top
    return 0.5 * integrate_weighted(
        lambda s, dl, dr: (gap + dr) ** q, 0.0, top,
        left=-alpha / 2, tol=REMAINDER_TOL)


def remainder_f(alpha: float, t: float) -> float:
    '''excess of the potential over its support value, in units of
    the radius, for ``1 < alpha < 3``.

    Zero for ``|t| <= 1``, otherwise ::

        (alpha - 1)(alpha - 2)/2 * C * int_1^|t| (y**2 - 1)**(-(3 - alpha)/2) (|t| - y)**2 dy
    '''
    a = float(alpha)
    if not 1 < a < 3:
        raise DomainError("remainder_f requires 1 < alpha < 3, got %r" % a)
    X = abs(float(t))
    if X <= 1:
        return 0.0
    q = -(3 - a) / 2
    cst = constants(a)
    integral = integrate_weighted(
        lambda y, dl, dr: (2.0 + dl) ** q * dr * dr, 1.0, X,
        left=q, tol=REMAINDER_TOL)
    return 0.5 * (a - 1) * (a - 2) * cst.C_alpha * integral


def remainder_g(alpha: float, t: float) -> float:
    '''excess of the potential over its support value, in units of
    the radius, for ``-1 < alpha < 2``.

    Zero for ``|t| <= 1``, otherwise ``D (|t| - 1)**2`` plus
    ``(alpha - 1)(alpha - 2) C`` times the triple integral of the
    tail ``int_z^inf (w**2 - 1)**(-(3 - alpha)/2) dw``.
    '''
    a = float(alpha)
    if not -1 < a < 2:
        raise DomainError("remainder_g requires -1 < alpha < 2, got %r" % a)
    X = abs(float(t))
    if X <= 1:
        return 0.0
    cst = constants(a)
    value = cst.D_alpha * (X - 1) ** 2
    if a == 1:
        return value
    return value + (a - 1) * (a - 2) * cst.C_alpha * _triple_tail(a, X)


def _triple_tail(alpha, X):
    # int_1^X int_1^y int_z^inf h(w) dw dz dy, reduced to one dimension
    q = -(3 - alpha) / 2
    inner = integrate_weighted(
        lambda w, dl, dr: (2.0 + dl) ** q * ((X - 1) + dr) / 2, 1.0, X,
        left=q + 1, tol=REMAINDER_TOL)
    return inner + 0.5 * (X - 1) ** 2 * _tail(alpha, X)


def tail_integral(alpha: float, X: float) -> float:
    '''``int_X^inf (w**2 - 1)**(-(3 - alpha)/2) dw`` for ``X > 1``.'''
    a = float(alpha)
    if not -1 < a < 2:
        raise DomainError("tail integral converges for -1 < alpha < 2, got %r" % a)
    if not X > 1:
        raise DomainError("tail integral requires X > 1, got %r" % X)
    return _tail(a, float(X))


@dataclass(frozen=True)
class ClosedFormSolution:
    '''the explicit minimizer for a kernel, centred at *center*.

    :attr:`energy` and :attr:`eta` are None for the logarithmic
    kernel, for which no closed form exists.
    '''
    kernel: Kernel
    center: float
    R: float
    energy: Optional[float]
    eta: Optional[float]
    constants: Constants = field(repr=False)

    @property
    def alpha(self) -> float:
        return self.kernel.alpha

    @property
    def regime(self) -> Regime:
        return self.kernel.regime

    @property
    def exponent(self) -> float:
        '''Jacobi exponent of the density profile.'''
        return -(self.alpha - 1) / 2

    @property
    def support(self):
        return (self.center - self.R, self.center + self.R)

    def density(self, x):
        '''vectorised density, 0 outside the open support.'''
        t = numpy.abs(numpy.asarray(x, dtype=float) - self.center)
        R = self.R
        inside = t < R
        with numpy.errstate(divide="ignore", invalid="ignore"):
            prof = ((R - t) * (R + t)) ** self.exponent
        scale = R ** (self.alpha - 2) / self.constants.C_alpha
        return numpy.where(inside, scale * prof, 0.0)[()]

    def cdf(self, x):
        '''vectorised distribution function.'''
        p = (3 - self.alpha) / 2
        u = (numpy.asarray(x, dtype=float) - self.center + self.R) / (2 * self.R)
        u = numpy.clip(u, 0.0, 1.0)
        return numpy.vectorize(lambda v: reg_inc_beta(p, p, v), otypes=[float])(u)[()]

    def second_moment(self) -> float:
        '''second moment about the centre, ``R**2 / (4 - alpha)``.'''
        return self.R ** 2 / (4 - self.alpha)

    def remainder(self, t: float) -> float:
        if self.regime is Regime.A:
            return remainder_f(self.alpha, t)
        return remainder_g(self.alpha, t)

    def potential_exact(self, x: float) -> float:
        '''the potential from the closed form: eta on the support plus
        the scaled remainder outside.'''
        if self.eta is None:
            raise NotAvailableError("potential constant of the logarithmic kernel has no closed form")
        t = (float(x) - self.center) / self.R
        if abs(t) <= 1:
            return self.eta
        return self.eta + self.R ** 2 / (2 * self.constants.C_alpha_prime) * self.remainder(t)

    def potential_quadrature(self, x: float, n: int = 128, tol: float = 1e-12) -> float:
        '''the potential by direct integration of the kernel against
        the density, term by term in the normalised variable.

        Far from the support a Gauss-Jacobi rule with *n* nodes is
        used; otherwise the range is split at the kink and each piece
        integrated adaptively.
        '''
        t = (float(x) - self.center) / self.R
        p = self.exponent
        far = abs(t) >= FAR_FIELD
        rule = gauss_jacobi(n, p) if far else None
        total = []
        for coef, power in self.kernel.terms:
            if power == LOG:
                if far:
                    j = rule.integrate(lambda u: numpy.log(numpy.abs(t - u)))
                else:
                    j = jacobi_power_integral(LOG, t, p, tol=tol)
                total.append(coef * (math.log(self.R) * self.constants.C_alpha + j))
            else:
                if far:
                    j = rule.integrate(lambda u: numpy.abs(t - u) ** power)
                else:
                    j = jacobi_power_integral(power, t, p, tol=tol)
                total.append(coef * self.R ** power * j)
        return math.fsum(total) / self.constants.C_alpha

    def eta_empirical(self) -> float:
        '''eta obtained as the quadrature potential at the centre.'''
        return self.potential_quadrature(self.center)

    def energy_empirical(self) -> float:
        return 0.5 * self.eta_empirical()

    def energy_quadrature(self, n: int = 16) -> float:
        '''half the integral of the quadrature potential against the
        density, by an *n* point Gauss-Jacobi rule.'''
        rule = gauss_jacobi(n, self.exponent)
        phi = numpy.array([self.potential_quadrature(self.center + self.R * u)
                           for u in rule.nodes])
        return 0.5 * float(tree_sum(rule.weights * phi)) / self.constants.C_alpha

    def summary(self) -> dict:
        '''flat dictionary of the solution and its constants.'''
        cst = self.constants
        out = {
            "alpha": self.alpha,
            "regime": self.regime.value,
            "center": self.center,
            "R": self.R,
            "E": self.energy if self.energy is not None else "n/a",
            "eta": self.eta if self.eta is not None else "n/a",
            "C_alpha": cst.C_alpha,
            "C_alpha_prime": cst.C_alpha_prime,
            "c_alpha": _jsonable(cst.c_alpha),
            "tilde_C_alpha": cst.tilde_C_alpha,
            "second_moment": self.second_moment(),
            "profile": profile_trend(self.alpha),
        }
        if self.regime is Regime.B:
            out["c_alpha_1"] = _jsonable(cst.c_alpha_1)
            out["D_alpha"] = cst.D_alpha
        if self.energy is None:
            eta = self.eta_empirical()
            out["eta_empirical"] = eta
            out["energy_empirical"] = 0.5 * eta
            out["empirical"] = True
        return out

    def to_dict(self) -> dict:
        return {"type": "closedform",
                "alpha": self.alpha,
                "regime": self.regime.value,
                "center": self.center}


def build_solution(k: Kernel, a: float = 0.0) -> ClosedFormSolution:
    '''the closed-form minimizer of kernel *k* centred at *a*.'''
    R = support_radius(k.alpha)
    try:
        E = exact_energy(k.alpha, k.regime)
        eta = 2 * E
    except NotAvailableError:
        log.debug("energy of the logarithmic kernel left to quadrature")
        E = eta = None
    return ClosedFormSolution(k, float(a), R, E, eta, constants(k.alpha))


def density(s: ClosedFormSolution, x):
    return s.density(x)


def cdf(s: ClosedFormSolution, x):
    return s.cdf(x)


def second_moment(s: ClosedFormSolution) -> float:
    return s.second_moment()


def potential_exact(s: ClosedFormSolution, x: float) -> float:
    return s.potential_exact(x)


__all__ = [
    "Constants",
    "ClosedFormSolution",
    "constants",
    "support_radius",
    "exact_energy",
    "two_dirac_energy",
    "profile_trend",
    "remainder_f",
    "remainder_g",
    "tail_integral",
    "build_solution",
    "density",
    "cdf",
    "second_moment",
    "potential_exact",
]
