'''Pair interaction kernels.

Two families are supported. In regime ``A`` (2 < alpha < 3) the
kernel is ``r**alpha / alpha - r**2 / 2``: quadratic repulsion at
short range, power attraction at long range. In regime ``B``
(-1 < alpha < 2) it is ``r**2 / 2 - r**alpha / alpha`` where the
power term is read as ``log r`` at ``alpha == 0``.

Both kernels are written as a short sum of power terms
(:attr:`Kernel.terms`), which is the representation the quadrature
code integrates term by term.
'''
import enum
import functools
import math
from dataclasses import dataclass
from typing import Tuple

import numpy

from pyinteract.utils import DomainError, tree_sum

# marker for the logarithmic term in Kernel.terms
LOG = "log"


class Regime(enum.Enum):
    A = "A"
    B = "B"

    @property
    def interval(self) -> Tuple[float, float]:
        '''open interval of admissible exponents.'''
        return (2.0, 3.0) if self is Regime.A else (-1.0, 2.0)

    @classmethod
    def coerce(cls, value) -> "Regime":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError("unknown regime %r, expected 'A' or 'B'" % (value,))

    @classmethod
    def infer(cls, alpha: float) -> "Regime":
        '''the regime whose interval contains *alpha*.'''
        for regime in cls:
            lo, hi = regime.interval
            if lo < alpha < hi:
                return regime
        raise DomainError("alpha=%r lies in neither regime" % (alpha,))


@dataclass(frozen=True)
class Kernel:
    '''an interaction kernel, immutable.

    Construction at or outside the endpoints of the regime's interval
    raises :class:`DomainError`.
    '''
    alpha: float
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "regime", Regime.coerce(self.regime))
        lo, hi = self.regime.interval
        if not (lo < self.alpha < hi):
            raise DomainError(
                "alpha=%r is outside the open interval (%g, %g) of regime %s" %
                (self.alpha, lo, hi, self.regime.value))

    @classmethod
    def create(cls, alpha: float, regime=None) -> "Kernel":
        '''build a kernel, inferring the regime from *alpha* if not given.'''
        if regime is None:
            regime = Regime.infer(float(alpha))
        return cls(alpha, regime)

    @property
    def is_log(self) -> bool:
        return self.regime is Regime.B and self.alpha == 0

    @property
    def finite_at_zero(self) -> bool:
        '''False when K(0) = +inf (regime B, alpha <= 0).'''
        return not (self.regime is Regime.B and self.alpha <= 0)

    @property
    def terms(self):
        '''the kernel as a tuple of ``(coefficient, power)`` pairs.

        A power of :data:`LOG` stands for ``log r``.
        '''
        a = self.alpha
        if self.regime is Regime.A:
            return ((1.0 / a, a), (-0.5, 2.0))
        if self.is_log:
            return ((0.5, 2.0), (-1.0, LOG))
        return ((0.5, 2.0), (-1.0 / a, a))

    def value(self, r):
        '''vectorised kernel value for ``r >= 0`` (no checks).'''
        r = numpy.asarray(r, dtype=float)
        with numpy.errstate(divide="ignore", invalid="ignore"):
            total = numpy.zeros_like(r)
            for coef, power in self.terms:
                if power == LOG:
                    total = total + coef * numpy.log(r)
                else:
                    total = total + coef * r ** power
        if not self.finite_at_zero:
            total = numpy.where(r == 0, numpy.inf, total)
        return total[()]

    def derivative(self, r):
        '''vectorised radial derivative for ``r > 0`` (no checks).'''
        r = numpy.asarray(r, dtype=float)
        with numpy.errstate(divide="ignore", invalid="ignore"):
            if self.regime is Regime.A:
                d = r ** (self.alpha - 1) - r
            else:
                d = r - r ** (self.alpha - 1)
        return d[()]

    def cell_average(self, d, h: float):
        '''average of K(|s - t|) over s in a cell of width *h* centred
        at *d* and t in the cell centred at 0.

        Exact, through the even second antiderivative of the kernel.
        Finite for every kernel, including those singular at 0.
        '''
        return cell_average(self.terms, d, h)

    def to_dict(self):
        return {"alpha": self.alpha, "regime": self.regime.value}


def second_antiderivative(terms, r):
    '''even function Phi with Phi'' equal to the sum of *terms* and
    Phi(0) = 0.'''
    r = numpy.asarray(r, dtype=float)
    total = numpy.zeros_like(r)
    for coef, power in terms:
        if power == LOG:
            with numpy.errstate(divide="ignore", invalid="ignore"):
                part = numpy.where(r > 0, 0.5 * r * r * numpy.log(r), 0.0) - 0.75 * r * r
        else:
            part = r ** (power + 2) / ((power + 1) * (power + 2))
        total = total + coef * part
    return total


def cell_average(terms, d, h: float):
    '''mean of the kernel given by *terms* between two cells of width
    *h* whose centres are *d* apart.'''
    d = numpy.abs(numpy.asarray(d, dtype=float))
    phi = second_antiderivative
    return ((phi(terms, d + h) - 2 * phi(terms, d) + phi(terms, numpy.abs(d - h))) / (h * h))[()]


# neighbours summed with the exact cell average, beyond that by the
# even moment series of the cell offset
NEAR_FIELD_EXACT = 64
NEAR_FIELD_TERMS = 100000


@functools.lru_cache(maxsize=64)
def near_field_constants(k: Kernel) -> Tuple[float, float]:
    '''constants of the singular term of *k* at unit spacing.

    Returns ``(s, b)``: *s* is the mean of the term over a cell with
    itself, *b* the sum over neighbours ``j = 1, 2, ...`` on one side
    of the cell average at distance *j* minus the point value. At
    spacing *h* both scale with ``h**alpha``; for the logarithm *s*
    gains ``coef * log(h)`` and *b* is unchanged.
    '''
    if k.finite_at_zero:
        raise DomainError("kernel %r has no singular term" % (k,))
    coef, power = k.terms[-1]
    term = (k.terms[-1],)
    s = float(cell_average(term, 0.0, 1.0))

    j = numpy.arange(1, NEAR_FIELD_EXACT + 1, dtype=float)
    r = numpy.arange(NEAR_FIELD_EXACT + 1, NEAR_FIELD_TERMS + 1, dtype=float)
    end = NEAR_FIELD_TERMS + 0.5
    if power == LOG:
        point = coef * numpy.log(j)
        d2 = -coef / r ** 2
        d4 = -6 * coef / r ** 4
        tail = -coef / end / 12
    else:
        a = power
        point = coef * j ** a
        d2 = coef * a * (a - 1) * r ** (a - 2)
        d4 = coef * a * (a - 1) * (a - 2) * (a - 3) * r ** (a - 4)
        tail = -coef * a * end ** (a - 1) / 12
    exact = cell_average(term, j, 1.0) - point
    # E[u**2] = 1/6 and E[u**4] = 1/15 for the triangular offset u
    series = d2 / 12 + d4 / 360
    b = float(tree_sum(exact)) + float(tree_sum(series)) + tail
    return s, b


def kernel_value(k: Kernel, r: float) -> float:
    '''K(r) for ``r >= 0``; +inf at r = 0 when the kernel is singular.'''
    r = float(r)
    if not r >= 0:
        raise DomainError("kernel_value: r must be >= 0, got %r" % r)
    return float(k.value(r))


def kernel_derivative(k: Kernel, r: float) -> float:
    '''K'(r) for ``r > 0``.'''
    r = float(r)
    if not r > 0:
        raise DomainError("kernel_derivative: r must be > 0, got %r" % r)
    return float(k.derivative(r))


def self_energy(k: Kernel, h: float) -> float:
    '''mean interaction of a uniform cell of width *h* with itself.'''
    return float(k.cell_average(0.0, h))


__all__ = [
    "LOG",
    "Regime",
    "Kernel",
    "kernel_value",
    "kernel_derivative",
    "self_energy",
    "second_antiderivative",
    "cell_average",
    "near_field_constants",
]
