'''Numerical integration.

Three tools are provided:

* :func:`gauss_jacobi` -- Gauss rules for the weight ``(1 - y**2)**p``
  on [-1, 1], computed by the Golub-Welsch eigenvalue method.
* :func:`integrate_adaptive` -- globally adaptive Gauss-Kronrod
  (7/15 points) integration with optional power substitutions at
  singular endpoints.
* :func:`integrate_weighted` -- the same engine for integrals of the
  form ``(x - a)**left * (b - x)**right * f(x)`` where the endpoint
  powers are absorbed exactly by the substitution. This is the
  workhorse for densities close to the singular limit.

:func:`jacobi_power_integral` combines them into the integrals
``int (1 - u**2)**p |t - u|**beta du`` used throughout the package.
'''
import functools
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy
import scipy.linalg

from pyinteract.kernel import LOG
from pyinteract.specfun import ln_gamma
from pyinteract.utils import AccuracyError, DomainError, log, tree_sum

# Kronrod 15 point nodes (positive half, descending, last is 0) and weights
XGK = numpy.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])

WGK = numpy.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])

# Gauss 7 point weights, for nodes XGK[1], XGK[3], XGK[5] and 0
WG = numpy.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = numpy.concatenate([-XGK[:7], [0.0], XGK[:7][::-1]])
_WK = numpy.concatenate([WGK[:7], [WGK[7]], WGK[:7][::-1]])
_WG = numpy.zeros(15)
_WG[[1, 3, 5, 7, 9, 11, 13]] = [WG[0], WG[1], WG[2], WG[3], WG[2], WG[1], WG[0]]

EPMACH = numpy.finfo(float).eps
UFLOW = numpy.finfo(float).tiny

DEFAULT_NODES = 128
HINTS = ("none", "left", "right", "both")


@dataclass(frozen=True)
class JacobiRule:
    '''a Gauss rule for the weight ``(1 - y**2)**p`` on [-1, 1].'''
    n: int
    p: float
    nodes: numpy.ndarray
    weights: numpy.ndarray

    def integrate(self, f: Callable) -> float:
        '''apply the rule to the vectorised function *f*.'''
        return float(tree_sum(self.weights * f(self.nodes)))

    @property
    def total_weight(self) -> float:
        return float(tree_sum(self.weights))


def jacobi_weight_integral(p: float) -> float:
    '''exact value of the integral of ``(1 - y**2)**p`` over [-1, 1].'''
    if not p > -1:
        raise DomainError("Jacobi exponent must be > -1, got %r" % p)
    return math.sqrt(math.pi) * math.exp(ln_gamma(p + 1) - ln_gamma(p + 1.5))


@functools.lru_cache(maxsize=64)
def _gauss_jacobi(n, p):
    k = numpy.arange(1, n, dtype=float)
    s = k + p
    # recurrence of the monic symmetric Jacobi polynomials
    with numpy.errstate(divide="ignore", invalid="ignore"):
        b2 = k * (k + 2 * p) / ((2 * s - 1) * (2 * s + 1))
    if n > 1:
        b2[0] = 1.0 / (3.0 + 2 * p)
    diag = numpy.zeros(n)
    off = numpy.sqrt(b2)
    if n == 1:
        x, v = numpy.zeros(1), numpy.ones((1, 1))
    else:
        x, v = scipy.linalg.eigh_tridiagonal(diag, off)
    w = jacobi_weight_integral(p) * v[0, :] ** 2
    # enforce the reflection symmetry of the rule exactly
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(n: int = DEFAULT_NODES, p: float = 0.0) -> JacobiRule:
    '''n point Gauss-Jacobi rule with both Jacobi parameters equal to *p*.

    Nodes are the eigenvalues of the symmetric tridiagonal Jacobi
    matrix, weights the squared first components of its normalised
    eigenvectors times the total weight.
    '''
    n = int(n)
    p = float(p)
    if n < 1:
        raise DomainError("number of nodes must be >= 1, got %r" % n)
    if not p > -1:
        raise DomainError("Jacobi exponent must be > -1, got %r" % p)
    x, w = _gauss_jacobi(n, p)
    return JacobiRule(n, p, x, w)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    intervals: int


class _Map(object):
    '''maps the unit interval of the substitution variable s onto
    [lo, hi] within the full range [a, b] and yields the point, the
    two endpoint distances and the Jacobian factor.'''

    def __init__(self, a, b, lo, hi, side=None, exponent=0.0, weighted=False):
        self.a, self.b, self.lo, self.hi = a, b, lo, hi
        self.side = side
        self.e = exponent
        self.weighted = weighted
        self.gamma = 1.0 / (1.0 + exponent)
        self.length = hi - lo

    @property
    def range(self):
        if self.side is None:
            return (self.lo, self.hi)
        return (0.0, 1.0)

    def __call__(self, s):
        if self.side is None:
            x = s
            dl = s - self.a
            dr = self.b - s
            jac = numpy.ones_like(s)
            return x, dl, dr, jac
        ls = numpy.log(s)
        sg = numpy.exp(self.gamma * ls)
        rest = -numpy.expm1(self.gamma * ls)
        near = self.length * sg
        far = self.length * rest
        if self.weighted:
            jac = numpy.full_like(s, self.length ** (1.0 + self.e) / (1.0 + self.e))
        else:
            jac = self.length * self.gamma * numpy.exp((self.gamma - 1.0) * ls)
        if self.side == "left":
            dl = near
            dr = (self.b - self.hi) + far
            x = self.a + dl
        else:
            dr = near
            dl = (self.lo - self.a) + far
            x = self.b - dr
        return x, dl, dr, jac


def _kronrod(g, lo, hi):
    # g is evaluated on all 15 nodes of all intervals at once
    lo = numpy.asarray(lo, dtype=float)
    hi = numpy.asarray(hi, dtype=float)
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    s = center[:, None] + half[:, None] * _NODES[None, :]
    fv = g(s)
    resk = (fv * _WK).sum(axis=1) * half
    resg = (fv * _WG).sum(axis=1) * half
    mean = resk / (2 * half)
    resabs = (numpy.abs(fv) * _WK).sum(axis=1) * numpy.abs(half)
    resasc = (numpy.abs(fv - mean[:, None]) * _WK).sum(axis=1) * numpy.abs(half)
    err = numpy.abs(resk - resg)
    with numpy.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * numpy.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = numpy.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * EPMACH * resabs
    err = numpy.where(resabs > UFLOW / (50.0 * EPMACH), numpy.maximum(floor, err), err)
    return resk, err


def _adaptive(g, lo, hi, tol, rtol, max_intervals, initial=4):
    edges = numpy.linspace(lo, hi, initial + 1)
    vals, errs = _kronrod(g, edges[:-1], edges[1:])
    if not (numpy.all(numpy.isfinite(vals)) and numpy.all(numpy.isfinite(errs))):
        raise AccuracyError("integrand is not finite on [%g, %g]" % (lo, hi),
                            estimate=float("nan"), error=float("inf"))
    heap = []
    for i in range(initial):
        heapq.heappush(heap, (-errs[i], i, edges[i], edges[i + 1], vals[i]))
    counter = initial
    total = math.fsum(vals)
    total_err = math.fsum(errs)

    while total_err > max(tol, rtol * abs(total)):
        if len(heap) >= max_intervals:
            raise AccuracyError(
                "tolerance %g not reached with %i intervals" % (tol, len(heap)),
                estimate=total, error=total_err)
        neg_err, _, a1, b1, v1 = heapq.heappop(heap)
        mid = 0.5 * (a1 + b1)
        if not (a1 < mid < b1):
            raise AccuracyError(
                "interval [%r, %r] cannot be subdivided further" % (a1, b1),
                estimate=total, error=total_err)
        v, e = _kronrod(g, [a1, mid], [mid, b1])
        if not (numpy.all(numpy.isfinite(v)) and numpy.all(numpy.isfinite(e))):
            raise AccuracyError("integrand is not finite on [%g, %g]" % (a1, b1),
                                estimate=total, error=total_err)
        heapq.heappush(heap, (-e[0], counter, a1, mid, v[0]))
        heapq.heappush(heap, (-e[1], counter + 1, mid, b1, v[1]))
        counter += 2
        # recompute from the heap to avoid drift in the running sums
        total = math.fsum(item[4] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)

    if len(heap) > 0.8 * max_intervals:
        log.warning("adaptive quadrature used %i of %i intervals", len(heap), max_intervals)
    return total, total_err, len(heap)


def _maps(a, b, left, right, weighted):
    if left is None and right is None:
        return [_Map(a, b, a, b, weighted=weighted)]
    if right is None:
        return [_Map(a, b, a, b, "left", left, weighted)]
    if left is None:
        return [_Map(a, b, a, b, "right", right, weighted)]
    mid = 0.5 * (a + b)
    return [_Map(a, b, a, mid, "left", left, weighted),
            _Map(a, b, mid, b, "right", right, weighted)]


def _integrate(f, a, b, tol, rtol, left, right, distances, weighted, max_intervals):
    a, b = float(a), float(b)
    if not a < b:
        if a == b:
            return QuadratureResult(0.0, 0.0, 0)
        r = _integrate(f, b, a, tol, rtol, right, left, distances, weighted, max_intervals)
        return QuadratureResult(-r.value, r.error, r.intervals)
    for e in (left, right):
        if e is not None and not e > -1:
            raise DomainError("endpoint exponent must be > -1, got %r" % e)

    maps = _maps(a, b, left, right, weighted)
    value, error, intervals = [], [], 0
    for m in maps:
        def g(s, m=m):
            x, dl, dr, jac = m(s)
            if weighted:
                # the other endpoint's power is smooth on this piece
                if m.side == "left" and right is not None:
                    jac = jac * dr ** right
                elif m.side == "right" and left is not None:
                    jac = jac * dl ** left
            fx = f(x, dl, dr) if distances else f(x)
            with numpy.errstate(invalid="ignore"):
                out = numpy.asarray(fx, dtype=float) * jac
            if not weighted:
                # 0 * inf where the Jacobian underflows at the singular end
                out = numpy.where(jac == 0, 0.0, out)
            return out
        lo, hi = m.range
        v, e, n = _adaptive(g, lo, hi, tol / len(maps), rtol, max_intervals)
        value.append(v)
        error.append(e)
        intervals += n
    return QuadratureResult(math.fsum(value), math.fsum(error), intervals)


def _hint_exponents(hint, exponent):
    if hint not in HINTS:
        raise DomainError("unknown substitution hint %r, expected one of %s" % (hint, HINTS))
    if hint == "none":
        return None, None
    if exponent is None:
        exponent = -0.5
    if isinstance(exponent, (tuple, list)):
        el, er = exponent
    else:
        el = er = exponent
    return (el if hint in ("left", "both") else None,
            er if hint in ("right", "both") else None)


def integrate_adaptive_result(f, a, b, tol=1e-10, hint="none", exponent=None,
                              distances=False, rtol=1e-13,
                              max_intervals=2000) -> QuadratureResult:
    '''as :func:`integrate_adaptive` but return value, error bound and
    the number of intervals used.'''
    left, right = _hint_exponents(hint, exponent)
    return _integrate(f, a, b, tol, rtol, left, right, distances, False, max_intervals)


def integrate_adaptive(f, a, b, tol=1e-10, hint="none", exponent=None,
                       distances=False, rtol=1e-13, max_intervals=2000) -> float:
    '''integrate *f* over [a, b] to an absolute error of *tol*.

    The absolute tolerance is relaxed to ``rtol * |integral|`` for
    large integrals, below which rounding dominates.

    *hint* declares integrable endpoint singularities (``"left"``,
    ``"right"`` or ``"both"``). A singular end with exponent *e*
    (the integrand behaves like ``distance**e``) is removed with the
    substitution ``distance = L * s**(1 / (1 + e))``; *exponent* is
    a number or a ``(left, right)`` pair and defaults to -0.5.

    With *distances* set, *f* is called as ``f(x, dl, dr)`` where
    ``dl = x - a`` and ``dr = b - x`` are computed without
    cancellation, otherwise as ``f(x)``. *f* must accept numpy
    arrays.

    Raises :class:`AccuracyError` carrying the best estimate and its
    error bound when *max_intervals* subintervals do not suffice.
    '''
    return integrate_adaptive_result(f, a, b, tol, hint, exponent, distances,
                                     rtol, max_intervals).value


def integrate_weighted(f, a, b, left=None, right=None, tol=1e-12, rtol=1e-13,
                       distances=True, max_intervals=2000) -> float:
    '''integral of ``(x - a)**left * (b - x)**right * f`` over [a, b].

    The endpoint powers are never evaluated: the substitution absorbs
    them exactly, so exponents arbitrarily close to -1 are fine. A
    side whose exponent is None carries no weight.
    '''
    return _integrate(f, a, b, tol, rtol, left, right, distances, True,
                      max_intervals).value


def _singular_power(beta):
    # powers that are smooth at 0 need no substitution
    if beta == LOG:
        return None
    if beta >= 0 and float(beta).is_integer():
        return None
    return beta


def _power(d, beta):
    if beta == LOG:
        return numpy.log(d)
    return d ** beta


def jacobi_power_integral(beta, t: float, p: float, odd: bool = False,
                          tol: float = 1e-12, rtol: float = 1e-13) -> float:
    '''integral over [-1, 1] of ``(1 - u**2)**p * |t - u|**beta``.

    With *odd* set the integrand carries the factor ``sgn(t - u)``.
    *beta* may be :data:`pyinteract.kernel.LOG`, standing for
    ``log|t - u|``. Inside (-1, 1) the range is split at the kink
    ``u = t``; each endpoint power is absorbed by substitution.
    '''
    t = float(t)
    if beta != LOG and not beta > -1:
        raise DomainError("power %r is not integrable" % (beta,))
    sb = _singular_power(beta)

    if abs(t) < 1:
        # [-1, t]: (1 + u) = dl, (1 - u) = (1 - t) + dr, t - u = dr
        if sb is None:
            below = integrate_weighted(
                lambda x, dl, dr: ((1 - t) + dr) ** p * _power(dr, beta),
                -1.0, t, left=p, tol=tol / 2, rtol=rtol)
        else:
            below = integrate_weighted(
                lambda x, dl, dr: ((1 - t) + dr) ** p,
                -1.0, t, left=p, right=sb, tol=tol / 2, rtol=rtol)
        # [t, 1]: u - t = dl, (1 + u) = (1 + t) + dl, (1 - u) = dr
        if sb is None:
            above = integrate_weighted(
                lambda x, dl, dr: ((1 + t) + dl) ** p * _power(dl, beta),
                t, 1.0, right=p, tol=tol / 2, rtol=rtol)
        else:
            above = integrate_weighted(
                lambda x, dl, dr: ((1 + t) + dl) ** p,
                t, 1.0, left=sb, right=p, tol=tol / 2, rtol=rtol)
        return below - above if odd else below + above

    sign = 1.0 if t > 0 else -1.0
    gap = abs(t) - 1.0
    if gap == 0:
        # kernel singularity merges with the density endpoint
        if beta == LOG:
            value = integrate_weighted(
                lambda x, dl, dr: numpy.log(dr if t > 0 else dl),
                -1.0, 1.0, left=p, right=p, tol=tol, rtol=rtol)
        elif t > 0:
            value = integrate_weighted(lambda x, dl, dr: numpy.ones_like(x),
                                       -1.0, 1.0, left=p, right=p + beta, tol=tol, rtol=rtol)
        else:
            value = integrate_weighted(lambda x, dl, dr: numpy.ones_like(x),
                                       -1.0, 1.0, left=p + beta, right=p, tol=tol, rtol=rtol)
    elif t > 0:
        value = integrate_weighted(lambda x, dl, dr: _power(gap + dr, beta),
                                   -1.0, 1.0, left=p, right=p, tol=tol, rtol=rtol)
    else:
        value = integrate_weighted(lambda x, dl, dr: _power(gap + dl, beta),
                                   -1.0, 1.0, left=p, right=p, tol=tol, rtol=rtol)
    return sign * value if odd else value


__all__ = [
    "JacobiRule",
    "QuadratureResult",
    "gauss_jacobi",
    "jacobi_weight_integral",
    "integrate_adaptive",
    "integrate_adaptive_result",
    "integrate_weighted",
    "jacobi_power_integral",
]
