'''Special functions: log-gamma and the regularized incomplete beta
function.

These two functions carry every transcendental constant used by the
closed-form solution. They are rational and continued-fraction
approximations in the style of the Cephes library and work on plain
Python floats.
'''
import math
from dataclasses import dataclass

from pyinteract.utils import DomainError

MACHEP = 1.11022302462515654042e-16  # 2**-53
MAXLOG = 7.09782712893383996843e2  # log(2**1024)
MINLOG = -7.08396418532264106224e2  # log(2**-1022)
LOGPI = 1.14472988584940017414
LS2PI = 0.91893853320467274178  # log(sqrt(2*pi))

BIG = 4.503599627370496e15
BIGINV = 2.22044604925031308085e-16

# rational approximation of log(Gamma(x)) on [2, 3]
GB = [
    -1.37825152569120859100e3,
    -3.88016315134637840924e4,
    -3.31612992738871184744e5,
    -1.16237097492762307383e6,
    -1.72173700820839662146e6,
    -8.53555664245765465627e5,
]

GC = [
    1.00000000000000000000e0,
    -3.51815701436523470549e2,
    -1.70642106651881159223e4,
    -2.20528590553854454839e5,
    -1.13933444367982507207e6,
    -2.53252307177582951285e6,
    -2.01889141433532773231e6,
]

# Stirling series correction for x >= 13
GA = [
    8.11614167470508450300e-4,
    -5.95061904284301438324e-4,
    7.93650340457716943945e-4,
    -2.77777777730099687205e-3,
    8.33333333333331927722e-2,
]


@dataclass(frozen=True)
class SpecFunResult:
    '''a function value together with the absolute error the
    implementation claims for it.'''
    value: float
    est_abs_err: float


def polevl(x, coef):
    '''evaluate the polynomial with coefficients *coef* (highest
    degree first) at *x*.'''
    ans = 0.0
    for c in coef:
        ans = ans * x + c
    return ans


def _check_pole(x):
    if not math.isfinite(x):
        raise DomainError("gamma function argument must be finite, got %r" % x)
    if x <= 0 and x == math.floor(x):
        raise DomainError("gamma function has a pole at %r" % x)


def _lgam(x):
    if x < 0.5:
        # reflection, Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        s = math.sin(math.pi * (x - math.floor(x)))
        return LOGPI - math.log(abs(s)) - _lgam(1.0 - x)

    if x < 13:
        z = 1.0
        p = 0.0
        u = x
        while u >= 3:
            p -= 1
            u = x + p
            z *= u
        while u < 2:
            z /= u
            p += 1
            u = x + p
        if u == 2:
            return math.log(z)
        p -= 2
        x = x + p
        p = x * polevl(x, GB) / polevl(x, GC)
        return math.log(z) + p

    q = (x - 0.5) * math.log(x) - x + LS2PI
    if x > 1.0e8:
        return q
    p = 1 / (x * x)
    if x >= 1000:
        q += ((7.9365079365079365079365e-4 * p
               - 2.7777777777777777777778e-3) * p
              + 0.0833333333333333333333) / x
    else:
        q += polevl(p, GA) / x
    return q


def ln_gamma_result(x: float) -> SpecFunResult:
    '''return log|Gamma(x)| with an error estimate.'''
    x = float(x)
    _check_pole(x)
    value = _lgam(x)
    return SpecFunResult(value, 4 * MACHEP * max(1.0, abs(value)))


def ln_gamma(x: float) -> float:
    '''natural logarithm of the absolute value of the gamma function.

    Raises :class:`DomainError` at the poles 0, -1, -2, ...
    '''
    return ln_gamma_result(x).value


def gamma_sign(x: float) -> int:
    '''sign of Gamma(x).'''
    x = float(x)
    _check_pole(x)
    if x > 0:
        return 1
    return -1 if int(math.floor(x)) % 2 else 1


def gamma(x: float) -> float:
    '''the gamma function, assembled from :func:`ln_gamma` and
    :func:`gamma_sign`.'''
    return gamma_sign(x) * math.exp(ln_gamma(x))


def ln_beta(a: float, b: float) -> float:
    '''log of the complete beta function for positive arguments.'''
    if a <= 0 or b <= 0:
        raise DomainError("ln_beta: a and b must both be > 0, got %r, %r" % (a, b))
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def _incbcf(a, b, x):
    # first continued fraction expansion
    k1 = a
    k2 = a + b
    k3 = a
    k4 = a + 1
    k5 = 1.0
    k6 = b - 1
    k7 = k4
    k8 = a + 2

    pkm2 = 0.0
    qkm2 = 1.0
    pkm1 = 1.0
    qkm1 = 1.0
    ans = 1.0
    r = 1.0
    thresh = 3 * MACHEP

    for n in range(300):
        xk = -(x * k1 * k2) / (k3 * k4)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        xk = (x * k5 * k6) / (k7 * k8)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        if qk != 0:
            r = pk / qk
        if r != 0:
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        if t < thresh:
            break

        k1 += 1
        k2 += 1
        k3 += 2
        k4 += 2
        k5 += 1
        k6 -= 1
        k7 += 2
        k8 += 2

        if abs(qk) + abs(pk) > BIG:
            pkm2 *= BIGINV
            pkm1 *= BIGINV
            qkm2 *= BIGINV
            qkm1 *= BIGINV
        if abs(qk) < BIGINV or abs(pk) < BIGINV:
            pkm2 *= BIG
            pkm1 *= BIG
            qkm2 *= BIG
            qkm1 *= BIG
    return ans


def _incbd(a, b, x):
    # second continued fraction expansion
    k1 = a
    k2 = b - 1.0
    k3 = a
    k4 = a + 1.0
    k5 = 1.0
    k6 = a + b
    k7 = a + 1.0
    k8 = a + 2.0

    pkm2 = 0.0
    qkm2 = 1.0
    pkm1 = 1.0
    qkm1 = 1.0
    z = x / (1.0 - x)
    ans = 1.0
    r = 1.0
    thresh = 3 * MACHEP

    for n in range(300):
        xk = -(z * k1 * k2) / (k3 * k4)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        xk = (z * k5 * k6) / (k7 * k8)
        pk = pkm1 + pkm2 * xk
        qk = qkm1 + qkm2 * xk
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk

        if qk != 0:
            r = pk / qk
        if r != 0:
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        if t < thresh:
            break

        k1 += 1
        k2 -= 1
        k3 += 2
        k4 += 2
        k5 += 1
        k6 += 1
        k7 += 2
        k8 += 2

        if abs(qk) + abs(pk) > BIG:
            pkm2 *= BIGINV
            pkm1 *= BIGINV
            qkm2 *= BIGINV
            qkm1 *= BIGINV
        if abs(qk) < BIGINV or abs(pk) < BIGINV:
            pkm2 *= BIG
            pkm1 *= BIG
            qkm2 *= BIG
            qkm1 *= BIG
    return ans


def _pseries(a, b, x):
    # power series, for b * x small and x not close to 1
    ai = 1 / a
    u = (1 - b) * x
    v = u / (a + 1)
    t1 = v
    t = u
    n = 2
    s = 0.0
    z = MACHEP * ai
    while abs(v) > z:
        u = (n - b) * x / n
        t *= u
        v = t / (a + n)
        s += v
        n += 1
    s += t1
    s += ai

    t = a * math.log(x) - ln_beta(a, b) + math.log(s)
    if t < MINLOG:
        return 0.0
    return math.exp(t)


def reg_inc_beta_result(a: float, b: float, x: float) -> SpecFunResult:
    '''return I_x(a, b) with an error estimate.'''
    a, b, x = float(a), float(b), float(x)
    if not (a > 0 and b > 0):
        raise DomainError("reg_inc_beta: a and b must both be > 0, got %r, %r" % (a, b))
    if not (0.0 <= x <= 1.0):
        raise DomainError("reg_inc_beta: x must lie in [0, 1], got %r" % x)
    err = 64 * MACHEP
    if x == 0.0:
        return SpecFunResult(0.0, 0.0)
    if x == 1.0:
        return SpecFunResult(1.0, 0.0)

    if b * x <= 1.0 and x <= 0.95:
        return SpecFunResult(min(1.0, _pseries(a, b, x)), err)

    # reverse a and b if x is greater than the mean
    w = 1.0 - x
    flipped = x > a / (a + b)
    if flipped:
        a, b = b, a
        xc, x = x, w
    else:
        xc = w

    if flipped and b * x <= 1.0 and x <= 0.95:
        t = _pseries(a, b, x)
    else:
        # choose expansion for better convergence
        y = x * (a + b - 2) - (a - 1)
        if y < 0:
            w = _incbcf(a, b, x)
        else:
            w = _incbd(a, b, x) / xc
        y = a * math.log(x) + b * math.log(xc) - ln_beta(a, b) + math.log(w / a)
        t = 0.0 if y < MINLOG else math.exp(y)

    if flipped:
        t = 1.0 - t
    return SpecFunResult(min(1.0, max(0.0, t)), err)


def reg_inc_beta(a: float, b: float, x: float) -> float:
    '''regularized incomplete beta function I_x(a, b).'''
    return reg_inc_beta_result(a, b, x).value


__all__ = [
    "SpecFunResult",
    "ln_gamma",
    "ln_gamma_result",
    "gamma_sign",
    "gamma",
    "ln_beta",
    "reg_inc_beta",
    "reg_inc_beta_result",
]
