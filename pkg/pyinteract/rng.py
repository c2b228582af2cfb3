'''A small, fully specified pseudo random number generator.

``XorShift64Star`` is the xorshift64* generator: the state is updated
with ``x ^= x >> 12; x ^= x << 25; x ^= x >> 27`` and the output is
``x * 0x2545F4914F6CDD1D`` modulo 2**64. Seed 0 would fix the state at
zero and is replaced by ``0x9E3779B97F4A7C15``. The constants are part
of the output contract: the same seed produces the same stream in any
implementation.
'''
import math

import numpy

MASK64 = 0xFFFFFFFFFFFFFFFF
MULTIPLIER = 0x2545F4914F6CDD1D
ZERO_SEED = 0x9E3779B97F4A7C15


class XorShift64Star(object):

    def __init__(self, seed: int = 0):
        seed = int(seed) & MASK64
        self.state = seed if seed else ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def uniform(self) -> float:
        '''a double in [0, 1) built from the top 53 bits.'''
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def uniform_array(self, n: int, lo: float = 0.0, hi: float = 1.0):
        return numpy.array([lo + (hi - lo) * self.uniform() for _ in range(int(n))])

    def normal(self) -> float:
        '''a standard normal deviate by the Box-Muller transform.'''
        u1 = self.uniform()
        u2 = self.uniform()
        # 1 - u1 lies in (0, 1]
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)

    def normal_array(self, n: int):
        return numpy.array([self.normal() for _ in range(int(n))])


__all__ = ["XorShift64Star"]
