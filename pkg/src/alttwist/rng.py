"""Deterministic sampler for randomized checks.

Reports must be byte-reproducible across Python versions, so sampling does
not go through :mod:`random`.  The generator is the 64-bit linear
congruential generator

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

(Knuth's MMIX constants).  Each draw takes the high 32 bits of the new state.
A coordinate is ``draw % 7 - 3``, i.e. an integer in -3..3.  The initial
state is the seed itself.
"""

from __future__ import annotations

DEFAULT_SEED = 0xA17E

_MUL = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class LCG:
    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = seed & _MASK

    def next_u32(self) -> int:
        self.state = (_MUL * self.state + _INC) & _MASK
        return self.state >> 32

    def small_int(self, lo: int = -3, hi: int = 3) -> int:
        return lo + self.next_u32() % (hi - lo + 1)

    def coords(self, n: int, field=None, lo: int = -3, hi: int = 3) -> tuple:
        vals = [self.small_int(lo, hi) for _ in range(n)]
        if field is not None:
            return tuple(field(v) for v in vals)
        return tuple(vals)

    def nonzero_coords(self, n: int, field=None) -> tuple:
        while True:
            c = self.coords(n, field)
            if any(c):
                return c
