"""Shared test utilities: scripted RNG and brute-force oracles."""

import random


class ScriptRng:
    """random.Random stand-in replaying scripted draws, asserting each range.

    Optionally falls back to a seeded Random once the script runs out, for
    tests that only pin the first few draws.
    """

    def __init__(self, values, fallback_seed=None):
        self._values = list(values)
        self._fallback = (
            random.Random(fallback_seed) if fallback_seed is not None else None
        )

    def randrange(self, start, stop=None):
        lo, hi = (0, start) if stop is None else (start, stop)
        if self._values:
            v = self._values.pop(0)
            assert lo <= v < hi, f"scripted value {v} outside [{lo}, {hi})"
            return v
        if self._fallback is not None:
            return self._fallback.randrange(lo, hi)
        raise AssertionError("rng script exhausted")

    def getrandbits(self, k):
        if self._fallback is not None:
            return self._fallback.getrandbits(k)
        raise AssertionError("rng script exhausted")

    @property
    def exhausted(self):
        return not self._values


class BrokenRng:
    """Random source that always fails."""

    def randrange(self, *args):
        raise OSError("entropy source unavailable")

    def getrandbits(self, k):
        raise OSError("entropy source unavailable")


def naive_modexp(base, exp, p):
    """Repeated-multiplication oracle, no squaring tricks."""
    result = 1
    base %= p
    for _ in range(exp):
        result = result * base % p
    return result


def egcd_inverse(a, q):
    """Extended-Euclid oracle for modular inverses."""
    t, new_t = 0, 1
    r, new_r = q, a % q
    while new_r != 0:
        quot = r // new_r
        t, new_t = new_t, t - quot * new_t
        r, new_r = new_r, r - quot * new_r
    if r != 1:
        raise ValueError(f"{a} is not invertible mod {q}")
    return t % q


def flip_bit(data: bytes, bit_index: int) -> bytes:
    out = bytearray(data)
    out[bit_index // 8] ^= 1 << (bit_index % 8)
    return bytes(out)
