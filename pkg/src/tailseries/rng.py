"""Seeded, portable pseudo-random streams.

The generator is a counter-based SplitMix64 (Steele, Lea & Flood's 64-bit
xorshift-multiply mixer over a Weyl sequence), frozen bit-exactly:

    state_n  = (base + n * 0x9E3779B97F4A7C15) mod 2**64        (n = 1, 2, ...)
    output_n = mix64(state_n)

with the finalizer

    mix64(z): z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9  (mod 2**64)
              z ^= z >> 27;  z *= 0x94D049BB133111EB  (mod 2**64)
              z ^= z >> 31

Uniform doubles use the top 53 bits, centered so that 0 and 1 are never hit:

    u_n = ((output_n >> 11) + 0.5) * 2**-53      in (0, 1)

Substream derivation is a pure mixing function of the parent stream:

    root base            = mix64(master_seed)
    child i of base b    = mix64((b + (i + 1) * 0xD2B74407B1CE6E93) mod 2**64)

Because ``mix64`` is a bijection on 64-bit words, distinct child indices give
distinct bases. Counter windows of different streams sit at pseudo-random
offsets of the same 2**64-cycle; for any realistic total draw count
(< 2**40) the probability of two windows overlapping is below 2**-20, which
is the usual guarantee class for splittable generators. Changing any constant
above is a breaking change; test vectors are frozen in tests/test_rng.py.

Because the algorithm is counter-based, a block of n draws is generated by a
handful of vectorized 64-bit operations; identical seeds give bit-identical
streams on every platform.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_WEYL = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xD2B74407B1CE6E93

_U = np.uint64
_INV_2_53 = 2.0 ** -53

ALGORITHM = "splitmix64-counter"


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (exact 64-bit semantics)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _U(30)
    z *= _U(0xBF58476D1CE4E5B9)
    z ^= z >> _U(27)
    z *= _U(0x94D049BB133111EB)
    z ^= z >> _U(31)
    return z


class RngState:
    """One logical random stream plus its substream derivation.

    A stream is identified by its 64-bit ``base``; draws only advance the
    draw counter. ``substream(i)`` derives an independent child stream
    without touching this stream's counter, so replicate/path substreams can
    be handed out deterministically and used concurrently.
    """

    algorithm = ALGORITHM

    def __init__(self, master_seed: int, _base: int | None = None):
        self.master_seed = int(master_seed) & _MASK64
        self._base = mix64(self.master_seed) if _base is None else (_base & _MASK64)
        self._count = 0

    @property
    def state(self) -> tuple[int, int]:
        """(base, draws consumed so far)."""
        return (self._base, self._count)

    def substream(self, i: int) -> "RngState":
        """Child stream ``i`` (i >= 0), derived purely from this stream's base."""
        if i < 0:
            raise ValueError("substream index must be >= 0")
        base = mix64((self._base + (i + 1) * _STREAM_SALT) & _MASK64)
        child = RngState(self.master_seed, _base=base)
        return child

    def child_bases(self, n: int, start: int = 0) -> np.ndarray:
        """Bases of children ``start .. start+n-1`` as a uint64 array.

        Equals ``[self.substream(start + i).state[0] for i in range(n)]``.
        """
        idx = np.arange(start + 1, start + n + 1, dtype=np.uint64)
        states = _U(self._base) + idx * _U(_STREAM_SALT)
        return _mix64_array(states)

    def raw_u64(self, n: int) -> np.ndarray:
        """Next ``n`` raw 64-bit outputs; advances the stream."""
        counters = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        states = _U(self._base) + counters * _U(_WEYL)
        return _mix64_array(states)

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` uniforms in the open interval (0, 1); advances the stream."""
        bits = self.raw_u64(n)
        return ((bits >> _U(11)).astype(np.float64) + 0.5) * _INV_2_53

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def derive_seed(self, i: int) -> int:
        """A 64-bit master seed for an independent component, mixed from child ``i``."""
        return self.substream(i).state[0]


def uniforms_for_bases(bases: np.ndarray, n_draws: int) -> np.ndarray:
    """Uniform block, row ``p`` holding draws 1..n_draws of the stream ``bases[p]``.

    Bitwise identical to calling ``uniforms(n_draws)`` on each stream; used to
    vectorize generation across many substreams (e.g. random-walk paths).
    """
    counters = np.arange(1, n_draws + 1, dtype=np.uint64)
    states = bases[:, None].astype(np.uint64) + counters[None, :] * _U(_WEYL)
    bits = _mix64_array(states)
    return ((bits >> _U(11)).astype(np.float64) + 0.5) * _INV_2_53
