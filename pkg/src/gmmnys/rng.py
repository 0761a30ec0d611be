"""Counter-based random variates keyed by ``(seed, j, i, stream)``.

Every variate is a pure function of its key, so the same draw can be
regenerated for any data vector without storing a table. The mixer is the
SplitMix64 finalizer applied in a chain over the key components.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_KJ = np.uint64(0xD1B54A32D192ED03)
_KI = np.uint64(0xABC98388FB8FAC03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53

# Stream ids. Each consumer of variates owns distinct streams so that, e.g.,
# the GCWS r_i and the RFF projection for the same (seed, j, i) are unrelated.
GAMMA_R = (0, 1)
GAMMA_C = (2, 3)
BETA = 4
NORMAL = (5, 6)
PHASE = 7


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_u64(x):
    if isinstance(x, (int, np.integer)):
        return np.uint64(int(x) & _MASK64)
    return np.asarray(x, dtype=np.int64).astype(np.uint64)


def hash64(seed, j, i, stream):
    """64-bit hash of the key; broadcasts over array-valued ``j`` and ``i``."""
    with np.errstate(over="ignore"):
        h = _mix(_as_u64(seed) + _GOLDEN)
        h = _mix(h ^ (_as_u64(j) * _KJ))
        h = _mix(h ^ (_as_u64(i) * _KI))
        h = _mix(h + np.uint64(stream) * _GOLDEN)
    return h


def uniform(seed, j, i, stream):
    """Uniform variate on [0, 1) with 53 bits of resolution."""
    return (hash64(seed, j, i, stream) >> np.uint64(11)).astype(np.float64) * _TWO_M53


def uniform_open0(seed, j, i, stream):
    """Uniform variate on (0, 1], safe to pass to ``log``."""
    h = hash64(seed, j, i, stream) >> np.uint64(11)
    return (h.astype(np.float64) + 1.0) * _TWO_M53


def gamma2(seed, j, i, streams):
    """Gamma(2, 1) variate as the sum of two independent Exp(1) variates."""
    s0, s1 = streams
    return -np.log(uniform_open0(seed, j, i, s0)) - np.log(uniform_open0(seed, j, i, s1))


def standard_normal(seed, j, i, streams=NORMAL):
    """Standard normal variate by the Box-Muller transform (cosine branch)."""
    s0, s1 = streams
    u1 = uniform_open0(seed, j, i, s0)
    u2 = uniform(seed, j, i, s1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
