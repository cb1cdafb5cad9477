"""Deterministic seed derivation for replicated experiments.

Replicate ``i`` of a run with base seed ``b`` always uses
``derive_seed(b, i)``, independent of execution order, so results are
reproducible and replicates can run concurrently.
"""

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One SplitMix64 scrambling round (Steele et al.)."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return (x ^ (x >> 31)) & MASK64


def derive_seed(base: int, index: int) -> int:
    """Seed for sub-stream ``index`` of the stream rooted at ``base``.

    Mixes the 64-bit base with the index through SplitMix64 so that
    nearby indices produce uncorrelated generator states.
    """
    if index < 0:
        raise ValueError(f"index must be nonnegative, got {index}")
    return splitmix64((base & MASK64) ^ splitmix64(index + 1))
