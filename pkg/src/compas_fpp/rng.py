"""Seed derivation for reproducible, replica-parallel random streams.

Replica ``r`` of a run with master seed ``s`` always draws from
``make_rng(s, r)``. The replica seed is a SplitMix64 mix of the master seed
and the replica index, using the constants

* increment ``0x9E3779B97F4A7C15``
* multipliers ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``
* shifts 30, 27 and 31.

The derived 64-bit seed initialises a :class:`numpy.random.PCG64` bit generator.
"""

import numpy

from compas_fpp.exceptions import ParameterError

MASK64 = 0xFFFF_FFFF_FFFF_FFFF

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """One output of the SplitMix64 generator whose state is ``x``.

    Examples
    --------
    >>> splitmix64(0)
    16294208416658607535

    """
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def replica_seed(seed: int, index: int) -> int:
    """Derive the 64-bit seed of replica ``index`` from the master ``seed``."""
    if seed < 0 or seed > MASK64:
        raise ParameterError("The seed must be a 64-bit unsigned integer: {}".format(seed))
    if index < 0:
        raise ParameterError("The replica index must be non-negative: {}".format(index))
    return splitmix64((seed ^ splitmix64(index)) & MASK64)


def make_rng(seed: int, index: int = 0) -> numpy.random.Generator:
    """Random stream of replica ``index`` for the master ``seed``."""
    return numpy.random.Generator(numpy.random.PCG64(replica_seed(seed, index)))
