"""d-dimensional permutations and permutons.

Pattern statistics, the Schnyder-wood string/walk/coalescent pipeline, and
d-separable permutations with conditioned Galton-Watson and Brownian-pattern
samplers. Permutations are lists of 1-based columns, e.g. the 3-dimensional
permutation ((1,5,2,3,4), (3,2,5,1,4)) is [[1,5,2,3,4],[3,2,5,1,4]].
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
