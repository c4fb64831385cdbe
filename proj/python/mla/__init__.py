"""Mittag-Leffler analysis: special functions, fractional calculus, grey Brownian motion and heat kernels."""

from ._core import *  # noqa: F401,F403
from ._core import InvalidArgument, NumericError, SampledFunction

import numpy as _np


def sample(f, start, step, n):
    """SampledFunction of f on start + step * arange(n)."""
    x = start + step * _np.arange(n)
    return SampledFunction(start, step, _np.asarray(f(x), dtype=float))
