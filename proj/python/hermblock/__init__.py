"""Isometry decompositions and partial-trace certificates for positive
matrices with Hermitian blocks."""

from ._hermblock import *  # noqa: F401,F403
from ._hermblock import __version__  # noqa: F401
