"""Geodesics, spheres, conjugate and cut loci of 2-D almost-Riemannian
structures at a tangency point."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
