"""Firm competition under probabilistic consumer choice."""

from ._firmcomp import *  # noqa: F401,F403
from ._firmcomp import __version__  # noqa: F401
