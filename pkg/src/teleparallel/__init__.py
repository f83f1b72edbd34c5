"""Teleparallel connections, their metric duals, and two worked manifolds:
the probability simplex and the faithful quantum states."""
from .core import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .monotone import *  # noqa: F401,F403
from .quantum import *  # noqa: F401,F403
from .simplex import *  # noqa: F401,F403
from . import core, errors, monotone, quantum, simplex

__version__ = "0.1.0"
