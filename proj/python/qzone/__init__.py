"""Balanced zone bipartitioning via impact-guided QUBO decomposition."""

from ._qzone import *  # noqa: F401,F403
from ._qzone import __version__  # noqa: F401
