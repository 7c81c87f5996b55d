"""Geometric quantum mechanics toolkit.

Kahler tensors on finite-dimensional state space, Lie-algebra duals and
momentum maps, a two-qubit operator chart with entanglement witnesses, and
discrete/continuum phase-space calculus, with a batch CLI on top.
"""

import importlib

from geoqm.config import apply_thread_cap

__version__ = "0.1.0"

apply_thread_cap()

_SUBMODULES = ("config", "linops", "kahler", "liedual", "u4chart",
               "witness", "phasespace", "checks", "cli")

__all__ = [*_SUBMODULES, "__version__"]


# Submodules pull in numpy and scipy; importing them on first attribute
# access keeps `import geoqm` cheap and lets the thread cap above land
# before any worker pool starts.
def __getattr__(name):
    if name in _SUBMODULES:
        module = importlib.import_module(f"geoqm.{name}")
        globals()[name] = module
        return module
    raise AttributeError(f"module 'geoqm' has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
