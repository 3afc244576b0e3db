"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels take over.  Both produce identical arrays for identical inputs.
"""

import logging

from . import _pykernels

logger = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
    logger.debug("compiled kernels unavailable, using pure Python")

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

kernels = _compiled if _compiled is not None else _pykernels


def available():
    return sorted(BACKENDS)


def set_backend(name):
    """Switch the active kernels; returns the previous backend name."""
    global kernels
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available()}")
    prev = kernels.NAME
    kernels = BACKENDS[name]
    return prev


def current():
    return kernels.NAME
