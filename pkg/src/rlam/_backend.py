"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``RLAM_PURE_PYTHON`` is set to a non-empty value, the
numpy implementations in ``_pykernels`` are used.  Callers look kernels up
through :func:`kernels` on every call so that :func:`use_backend` takes
effect immediately.
"""

import os
from contextlib import contextmanager

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

if _compiled is not None and not os.environ.get("RLAM_PURE_PYTHON"):
    _active = "compiled"
else:
    _active = "python"


def available():
    return sorted(_BACKENDS)


def active():
    return _active


def kernels():
    return _BACKENDS[_active]


def set_backend(name):
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; choose from {available()}")
    _active = name


@contextmanager
def use_backend(name):
    """Temporarily switch the kernel backend (not thread-safe)."""
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)
