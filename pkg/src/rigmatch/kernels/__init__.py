"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled Cython module is used when it was built; otherwise, or when the
environment variable ``RIGMATCH_PURE`` is set to a non-empty value other
than ``0``, the NumPy implementation takes over.  Both expose the same
functions, so callers always go through :data:`backend`::

    from rigmatch import kernels
    kernels.backend.intersect(a, b)

:func:`use_backend` switches implementations at runtime (benchmarks and the
test-suite use it to compare both).
"""
import logging
import os
from contextlib import contextmanager

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def _default():
    if os.environ.get("RIGMATCH_PURE", "") not in ("", "0"):
        return _pykernels
    if _ckernels is None:
        log.debug("compiled kernels unavailable, using the pure-Python fallback")
        return _pykernels
    return _ckernels


backend = _default()


def available():
    return sorted(BACKENDS)


def use_backend(name):
    """Select the active kernel module by name (``"cython"`` or ``"python"``)."""
    global backend
    try:
        backend = BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {available()}") from None
    return backend


@contextmanager
def using(name):
    previous = backend.NAME
    use_backend(name)
    try:
        yield backend
    finally:
        use_backend(previous)
