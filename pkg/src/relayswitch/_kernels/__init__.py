"""Hot inner loops, compiled with numba unless disabled.

Set ``RELAYSWITCH_DISABLE_NUMBA=1`` before import to run the pure-numpy
implementations instead. Both backends are always importable as
``numpy_impl`` and ``numba_impl`` (the latter is ``None`` without numba) so
they can be compared side by side.
"""

import os

from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # pragma: no cover - numba is a hard dependency
    numba_impl = None

_disabled = os.environ.get("RELAYSWITCH_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

if numba_impl is None or _disabled:
    BACKEND = "numpy"
    active = numpy_impl
else:
    BACKEND = "numba"
    active = numba_impl

sos_envelope = active.sos_envelope
argmax_rows = active.argmax_rows
change_points = active.change_points
crossings = active.crossings
dssc_walk = active.dssc_walk

__all__ = [
    "BACKEND",
    "numpy_impl",
    "numba_impl",
    "sos_envelope",
    "argmax_rows",
    "change_points",
    "crossings",
    "dssc_walk",
]
