"""Search-kernel backends: compiled extension with pure-Python fallback.

``_fast`` is a Cython extension built at install time; when it is
missing (no compiler, skipped build) everything still works through
``pure``.  The compiled backend stores vertex sets in single 64-bit
words, so it only serves hosts with n <= 64; larger hosts are routed to
the pure backend transparently.

Set ``LINQUAD_BACKEND=pure`` (or ``fast``) to force a backend, e.g. for
the benchmark in ``benchmarks/bench_backends.py``.
"""

from __future__ import annotations

import os

from . import pure

try:
    from . import _fast
except ImportError:
    _fast = None

_env = os.environ.get("LINQUAD_BACKEND", "").strip().lower()
_forced = _env if _env in ("pure", "fast") else None
if _env and _forced is None:
    raise ValueError(f"LINQUAD_BACKEND must be 'pure' or 'fast', not {_env!r}")
if _forced == "fast" and _fast is None:
    raise ImportError("LINQUAD_BACKEND=fast but the compiled kernel is not built")


def backends():
    """Names of available backends ('pure' always, 'fast' when built)."""
    names = ["pure"]
    if _fast is not None:
        names.append("fast")
    return names


def get(name):
    if name == "pure":
        return pure
    if name == "fast":
        if _fast is None:
            raise ImportError("compiled kernel not built")
        return _fast
    raise ValueError(f"unknown backend {name!r}")


def active(n=None):
    """Backend module to use for a host on ``n`` vertices."""
    if _forced == "pure":
        return pure
    if _forced == "fast":
        if n is not None and _fast.MAX_N is not None and n > _fast.MAX_N:
            raise ValueError(f"compiled kernel caps n at {_fast.MAX_N}, got {n}")
        return _fast
    if _fast is not None and (n is None or _fast.MAX_N is None or n <= _fast.MAX_N):
        return _fast
    return pure
