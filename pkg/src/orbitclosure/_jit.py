"""
Numba switch. Set ORBITCLOSURE_DISABLE_JIT=1 to run every kernel through its
pure-numpy twin instead (useful for debugging and for the benchmark).
"""

import os

JIT_ENABLED = os.environ.get("ORBITCLOSURE_DISABLE_JIT", "0").lower() not in ("1", "true", "yes")

if JIT_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if not JIT_ENABLED:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
