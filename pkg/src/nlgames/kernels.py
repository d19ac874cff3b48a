"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin.  Set ``NLGAMES_PURE_PYTHON=1`` to force the fallback.
"""
import os

from nlgames import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("NLGAMES_PURE_PYTHON") != "1":
    try:
        from nlgames import _kernels as _compiled
    except ImportError:
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "cython"
else:
    _compiled = None

UNIFORM, QUANTUM, FIXED = _kernels_py.UNIFORM, _kernels_py.QUANTUM, _kernels_py.FIXED

enumerate_wins = _impl.enumerate_wins
play_rounds = _impl.play_rounds
score_rounds = _impl.score_rounds


def compiled_module():
    """The compiled kernel module, or None when it is not built."""
    return _compiled
