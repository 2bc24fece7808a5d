"""Backend selection for the elimination kernel.

The Cython extension is used when it has been built; setting
``GALCOH_PURE_PYTHON=1`` forces the pure-Python implementation.
"""

import os
from types import ModuleType


def _load() -> tuple[str, ModuleType]:
    if not os.environ.get("GALCOH_PURE_PYTHON"):
        try:
            from . import _smith_ext  # type: ignore[attr-defined]

            return "cython", _smith_ext
        except ImportError:
            pass
    from . import _smith_py

    return "python", _smith_py


BACKEND, _impl = _load()
smith_sparse = _impl.smith_sparse
replay_rows = _impl.replay_rows
replay_rows_inverse = _impl.replay_rows_inverse
replay_cols = _impl.replay_cols
replay_cols_inverse = _impl.replay_cols_inverse
