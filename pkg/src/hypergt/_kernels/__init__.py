"""Hot loops of the package, with a compiled backend when available.

The Cython extension ``_ckernels`` is imported if it was built; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``HYPERGT_PURE_PYTHON=1``
forces the fallback.  Both backends are importable directly for comparison.
"""

import os

from . import _pykernels

_NAMES = (
    "clean_masks",
    "first_discard_violation",
    "response_masks",
    "prune_keep",
    "pair_stats",
    "separable_search",
)


def _load_compiled():
    if os.environ.get("HYPERGT_PURE_PYTHON", "0") not in ("", "0"):
        return None
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()
BACKEND = "cython" if _compiled is not None else "python"
_active = _compiled if _compiled is not None else _pykernels

clean_masks = _active.clean_masks
first_discard_violation = _active.first_discard_violation
response_masks = _active.response_masks
prune_keep = _active.prune_keep
pair_stats = _active.pair_stats
separable_search = _active.separable_search


def available_backends():
    """Mapping of backend name to module, compiled first when present."""
    out = {}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    out["python"] = _pykernels
    return out
