"""Backend selection for the bitset kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise, or
when ``PTRESOLVE_PURE=1`` is set in the environment, the numpy implementation
in ``_pykernels`` is used.  ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

from ._pykernels import ANGEL, DEMON, ORTHO

if os.environ.get("PTRESOLVE_PURE", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND = "cython" if _impl.__name__.endswith("_ckernels") else "python"

angel_table = _impl.angel_table
demon_table = _impl.demon_table
ortho_table = _impl.ortho_table
fused_composite = _impl.fused_composite
monotone_violation = _impl.monotone_violation
strict_joins = _impl.strict_joins
strict_meets = _impl.strict_meets

KIND_CODES = {"angel": ANGEL, "demon": DEMON, "ortho": ORTHO}

__all__ = [
    "ANGEL", "DEMON", "ORTHO", "BACKEND", "KIND_CODES",
    "angel_table", "demon_table", "ortho_table", "fused_composite",
    "monotone_violation", "strict_joins", "strict_meets",
]
