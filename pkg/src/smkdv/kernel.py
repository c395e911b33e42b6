"""Kernel backend selection: compiled extension if available, else pure Python.

Set ``SMKDV_PURE=1`` in the environment to force the pure-Python kernel.
``BACKEND`` names the active implementation ("cython" or "pure").
"""

import os

if os.environ.get("SMKDV_PURE"):
    from smkdv import _kernel as _impl

    BACKEND = "pure"
else:
    try:
        from smkdv import _kernel_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from smkdv import _kernel as _impl

        BACKEND = "pure"

S_ZERO = _impl.S_ZERO
S_ONE = _impl.S_ONE
s_make = _impl.s_make
s_add = _impl.s_add
s_neg = _impl.s_neg
s_sub = _impl.s_sub
s_mul = _impl.s_mul
s_is_zero = _impl.s_is_zero
odd_merge = _impl.odd_merge
assoc_merge_add = _impl.assoc_merge_add
mono_mul = _impl.mono_mul
expr_iadd = _impl.expr_iadd
expr_mul = _impl.expr_mul
expr_mul_key = _impl.expr_mul_key
