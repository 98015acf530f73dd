"""Kernel selection: compiled extension if built, pure Python otherwise.

Set HOWEDUAL_FORCE_PURE=1 to skip the extension (used by the benchmark to
time both paths in one process via explicit module handles).
"""
import os

from . import _sparse_py

if os.environ.get("HOWEDUAL_FORCE_PURE"):
    kernel = _sparse_py
else:
    try:
        from . import _sparse_cy as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = _sparse_py

BACKEND = kernel.BACKEND

mat_mul_exact = kernel.mat_mul_exact
mat_add_exact = kernel.mat_add_exact
mat_scale_exact = kernel.mat_scale_exact
mat_mul_float = kernel.mat_mul_float
mat_add_float = kernel.mat_add_float
mat_scale_float = kernel.mat_scale_float
