"""Kernel selection: compiled scan if available, pure Python otherwise.

Set OAK_PURE_PYTHON=1 to force the fallback (used by the kernel
benchmark and by tests that pin down bit-identity between backends).
"""

import os

if os.environ.get("OAK_PURE_PYTHON"):
    from ._scan_py import backend_name, dot_block
else:
    try:
        from ._scan import backend_name, dot_block  # type: ignore[attr-defined]
    except ImportError:
        from ._scan_py import backend_name, dot_block

BACKEND = backend_name()

__all__ = ["BACKEND", "dot_block", "backend_name"]
