"""Build script for the compiled scan kernel.

The extension is optional: if it fails to build or import, the package
falls back to the pure-Python kernel in oak._kernels._scan_py.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension(
        "oak._kernels._scan",
        ["src/oak/_kernels/_scan.pyx"],
        # -ffp-contract=off keeps one rounding per multiply/add so the C
        # loop is bit-identical to the pure-Python fallback.
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
