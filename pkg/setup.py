"""Build hook: compile the exact sparse kernel if Cython is available.

The package is fully functional without the extension; howedual._backend
falls back to the pure-Python kernel at import time.  To force a pure
install set HOWEDUAL_PURE=1.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HOWEDUAL_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/howedual/_sparse_cy.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
