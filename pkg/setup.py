import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BRANCHMAP_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("branchmap._fastkernel", ["src/branchmap/_fastkernel.pyx"])],
            language_level=3,
        )
    except ImportError:
        # Pure-Python fallback kernel is selected at import time when the
        # compiled extension is absent.
        ext_modules = []

setup(ext_modules=ext_modules)
