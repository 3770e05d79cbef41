"""Build script: compiles the Cython kernel extension when Cython is available.

Set FEEMARKET_SKIP_EXT=1 to force a pure-Python install; the package then
falls back to the numpy kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FEEMARKET_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "feemarket._kernels",
                    ["src/feemarket/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
