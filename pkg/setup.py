"""Build script for the optional compiled kernels.

The Cython extension is best-effort: if Cython or a C compiler is missing,
the package installs without it and falls back to the numpy kernels.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("PLANARFIX_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "planarfix._ckernels",
                    ["src/planarfix/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
