"""Build the optional compiled kernels.

Project metadata lives in pyproject.toml. If Cython or a C compiler is not
available the package installs without the extension and falls back to the
pure-Python kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CONGESTION1D_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "congestion1d._kernels",
                    ["src/congestion1d/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
