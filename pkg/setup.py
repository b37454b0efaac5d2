"""Build the optional Cython kernels.

When Cython or a C++ compiler is unavailable the package still installs and
falls back to the pure-Python kernels at import time.
"""
import numpy
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "riparian_accounts._ckernels",
                ["src/riparian_accounts/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                language="c++",
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
