"""Build script: compiles the optional Cython sampler kernel.

The package is fully functional without the extension (a pure-Python
kernel with the identical RNG stream is selected at import time); the
extension only accelerates the Monte Carlo hot loop.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "fracdecomp._sampler",
                ["src/fracdecomp/_sampler.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython: install pure-Python only.
    pass

setup(ext_modules=ext_modules)
