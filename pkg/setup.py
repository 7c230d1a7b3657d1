"""Optional compiled kernels.

The package works without compilation (a numpy fallback is selected at
import time); building the Cython extension just makes the inner loops
of the period and Bergman quadratures faster.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        ["src/qdtau/_kernels.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
    include_dirs = [numpy.get_include()]
except Exception:
    include_dirs = []

setup(
    ext_modules=ext_modules,
    include_dirs=include_dirs,
)
