"""Build the optional compiled kernel; the package works without it."""
import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-python install
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("LIFSHITZ_CP_NO_EXT"):
    openmp = [] if os.environ.get("LIFSHITZ_CP_NO_OPENMP") else ["-fopenmp"]
    ext = Extension(
        "lifshitz_cp._kernels",
        ["src/lifshitz_cp/_kernels.pyx"],
        extra_compile_args=["-O3"] + openmp,
        extra_link_args=openmp,
        optional=True,
    )
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
