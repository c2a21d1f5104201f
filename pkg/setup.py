"""Builds the optional Cython kernel. The package works without it via the
numpy fallback in flow2img._kernels_py."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("flow2img._kernels", ["src/flow2img/_kernels.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
