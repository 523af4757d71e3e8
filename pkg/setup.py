"""Build script for the optional compiled kernel.

The package is fully functional without the extension: a pure NumPy
backend is selected at import time whenever the compiled module is
missing, so a failed compile only costs speed.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; warn and continue if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            _warn_skipped(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            _warn_skipped(exc)


def _warn_skipped(exc):
    warnings.warn(
        f"building the compiled kernel failed ({exc!r}); "
        "the pure NumPy backend will be used instead"
    )


def extensions():
    if os.environ.get("ATCHAIN_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "atchain._kernels._ckern",
        ["src/atchain/_kernels/_ckern.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
