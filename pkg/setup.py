"""Build script.  The compiled search kernels are optional: if Cython or a C
compiler is missing the package installs anyway and falls back to the pure
Python kernels at import time."""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "sperner.search._kernels",
                ["src/sperner/search/_kernels.pyx"],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": 3,
            "embedsignature": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=extensions)
