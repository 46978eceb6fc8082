"""Build script for the optional compiled enumeration kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed Cython build is not fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "cutfair.oracle._scan",
                ["src/cutfair/oracle/_scan.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
