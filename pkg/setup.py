"""Build the optional compiled rank kernel.

The package works without it: ``hocolim.kernels`` falls back to the
pure-Python implementation when the extension cannot be imported.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("HOCOLIM_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hocolim._modrank",
                    ["src/hocolim/_modrank.pyx"],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
