"""Builds the optional min-plus extension; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("HOLOKAM_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("holokam.kam._minplus_ext", ["src/holokam/kam/_minplus_ext.pyx"],
                       include_dirs=[np.get_include()], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
