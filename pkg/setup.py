"""Build script for the optional compiled ascent kernel.

The package works without the extension (a pure-numpy twin is selected at
import time); building it just makes the tau-optimizer roughly an order of
magnitude faster. Failures to compile are therefore non-fatal.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qdiv._fastascent",
                ["src/qdiv/_fastascent.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
