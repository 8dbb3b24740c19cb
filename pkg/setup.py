"""Build script: compiles the optional transfer-matrix kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile degrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "dislospec._kern._propagate_c",
                ["src/dislospec/_kern/_propagate_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(
        "warning: building without the compiled transfer-matrix kernel (%s)\n" % exc
    )

setup(ext_modules=ext_modules)
