"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here is non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "reebsys.kernels._cext",
                ["src/reebsys/kernels/_cext.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - env without cython
    print(f"reebsys: skipping compiled kernels ({exc!r})")

setup(ext_modules=ext_modules)
