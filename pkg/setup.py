import sys

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if sys.platform == "win32":
    compile_args = ["/O2", "/fp:strict"]
else:
    # -ffp-contract=off: no FMA contraction, so the compiled kernels stay
    # bit-identical with the pure-Python twins (test_backends relies on it).
    compile_args = ["-O2", "-ffp-contract=off"]

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "tracklike._ckernels",
                ["src/tracklike/_ckernels.pyx"],
                extra_compile_args=compile_args,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    # No Cython: install the pure-Python package only; the kernel dispatcher
    # falls back to tracklike._pykernels at import time.
    extensions = []

setup(ext_modules=extensions)
