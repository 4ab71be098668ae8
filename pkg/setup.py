import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("EMPIRICA_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "empirica._ckernels",
                    ["src/empirica/_ckernels.pyx"],
                    # -ffp-contract=off keeps the C kernels bit-identical to
                    # the pure-python fallback (no FMA re-association).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
