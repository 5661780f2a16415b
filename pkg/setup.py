"""Build script for the compiled kernel extension.

The package works without the extension (a pure Python fallback is
selected at import time), so a failed compile is not fatal: run
`TRIQUAD_PURE_KERNELS=1` or simply install without a C compiler and
everything still works, just slower.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "triquad._kernels._native",
                ["src/triquad/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
