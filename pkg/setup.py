"""Build script for the compiled kernel extension.

The extension is optional at runtime: if the build is skipped or the import
fails, the package falls back to the pure-numpy kernels automatically.
"""

from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "bosonlat._kernels._core",
        sources=["src/bosonlat/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": 3},
    )
)
