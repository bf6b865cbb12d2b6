from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "ea_bounds._kernels._core",
        ["src/ea_bounds/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
