"""Optional compiled search kernel; the package works without it."""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "taut._core",
                ["src/taut/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
