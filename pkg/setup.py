"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-NumPy
fallback is selected at import time), so a failed compile only costs
speed.  Build in place with::

    pip install -e . --no-build-isolation
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "sgnsep._kernels",
                sources=["src/sgnsep/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
