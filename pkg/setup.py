"""Build hook for the optional compiled point-counting kernel.

The package is fully functional without the extension (a pure-Python twin
of the kernel is selected at import time), so a missing compiler or Cython
must not break installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hasseweil._kernels",
                ["src/hasseweil/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
