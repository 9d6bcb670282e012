"""Build script for the optional Cython kernel core.

The package works without the extension; ``freqloss._backend`` falls back to
the numpy implementation when ``freqloss._kernels`` cannot be imported.
Set ``FREQLOSS_NO_EXT=1`` to skip compiling it.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("FREQLOSS_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "freqloss._kernels",
                    ["src/freqloss/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
