"""Build the optional compiled core.

The extension is optional: when Cython or a C compiler is unavailable the
package installs without it and ``sparsebounds._backend`` falls back to the
numpy implementation.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SPARSEBOUNDS_NO_EXT"):
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
                    "sparsebounds._core",
                    ["src/sparsebounds/_core.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math / -march=native: keeps IEEE ordering so both
                    # backends produce the same Gram entries
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
