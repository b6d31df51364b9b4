import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; rlam falls back to _pykernels
    cythonize = None

# reassociation lets the compiler vectorize the Jacobi dot-product reductions
CFLAGS = ["-O3", "-fno-math-errno", "-fno-trapping-math", "-fno-signed-zeros", "-fassociative-math"]
if not os.environ.get("RLAM_PORTABLE"):
    CFLAGS.append("-march=native")

ext_modules = []
if cythonize is not None and not os.environ.get("RLAM_NO_EXTENSION"):
    ext_modules = cythonize(
        [
            Extension(
                "rlam._kernels",
                ["src/rlam/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=CFLAGS,
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
