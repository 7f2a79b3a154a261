import sys

from setuptools import Extension, setup

# The compiled kernel is optional: shotgraph.kernels falls back to the pure
# Python implementation when the extension is absent (see src/shotgraph/kernels.py).
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("shotgraph._kernels", ["src/shotgraph/_kernels.pyx"])],
        language_level="3",
    )
except ImportError:
    print("Cython not available; building without the compiled kernel", file=sys.stderr)

setup(ext_modules=ext_modules)
