"""Build script: compiles the Cython rank kernel when Cython is available.

The package works without the extension (the numpy fallback in
``rankmetric.kernels`` is selected at import time), so a failed or
skipped compilation is not fatal.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/rankmetric/kernels/_fastrank.pyx"],
        compiler_directives={"language_level": 3},
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
        ext.define_macros.append(
            ("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
except ImportError:
    pass

setup(ext_modules=ext_modules)
