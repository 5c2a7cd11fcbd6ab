from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # No Cython: the package falls back to the pure-Python kernels.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("bfree._kernels", ["src/bfree/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
