"""Build the optional compiled kernels; the package works without them."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension("foundry._kernels", ["src/foundry/_kernels.pyx"], optional=True)
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)

setup(ext_modules=ext_modules)
