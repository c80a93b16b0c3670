"""Build hook for the optional compiled search kernel.

If Cython or a C compiler is missing, the package still installs and the
pure-Python kernel is used instead.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("orientham._ckernel", ["src/orientham/_ckernel.pyx"], optional=True)],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )

setup(ext_modules=ext_modules)
