"""Build hook for the optional compiled kernel.

The extension is marked optional: if Cython or a C compiler is missing the
package still installs and falls back to the numpy kernel.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [Extension("dmforms._ckernels", ["src/dmforms/_ckernels.pyx"],
                   include_dirs=[numpy.get_include()], optional=True,
                   extra_compile_args=["-O3"],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
