"""Build script for the optional compiled quadrature core.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pointreg._core",
                ["src/pointreg/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"pointreg: skipping compiled core ({exc}); pure-python backend will be used")

setup(ext_modules=ext_modules)
