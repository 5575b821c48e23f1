"""Build hook for the optional compiled kernel; metadata lives in pyproject.toml."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QFLOCAL_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("qflocal._ckernels", ["src/qflocal/_ckernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
