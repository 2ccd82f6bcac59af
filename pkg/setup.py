import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("WSTAR_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("wstar._evalcore", ["src/wstar/_evalcore.pyx"])],
            language_level=3,
        )
    except ImportError:
        # no Cython available: install with the pure-Python evaluation backend
        ext_modules = []

setup(ext_modules=ext_modules)
