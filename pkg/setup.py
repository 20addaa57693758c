import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CSDICT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("csdict._ckernels", ["src/csdict/_ckernels.pyx"], extra_compile_args=["-O3"])],
            language_level="3",
        )

setup(ext_modules=ext_modules)
