"""Build the optional compiled simplex kernel.

The package imports and runs without the extension; a failed build only
costs speed.
"""
import os

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
if not os.environ.get("INFOVALUE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "infovalue.lp._kernel",
                    ["src/infovalue/lp/_kernel.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math / -march=native: keep IEEE results identical
                    # to the numpy fallback
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing etc.
            print(f"warning: compiled kernel not built ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using pure-Python fallback")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
