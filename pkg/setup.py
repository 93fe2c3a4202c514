"""Builds the optional compiled kernel; installs without it if compilation fails."""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel not built ({exc}); using the numpy fallback")

    def build_extension(self, ext):
        # inline complex multiply/divide instead of the Annex G library calls;
        # retried without the flag for compilers that reject it
        for flags in (["-fcx-fortran-rules"], []):
            ext.extra_compile_args = flags
            try:
                super().build_extension(ext)
                return
            except Exception as exc:  # noqa: BLE001
                error = exc
        print(f"warning: building {ext.name} failed ({error}); using the numpy fallback")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension("molheat._core", ["src/molheat/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])
    return cythonize([ext], compiler_directives={"language_level": 3})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
