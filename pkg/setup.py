import os

from setuptools import setup

ext_modules = []
if os.environ.get("LINQUAD_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("linquad._core._fast", ["src/linquad/_core/_fast.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except Exception:
        # The compiled core is optional; the pure backend is always available.
        ext_modules = []

setup(ext_modules=ext_modules)
