"""Build script.

The compiled kernel is optional: if Cython (or a C compiler) is missing the
package installs anyway and falls back to the pure-Python kernel at import
time.  Set VERTEXLINK_PURE=1 to skip the extension on purpose.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("VERTEXLINK_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/vertexlink/_poly_cy.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
