"""Kernel selection.

Imports the compiled arithmetic kernel when available, otherwise the pure
Python twin.  ``VERTEXLINK_KERNEL=py`` forces the fallback and
``VERTEXLINK_KERNEL=cy`` insists on the compiled one (raising if it is not
built), which the benchmark and the parity tests use.
"""

import os

_choice = os.environ.get("VERTEXLINK_KERNEL", "").strip().lower()

if _choice == "py":
    from . import _poly_py as impl
elif _choice == "cy":
    from . import _poly_cy as impl  # type: ignore[no-redef]
else:
    try:
        from . import _poly_cy as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _poly_py as impl  # type: ignore[no-redef]

PZERO = impl.PZERO
PONE = impl.PONE
RHO = impl.RHO
RZERO = impl.RZERO
RONE = impl.RONE
padd = impl.padd
pneg = impl.pneg
psub = impl.psub
pmul = impl.pmul
radd = impl.radd
rmul = impl.rmul
spgemm = impl.spgemm


def kernel_name() -> str:
    return "cy" if impl.__name__.endswith("_poly_cy") else "py"
