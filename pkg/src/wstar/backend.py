"""Selection of the tape evaluation kernel.

The compiled extension (``wstar._evalcore``, built from Cython) is preferred;
a pure-numpy kernel with identical semantics is the fallback.  Override with
the ``WSTAR_BACKEND`` environment variable: ``auto`` (default), ``compiled``,
or ``python``.
"""

from __future__ import annotations

import os


def _load():
    choice = os.environ.get("WSTAR_BACKEND", "auto")
    if choice not in ("auto", "compiled", "python"):
        raise RuntimeError(
            f"WSTAR_BACKEND={choice!r}: expected 'auto', 'compiled' or 'python'"
        )
    if choice in ("auto", "compiled"):
        try:
            from . import _evalcore

            return _evalcore.run_tape, "compiled"
        except ImportError:
            if choice == "compiled":
                raise RuntimeError(
                    "WSTAR_BACKEND=compiled but the extension is not built; "
                    "reinstall without WSTAR_NO_EXT"
                ) from None
    from . import _evalcore_py

    return _evalcore_py.run_tape, "python"


run_tape, BACKEND = _load()
