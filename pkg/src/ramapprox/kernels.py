"""Select the compiled F_p polynomial kernels when available.

Set ``RAMAPPROX_PURE=1`` to force the pure-Python implementation.
"""

import os

_impl = None
if os.environ.get("RAMAPPROX_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
    except ImportError:  # pragma: no cover - depends on the build
        _impl = None
if _impl is None:
    from . import _kernels_py as _impl

BACKEND = "python" if _impl.__name__.endswith("_kernels_py") else "cython"

gf_add = _impl.gf_add
gf_sub = _impl.gf_sub
gf_mul = _impl.gf_mul
gf_divmod = _impl.gf_divmod
gf_gcd = _impl.gf_gcd
gf_monic = _impl.gf_monic
gf_mulmod = _impl.gf_mulmod
gf_trim = _impl.gf_trim

__all__ = ["BACKEND", "gf_add", "gf_divmod", "gf_gcd", "gf_monic", "gf_mul", "gf_mulmod", "gf_sub", "gf_trim"]
