"""Kernel selection: compiled extension when present, pure Python otherwise."""

from . import _scan_py

try:
    from . import _scan as _impl

    KERNEL_NAME = "compiled"
except ImportError:  # extension not built
    _impl = _scan_py
    KERNEL_NAME = "python"

scan = _impl.scan
scan_python = _scan_py.scan

NONEMPTY = _scan_py.NONEMPTY
EF = _scan_py.EF
EF1 = _scan_py.EF1
ALPHA_EF1 = _scan_py.ALPHA_EF1
TS = _scan_py.TS
WTS = _scan_py.WTS
