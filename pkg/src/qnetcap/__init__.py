"""Capacity and achievable-rate regions for classical-quantum network channels.

Subpackages are organized by layer:

* ``qstate``    dense density-matrix core (construction, composition, spectra)
* ``entropic``  entropy and information functionals over labeled cq states
* ``channels``  channel models, worked example channels, JSON loading
* ``regions``   half-space rate-region geometry and Fourier-Motzkin projection
* ``network``   finite-dimensional capacity/rate-region computations
* ``bosonic``   closed-form capacities for the free-space bosonic interference channel
* ``codesim``   exact small-blocklength decoder simulation (typical projectors, SRM)
* ``cli``       command-line surface

The top-level package stays import-light; submodules load on first access so
the command-line entry point can apply the QNETCAP_THREADS cap before any
numerical library is pulled in.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = (
    "qstate",
    "entropic",
    "channels",
    "regions",
    "network",
    "bosonic",
    "codesim",
    "cli",
)


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
