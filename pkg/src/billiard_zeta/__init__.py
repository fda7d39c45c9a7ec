"""Classical side of obstacle scattering for disk configurations.

Periodic rays and their weights, the dynamical zeta function and its
zeros, topological pressure and the abscissa ``s0``, and the WKB
reflection series compared against transfer-operator iterates.
"""
__version__ = "0.1.0"

from .geometry import Disk, GeometryError, Scene, three_disks, two_disks  # noqa: E402
from .kernels import backend  # noqa: E402

__all__ = ["Disk", "Scene", "GeometryError", "two_disks", "three_disks", "backend",
           "__version__"]
