"""Complete minimal surfaces of finite total curvature from algebraic
Weierstrass data on superelliptic curves."""

from .curve import SuperellipticCurve, make_curve
from .families import build_family
from .integrator import WeierstrassData, verify_periods

__all__ = ["SuperellipticCurve", "make_curve", "build_family", "WeierstrassData", "verify_periods"]
__version__ = "0.1.0"
