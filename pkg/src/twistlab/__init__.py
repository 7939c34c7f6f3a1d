"""twistlab: 2-Selmer ranks of quadratic twists of elliptic curves over Q."""

from .config import ENGINE_VERSION as __version__
from .curve import Curve, make_curve, minimal_model, twist
from .descent import FullTorsionCurve, sel2
from .parity import kramer_parity, root_number

__all__ = [
    "__version__",
    "Curve",
    "FullTorsionCurve",
    "kramer_parity",
    "make_curve",
    "minimal_model",
    "root_number",
    "sel2",
    "twist",
]
