"""p-adic Berkovich-Coleman and abelian integrals on hyperelliptic curves
with bad reduction."""

__version__ = "0.1.0"

from .padic import FieldDescriptor, PadicElement, lift  # noqa: E402
from .coleman import CurvePoint  # noqa: E402
from .bc_abelian import (  # noqa: E402
    abelian_integral,
    bc_integral,
    chabauty_annihilator,
    lift_point,
    periods,
    set_reference_points,
    setup_curve,
)

__all__ = [
    "CurvePoint",
    "FieldDescriptor",
    "PadicElement",
    "abelian_integral",
    "bc_integral",
    "chabauty_annihilator",
    "lift",
    "lift_point",
    "periods",
    "set_reference_points",
    "setup_curve",
]
