"""Universal-connection metrics on gauge-theory moduli spaces.

Thin Python layer over the C++ core: ADHM frames and the 't Hooft
connection, moduli-space metrics g^{0,alpha} / g^{1,beta}, the
Narasimhan-Ramanan frame diagnostics, and abelian grid reconstruction.
"""

import math

from ._umcore import (  # noqa: F401
    ConstraintError,
    DivergenceError,
    SpecError,
    adhm_frame,
    adhm_traces,
    g0_alpha,
    g1_beta_rigid,
    nr_isotropy,
    phi,
    reconstruct_abelian,
    scaling_exponent,
    thooft_connection,
)

__version__ = "1.0.0"


def closed_form_A(alpha: float) -> float:
    """Coefficient of the a-block of g^{0,alpha} at rho = 1:
    A(alpha) = 4^{2 alpha + 1} pi^2 (2 alpha - 1) Gamma(2 alpha - 1) / Gamma(2 alpha + 2).
    """
    if alpha <= 0.5:
        raise ValueError("A(alpha) requires alpha > 1/2")
    return (
        4.0 ** (2.0 * alpha + 1.0)
        * math.pi**2
        * (2.0 * alpha - 1.0)
        * math.gamma(2.0 * alpha - 1.0)
        / math.gamma(2.0 * (alpha + 1.0))
    )


def closed_form_B(alpha: float) -> float:
    """Anisotropy ratio g_rhorho / g_aa = 2 / (2 alpha - 1)."""
    if alpha <= 0.5:
        raise ValueError("B(alpha) requires alpha > 1/2")
    return 2.0 / (2.0 * alpha - 1.0)
