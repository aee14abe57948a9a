"""Per-mode information quantities of the decoupled channel.

In the decoupling basis every channel use is a single-mode attenuator
sigma -> eta * sigma + (1 - eta) * V_j, with V_j the squeezed thermal
environment mode.  Inputs are squeezed thermal seeds diag((t+1/2)e^r,
(t+1/2)e^-r) displaced by classical Gaussian modulation with variances
(c_q, c_p).  All quantities are in bits.

The two-mode output spectra needed for the coherent information factor into
closed forms; the determinant of the joint output is evaluated through the
cancellation-free products (1-eta)*c*b + eta/4 and (1-eta)*d*a + eta/4, and
the smaller symplectic eigenvalue through det/nu_plus, which stays accurate
when the state is nearly pure.  Analytic first derivatives are provided for
every quantity so optimizer stationarity can be verified independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import GlobalEnvMode
from .gaussian import g_entropy, g_prime, purify_single_mode

__all__ = [
    "EncodingParams",
    "chi_mode",
    "chi_mode_gradient",
    "holevo_chi",
    "coherent_information",
    "coherent_information_gradient",
    "coherent_information_rotated",
    "quantum_mutual_information",
    "quantum_mutual_information_gradient",
    "mode_photon_number",
]


def mode_photon_number(t: float, r: float, c_q: float, c_p: float) -> float:
    """Mean photon number (t+1/2) cosh r - 1/2 + (c_q + c_p)/2 of one mode."""
    return (t + 0.5) * math.cosh(r) - 0.5 + 0.5 * (c_q + c_p)


@dataclass(frozen=True)
class EncodingParams:
    """Gaussian encoding across the decoupled modes.

    Per-mode squeezed thermal seeds (t, r) and classical modulation
    variances (c_q, c_p); ``n_j`` records each mode's mean photon number and
    must satisfy the energy identity within 1e-8.
    """

    t: tuple[float, ...]
    r: tuple[float, ...]
    c_q: tuple[float, ...]
    c_p: tuple[float, ...]
    n_j: tuple[float, ...]

    def __post_init__(self) -> None:
        lens = {len(self.t), len(self.r), len(self.c_q), len(self.c_p), len(self.n_j)}
        if len(lens) != 1:
            raise ValueError("per-mode parameter lists must share one length")
        for j in range(len(self.t)):
            if self.t[j] < -1e-12 or self.c_q[j] < -1e-12 or self.c_p[j] < -1e-12:
                raise ValueError(f"mode {j + 1}: t, c_q, c_p must be >= 0")
            expect = mode_photon_number(self.t[j], self.r[j], self.c_q[j], self.c_p[j])
            if abs(expect - self.n_j[j]) > 1e-8 * (1.0 + abs(expect)):
                raise ValueError(
                    f"mode {j + 1}: photon number {self.n_j[j]} breaks the energy identity "
                    f"(expected {expect})"
                )

    @classmethod
    def from_free(cls, t, r, c_q, c_p) -> "EncodingParams":
        """Build params with photon numbers filled in from the identity."""
        n_j = tuple(mode_photon_number(*vals) for vals in zip(t, r, c_q, c_p))
        return cls(tuple(t), tuple(r), tuple(c_q), tuple(c_p), n_j)

    @property
    def n_modes(self) -> int:
        return len(self.t)

    def mean_photons(self) -> float:
        return math.fsum(self.n_j) / len(self.n_j)


def _outputs(t, r, c_q, c_p, mode: GlobalEnvMode, eta):
    env_q = (mode.temp + 0.5) * math.exp(mode.s)
    env_p = (mode.temp + 0.5) * math.exp(-mode.s)
    oq = eta * (t + 0.5) * math.exp(r) + (1.0 - eta) * env_q
    op = eta * (t + 0.5) * math.exp(-r) + (1.0 - eta) * env_p
    return oq, op, oq + eta * c_q, op + eta * c_p


def chi_mode(t: float, r: float, c_q: float, c_p: float, mode: GlobalEnvMode, eta: float) -> float:
    """Holevo information of one decoupled mode, in bits."""
    oq, op, aq, ap = _outputs(t, r, c_q, c_p, mode, eta)
    return g_entropy(math.sqrt(aq * ap) - 0.5) - g_entropy(math.sqrt(oq * op) - 0.5)


def chi_mode_gradient(
    t: float, r: float, c_q: float, c_p: float, mode: GlobalEnvMode, eta: float
) -> tuple[float, float, float, float]:
    """Partial derivatives of :func:`chi_mode` in (t, r, c_q, c_p).

    Needs both output states away from the vacuum (t > 0 or temp > 0 etc.),
    where g' is finite.
    """
    oq, op, aq, ap = _outputs(t, r, c_q, c_p, mode, eta)
    sq_o = math.sqrt(oq * op)
    sq_a = math.sqrt(aq * ap)
    gp_o = g_prime(sq_o - 0.5)
    gp_a = g_prime(sq_a - 0.5)
    d_oq_t = eta * math.exp(r)
    d_op_t = eta * math.exp(-r)
    d_oq_r = eta * (t + 0.5) * math.exp(r)
    d_op_r = -eta * (t + 0.5) * math.exp(-r)

    def d_sq(x, y, dx, dy):
        return (y * dx + x * dy) / (2.0 * math.sqrt(x * y))

    d_t = gp_a * d_sq(aq, ap, d_oq_t, d_op_t) - gp_o * d_sq(oq, op, d_oq_t, d_op_t)
    d_r = gp_a * d_sq(aq, ap, d_oq_r, d_op_r) - gp_o * d_sq(oq, op, d_oq_r, d_op_r)
    d_cq = gp_a * eta * ap / (2.0 * sq_a)
    d_cp = gp_a * eta * aq / (2.0 * sq_a)
    return d_t, d_r, d_cq, d_cp


def holevo_chi(params: EncodingParams, modes: list[GlobalEnvMode], eta: float) -> float:
    """Total Holevo information of the encoding over all modes, in bits.

    Additive across the decoupled modes; divide by n for bits per use.
    """
    if params.n_modes != len(modes):
        raise ValueError(f"encoding covers {params.n_modes} modes, channel has {len(modes)}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    return math.fsum(
        chi_mode(params.t[j], params.r[j], params.c_q[j], params.c_p[j], modes[j], eta)
        for j in range(len(modes))
    )


def _coherent_pieces(t, r, mode: GlobalEnvMode, eta):
    a = (t + 0.5) * math.exp(r)
    b = (t + 0.5) * math.exp(-r)
    env_q = (mode.temp + 0.5) * math.exp(mode.s)
    env_p = (mode.temp + 0.5) * math.exp(-mode.s)
    alpha = eta * a + (1.0 - eta) * env_q
    beta = eta * b + (1.0 - eta) * env_p
    det_out = alpha * beta
    # joint (output, environment-purifier) invariants; the products below
    # are the factored determinant with the eta*a*b cancellation done exactly
    i2 = det_out + (1.0 - 2.0 * eta) * a * b + 0.5 * eta
    pq = (1.0 - eta) * env_q * b + 0.25 * eta
    pp = (1.0 - eta) * env_p * a + 0.25 * eta
    return a, b, env_q, env_p, alpha, beta, det_out, i2, pq, pp


def _nu_pair(i2, det_tau):
    r = math.sqrt(max(i2 * i2 - 4.0 * det_tau, 0.0))
    nu_plus = math.sqrt((i2 + r) / 2.0)
    nu_minus = math.sqrt(max(det_tau, 0.0)) / nu_plus
    return nu_plus, nu_minus, r


def coherent_information(t: float, r: float, mode: GlobalEnvMode, eta: float) -> float:
    """Coherent information of one decoupled mode, in bits.

    Output entropy minus entropy exchange; zero for every pure input (t = 0)
    and nonpositive at eta = 0.
    """
    _, _, _, _, _, _, det_out, i2, pq, pp = _coherent_pieces(t, r, mode, eta)
    nu_plus, nu_minus, _ = _nu_pair(i2, pq * pp)
    return (
        g_entropy(math.sqrt(det_out) - 0.5)
        - g_entropy(nu_plus - 0.5)
        - g_entropy(max(nu_minus - 0.5, 0.0))
    )


def coherent_information_gradient(
    t: float, r: float, mode: GlobalEnvMode, eta: float
) -> tuple[float, float]:
    """Partial derivatives of :func:`coherent_information` in (t, r).

    Requires t > 0 and a nondegenerate joint spectrum (nu_plus != nu_minus);
    both hold at generic interior points.
    """
    a, b, env_q, env_p, alpha, beta, det_out, i2, pq, pp = _coherent_pieces(t, r, mode, eta)
    det_tau = pq * pp
    nu_plus, nu_minus, rad = _nu_pair(i2, det_tau)
    if rad <= 0.0:
        raise ValueError("degenerate joint spectrum; gradient undefined")
    sq_o = math.sqrt(det_out)

    # derivatives with respect to (a, b)
    d_i2_a = eta * beta + (1.0 - 2.0 * eta) * b
    d_i2_b = eta * alpha + (1.0 - 2.0 * eta) * a
    d_tau_a = pq * (1.0 - eta) * env_p
    d_tau_b = (1.0 - eta) * env_q * pp
    d_out_a = eta * beta
    d_out_b = eta * alpha

    gp_o = g_prime(sq_o - 0.5)
    gp_plus = g_prime(nu_plus - 0.5)
    gp_minus = g_prime(nu_minus - 0.5) if nu_minus > 0.5 + 1e-14 else 0.0

    def dj(d_i2, d_tau, d_out):
        d_rad = (i2 * d_i2 - 2.0 * d_tau) / rad
        d_plus = (d_i2 + d_rad) / (4.0 * nu_plus)
        d_minus = (d_i2 - d_rad) / (4.0 * nu_minus)
        return gp_o * d_out / (2.0 * sq_o) - gp_plus * d_plus - gp_minus * d_minus

    dj_da = dj(d_i2_a, d_tau_a, d_out_a)
    dj_db = dj(d_i2_b, d_tau_b, d_out_b)
    d_t = dj_da * math.exp(r) + dj_db * math.exp(-r)
    d_r = dj_da * a - dj_db * b
    return d_t, d_r


def coherent_information_rotated(
    t: float, r: float, theta: float, mode: GlobalEnvMode, eta: float
) -> float:
    """Coherent information for a phase-rotated seed (diagnostic).

    Rotating the squeezed thermal seed by ``theta`` introduces a q-p
    correlation; this evaluates the resulting coherent information through
    the explicit two-mode output spectrum.  theta = 0 reproduces
    :func:`coherent_information`, and scanning theta checks that correlated
    seeds do not beat the quadrature-aligned form.
    """
    pur = purify_single_mode(t, r)
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    sys_blk = rot @ pur.a @ rot.T
    cross = rot @ pur.c.T  # upper-right block, system rows by ancilla columns
    out_a = eta * sys_blk + (1.0 - eta) * mode.covariance()
    out_c = math.sqrt(eta) * cross
    joint = np.block([[out_a, out_c], [out_c.T, pur.b]])
    delta = np.linalg.det(out_a) + np.linalg.det(pur.b) + 2.0 * np.linalg.det(out_c)
    det_m = np.linalg.det(joint)
    nu_plus, nu_minus, _ = _nu_pair(float(delta), float(det_m))
    return (
        g_entropy(math.sqrt(max(np.linalg.det(out_a), 0.0)) - 0.5)
        - g_entropy(nu_plus - 0.5)
        - g_entropy(max(nu_minus - 0.5, 0.0))
    )


def quantum_mutual_information(t: float, r: float, mode: GlobalEnvMode, eta: float) -> float:
    """Input-output mutual information g(t) + J of one decoupled mode, bits."""
    return g_entropy(t) + coherent_information(t, r, mode, eta)


def quantum_mutual_information_gradient(
    t: float, r: float, mode: GlobalEnvMode, eta: float
) -> tuple[float, float]:
    """Partial derivatives of :func:`quantum_mutual_information` in (t, r)."""
    d_t, d_r = coherent_information_gradient(t, r, mode, eta)
    return d_t + g_prime(t), d_r
