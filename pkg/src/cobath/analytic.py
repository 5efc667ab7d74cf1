"""Closed-form results for the common-reservoir two-mode channel.

The channel damps the collective mode a1 + a2 at rate Gamma against a
thermal reservoir of mean occupancy N0. Everything here is expressed in
the +/- combinations a_pm = a1 +/- a2 of the dyad labels; the accumulated
thermal noise is N(t) = N0 (1 - e^{-2 Gamma t}).

Two independent purity predictions for an initially coherent input are
kept side by side on purpose:

* `purity_coherent_paper`:    2(1+N) / (2 + 6N + 5N^2)
* `purity_coherent_rotated`:  1 / (1 + 2N), obtained by rotating to the
  modes c_pm = (a1 +/- a2)/sqrt(2), where the channel is plain single-mode
  thermal damping of c_+ at rate 2 Gamma and the purity of a displaced
  thermal state is a geometric series.

They agree only to first order in N; neither is trusted silently. The
verification suite integrates the master equation and reports which one
the numerics select.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import StepSizeError
from .fock import DyadExpansion, DyadTerm

# Central differences with steps below this cancel into double-precision noise.
MIN_FD_STEP = 1e-8


@dataclass(frozen=True)
class ChannelParams:
    """Decay rate Gamma (inverse time) and reservoir occupancy N0."""

    gamma: float
    n0: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.n0 < 0.0:
            raise ValueError(f"n0 must be >= 0, got {self.n0}")

    @classmethod
    def from_temperature_ratio(cls, gamma: float, ratio: float) -> "ChannelParams":
        """Build from the dimensionless ratio (mode quantum energy) / kT."""
        return cls(gamma, planck_occupancy(ratio))


@dataclass(frozen=True)
class PhasePoint:
    """Argument (lambda1, lambda2) of the characteristic function."""

    lambda1: complex
    lambda2: complex

    @property
    def lam_plus(self) -> complex:
        return self.lambda1 + self.lambda2

    @property
    def lam_minus(self) -> complex:
        return self.lambda1 - self.lambda2


@dataclass(frozen=True)
class QPoint:
    """Argument (delta1, delta2) of the Q-function."""

    delta1: complex
    delta2: complex


def planck_occupancy(x: float) -> float:
    """Mean thermal occupancy 1 / (e^x - 1) for x = (mode quantum energy)/kT."""
    if not x > 0.0:
        raise ValueError(f"temperature ratio must be > 0, got {x}")
    return 1.0 / math.expm1(x)


def n_of_t(p: ChannelParams, t: float) -> float:
    """Accumulated reservoir noise N(t) = N0 (1 - e^{-2 Gamma t})."""
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    return p.n0 * -math.expm1(-2.0 * p.gamma * t)


def zero_temp_map(expansion: DyadExpansion, p: ChannelParams, t: float) -> DyadExpansion:
    """Channel output at N0 = 0 as a label map on coherent dyads.

    With a_pm = a1 +/- a2 of each label pair, the ket labels become
    ((a_+ e^{-Gamma t} + a_-)/2, (a_+ e^{-Gamma t} - a_-)/2); bra labels
    likewise. In the +/- coordinates this is simply a_+ -> a_+ e^{-Gamma t}
    with a_- untouched. Weights of the normalized dyads are unchanged
    (each dyad keeps unit trace, so the total weight stays 1) and the map
    composes as a semigroup in t.
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    decay = math.exp(-p.gamma * t)

    def shrink(l1: complex, l2: complex) -> tuple[complex, complex]:
        plus = (l1 + l2) * decay
        minus = l1 - l2
        return (plus + minus) / 2.0, (plus - minus) / 2.0

    terms = []
    for dy in expansion.terms:
        k1, k2 = shrink(dy.ket1, dy.ket2)
        b1, b2 = shrink(dy.bra1, dy.bra2)
        terms.append(DyadTerm(dy.weight, k1, k2, b1, b2))
    return DyadExpansion(tuple(terms))


def chi_analytic(
    expansion: DyadExpansion, pt: PhasePoint, p: ChannelParams, t: float
) -> complex:
    """Characteristic function Tr[D(lambda1) D(lambda2) rho(t)] of the
    channel output, given the input's dyad expansion.

    Per dyad the kernel is
      exp[ -N(t)|l+|^2/2 - |l+|^2/4 - |l-|^2/4
           - e^{-Gamma t} (a+ conj(l+) - conj(b+) l+)/2
           - (a- conj(l-) - conj(b-) l-)/2 ]
    with a_pm, b_pm the +/- combinations of ket and bra labels. At t = 0
    this reduces per dyad to exp(-|l_i|^2/2 - conj(l_i) a_i + l_i conj(b_i))
    in the per-mode variables.
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    n_t = n_of_t(p, t)
    decay = math.exp(-p.gamma * t)
    lp = pt.lam_plus
    lm = pt.lam_minus
    quad = -0.5 * n_t * abs(lp) ** 2 - 0.25 * abs(lp) ** 2 - 0.25 * abs(lm) ** 2
    acc = 0.0 + 0.0j
    for dy in expansion.terms:
        ap = dy.ket1 + dy.ket2
        am = dy.ket1 - dy.ket2
        bpc = (dy.bra1 + dy.bra2).conjugate()
        bmc = (dy.bra1 - dy.bra2).conjugate()
        expo = (
            quad
            - 0.5 * decay * (ap * lp.conjugate() - bpc * lp)
            - 0.5 * (am * lm.conjugate() - bmc * lm)
        )
        acc += dy.weight * cmath.exp(expo)
    return acc


def q_exponent_grid(
    expansion: DyadExpansion,
    delta1: np.ndarray,
    delta2: np.ndarray,
    p: ChannelParams,
    t: float,
) -> np.ndarray:
    """Q-function of the channel output on arrays of phase-space points.

    Broadcasts over delta1/delta2 and returns the real Q values; the
    imaginary residue of the dyad sum (zero for hermitian expansions up to
    rounding) is discarded.
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    n_t = n_of_t(p, t)
    e1 = math.exp(-p.gamma * t)
    e2 = math.exp(-2.0 * p.gamma * t)
    opn = 1.0 + n_t
    d1 = np.asarray(delta1, dtype=complex)
    d2 = np.asarray(delta2, dtype=complex)
    quad = (
        -(2.0 + n_t) / opn * (np.abs(d1) ** 2 + np.abs(d2) ** 2)
        + n_t / opn * (d1 * d2.conj() + d1.conj() * d2)
    )
    acc = np.zeros(np.broadcast(d1, d2).shape, dtype=complex)
    for dy in expansion.terms:
        ap = dy.ket1 + dy.ket2
        am = dy.ket1 - dy.ket2
        bpc = (dy.bra1 + dy.bra2).conjugate()
        bmc = (dy.bra1 - dy.bra2).conjugate()
        f = (
            quad
            - ap * bpc * e2 / opn
            - am * bmc
            + (ap * e1 / opn + am) * d1.conj()
            + (bpc * e1 / opn + bmc) * d1
            + (ap * e1 / opn - am) * d2.conj()
            + (bpc * e1 / opn - bmc) * d2
        )
        acc += dy.weight * np.exp(0.5 * f)
    return acc.real / (math.pi**2 * opn)


def q_analytic(
    expansion: DyadExpansion, q: QPoint, p: ChannelParams, t: float
) -> float:
    """Q-function of the channel output at a single phase-space point."""
    return float(q_exponent_grid(expansion, q.delta1, q.delta2, p, t))


def purity_coherent_paper(p: ChannelParams, t: float) -> float:
    """Reported closed-form output purity for a coherent input:
    2(1+N)/(2+6N+5N^2) with N = N(t)."""
    n_t = n_of_t(p, t)
    return 2.0 * (1.0 + n_t) / (2.0 + 6.0 * n_t + 5.0 * n_t * n_t)


def purity_coherent_rotated(p: ChannelParams, t: float) -> float:
    """Output purity for a coherent input from the rotated-mode picture:
    the c_+ mode ends in a displaced thermal state of occupancy N(t), the
    c_- mode stays coherent, so Tr rho^2 = 1/(1+2N)."""
    return 1.0 / (1.0 + 2.0 * n_of_t(p, t))


def fidelity_antisym(p: ChannelParams, t: float) -> float:
    """Input-output overlap for |alpha, -alpha>: 1/(1+N), alpha-independent."""
    return 1.0 / (1.0 + n_of_t(p, t))


def fidelity_sym(alpha: complex, p: ChannelParams, t: float) -> float:
    """Input-output overlap for |alpha, alpha>:
    [1/(1+N)] exp(-2 (1-e^{-Gamma t})^2 |alpha|^2 / (1+N))."""
    n_t = n_of_t(p, t)
    shift = -math.expm1(-p.gamma * t)  # 1 - e^{-Gamma t}
    return math.exp(-2.0 * shift * shift * abs(alpha) ** 2 / (1.0 + n_t)) / (1.0 + n_t)


def chi_pde_residual(
    expansion: DyadExpansion,
    pt: PhasePoint,
    p: ChannelParams,
    t: float,
    h: float,
) -> float:
    """Finite-difference residual of the evolution equation for chi:

        dchi/dt + Gamma (N0 + 1/2) |l+|^2 chi
                + Gamma (l+ d/dl+ + conj(l+) d/dconj(l+)) chi = 0.

    The Wirtinger combination l+ d/dl+ + conj(l+) d/dconj(l+) equals the
    radial operator x d/dx + y d/dy in l+ = x + iy, evaluated here with
    central differences in x and y while holding l- fixed; d/dt is a
    central difference as well. The residual decays as O(h^2).
    """
    if not (t > h > 0.0):
        raise ValueError(f"need t > h > 0, got t={t}, h={h}")
    if h < MIN_FD_STEP:
        raise StepSizeError(
            f"step {h} below {MIN_FD_STEP}; cancellation would dominate"
        )

    def chi_pm(lam_plus: complex, at: float) -> complex:
        l1 = (lam_plus + pt.lam_minus) / 2.0
        l2 = (lam_plus - pt.lam_minus) / 2.0
        return chi_analytic(expansion, PhasePoint(l1, l2), p, at)

    lp = pt.lam_plus
    x, y = lp.real, lp.imag
    chi0 = chi_analytic(expansion, pt, p, t)
    dchi_dt = (chi_pm(lp, t + h) - chi_pm(lp, t - h)) / (2.0 * h)
    dchi_dx = (chi_pm(complex(x + h, y), t) - chi_pm(complex(x - h, y), t)) / (2.0 * h)
    dchi_dy = (chi_pm(complex(x, y + h), t) - chi_pm(complex(x, y - h), t)) / (2.0 * h)
    radial = x * dchi_dx + y * dchi_dy
    residual = dchi_dt + p.gamma * (p.n0 + 0.5) * abs(lp) ** 2 * chi0 + p.gamma * radial
    return abs(residual)
