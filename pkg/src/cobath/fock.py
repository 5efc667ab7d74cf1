"""Truncated two-mode Fock-space linear algebra.

Mode operators, coherent states, entangled coherent superpositions and
finite expansions in normalized coherent dyads, all over a pair of
bosonic modes truncated to d1 and d2 Fock levels.

Basis convention (fixed): the two-mode number state |n1, n2> sits at
flat index n1 * d2 + n2, so two-mode operators are np.kron(op1, op2).

Everything here is a pure function over immutable values; nothing keeps
global state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammainc, gammaln

from .errors import CutoffTooSmallError, DegenerateStateError, DimensionMismatchError

# Poisson-tail budget for every coherent amplitude placed in a truncated basis.
TRUNCATION_TOL = 1e-12

# Squared norms at or below this are treated as a degenerate superposition.
DEGENERACY_TOL = 1e-12


def poisson_tail(mean: float, d: int) -> float:
    """P(X >= d) for X ~ Poisson(mean): the weight a coherent state with
    |alpha|^2 = mean loses when truncated to levels 0..d-1."""
    return float(gammainc(d, mean))


def default_cutoff(amplitude: complex) -> int:
    """Smallest per-mode cutoff the truncation policy allows for a coherent
    amplitude: max(16, ceil(|a|^2 + 6|a| + 12)), which keeps the Poisson
    tail comfortably below TRUNCATION_TOL."""
    a = abs(amplitude)
    return max(16, math.ceil(a * a + 6.0 * a + 12.0))


def annihilation(d: int) -> np.ndarray:
    """Single-mode annihilation operator on d Fock levels: sqrt(n) at (n-1, n)."""
    if d < 1:
        raise ValueError(f"invalid Fock dimension d={d}; need d >= 1")
    return np.diag(np.sqrt(np.arange(1.0, d)), 1).astype(complex)


def creation(d: int) -> np.ndarray:
    """Adjoint of annihilation(d)."""
    return annihilation(d).conj().T.copy()


def coherent_ket(alpha: complex, d: int, tol: float = TRUNCATION_TOL) -> np.ndarray:
    """Coherent state |alpha> truncated to d levels, NOT renormalized.

    Entries exp(-|alpha|^2/2) alpha^n / sqrt(n!). The truncation deficit is
    kept (norm < 1) so tolerance accounting stays honest; if the Poisson
    tail reaches `tol` the cutoff is rejected instead.
    """
    if d < 1:
        raise ValueError(f"invalid Fock dimension d={d}; need d >= 1")
    mean = abs(alpha) ** 2
    tail = poisson_tail(mean, d)
    if tail >= tol:
        raise CutoffTooSmallError(alpha, d, tail, tol)
    ratios = alpha / np.sqrt(np.arange(1.0, d))
    v = np.concatenate(([1.0 + 0.0j], np.cumprod(ratios.astype(complex))))
    return math.exp(-mean / 2.0) * v


def displacement(lam: complex, d: int) -> np.ndarray:
    """Displacement operator exp(lam a^dag - conj(lam) a) on d levels.

    Built from the closed-form associated-Laguerre matrix elements, which
    are the exact projection of the infinite-dimensional operator onto the
    truncated block (no exponentiation, no corner artifacts):

        <m|D|n> = sqrt(n!/m!) lam^(m-n) e^(-|lam|^2/2) L_n^(m-n)(|lam|^2),  m >= n
        <m|D|n> = sqrt(m!/n!) (-conj(lam))^(n-m) e^(-|lam|^2/2) L_m^(n-m)(|lam|^2), m < n
    """
    if d < 1:
        raise ValueError(f"invalid Fock dimension d={d}; need d >= 1")
    x = abs(lam) ** 2
    pre = math.exp(-x / 2.0)
    out = np.zeros((d, d), dtype=complex)
    for k in range(d):
        n = np.arange(d - k)
        lag = eval_genlaguerre(n, k, x)
        ratio = np.exp(0.5 * (gammaln(n + 1) - gammaln(n + k + 1)))
        if k == 0:
            out[n, n] = pre * ratio * lag
        else:
            out[n + k, n] = pre * ratio * lag * lam**k
            out[n, n + k] = pre * ratio * lag * (-lam.conjugate()) ** k
    return out


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Two-mode composition A (x) B in the mode-1-major index convention."""
    return np.kron(a, b)


def coherent_overlap(beta: complex, alpha: complex) -> complex:
    """<beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha)."""
    return cmath.exp(
        -0.5 * (abs(alpha) ** 2 + abs(beta) ** 2) + beta.conjugate() * alpha
    )


def pair_overlap(bra: tuple[complex, complex], ket: tuple[complex, complex]) -> complex:
    """Two-mode coherent overlap <b1, b2|k1, k2>."""
    return coherent_overlap(bra[0], ket[0]) * coherent_overlap(bra[1], ket[1])


@dataclass(frozen=True)
class ModeCutoff:
    """Fock levels kept per mode: 0..d1-1 and 0..d2-1."""

    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError(f"cutoffs must be >= 1, got ({self.d1}, {self.d2})")

    @property
    def dim(self) -> int:
        return self.d1 * self.d2


@dataclass(frozen=True)
class StateVector:
    """Two-mode pure state in the flattened |n1, n2> basis.

    Truncation makes the squared norm fall short of 1; the deficit is kept
    visible via `norm_deficit` rather than silently renormalized.
    """

    amplitudes: np.ndarray
    cutoff: ModeCutoff

    def __post_init__(self):
        if self.amplitudes.shape != (self.cutoff.dim,):
            raise DimensionMismatchError(
                f"state length {self.amplitudes.shape} != cutoff dim {self.cutoff.dim}"
            )
        ns = self.norm_sq
        if not (0.0 < ns <= 1.0 + 1e-9):
            raise ValueError(f"squared norm {ns} outside (0, 1]")

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def norm_deficit(self) -> float:
        return 1.0 - self.norm_sq


@dataclass(frozen=True)
class DensityOperator:
    """Dense two-mode density matrix over a ModeCutoff basis."""

    matrix: np.ndarray
    cutoff: ModeCutoff

    HERM_TOL = 1e-8
    TRACE_TOL = 1e-6

    def __post_init__(self):
        d = self.cutoff.dim
        if self.matrix.shape != (d, d):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} != ({d}, {d})"
            )
        herm = np.abs(self.matrix - self.matrix.conj().T).max()
        if herm > self.HERM_TOL:
            raise ValueError(f"matrix not hermitian: max defect {herm:.3e}")
        tr = complex(np.trace(self.matrix))
        if abs(tr - 1.0) > self.TRACE_TOL:
            raise ValueError(f"trace {tr} not 1 within {self.TRACE_TOL}")

    @property
    def dim(self) -> int:
        return self.cutoff.dim

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @classmethod
    def from_state_vector(cls, sv: StateVector) -> "DensityOperator":
        m = np.outer(sv.amplitudes, sv.amplitudes.conj()) / sv.norm_sq
        return cls(m, sv.cutoff)

    @classmethod
    def vacuum(cls, cutoff: ModeCutoff) -> "DensityOperator":
        m = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
        m[0, 0] = 1.0
        return cls(m, cutoff)


@dataclass(frozen=True)
class CoherentSuperposition:
    """Finite superposition sum_k c_k |a1_k, a2_k> of two-mode coherent kets."""

    terms: tuple[tuple[complex, complex, complex], ...]

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("superposition needs at least one term")

    def norm_sq(self) -> float:
        """<psi|psi> from pairwise analytic coherent overlaps (no truncation)."""
        acc = 0.0 + 0.0j
        for ci, a1i, a2i in self.terms:
            for cj, a1j, a2j in self.terms:
                acc += ci.conjugate() * cj * pair_overlap((a1i, a2i), (a1j, a2j))
        return float(acc.real)

    def normalized(self) -> "CoherentSuperposition":
        ns = self.norm_sq()
        if ns <= DEGENERACY_TOL:
            raise DegenerateStateError(f"superposition norm^2 {ns:.3e} ~ 0")
        s = 1.0 / math.sqrt(ns)
        return CoherentSuperposition(
            tuple((c * s, a1, a2) for c, a1, a2 in self.terms)
        )

    def max_amplitude(self) -> float:
        return max(max(abs(a1), abs(a2)) for _, a1, a2 in self.terms)

    def to_state_vector(
        self, cutoff: ModeCutoff, tol: float = TRUNCATION_TOL
    ) -> StateVector:
        v = np.zeros(cutoff.dim, dtype=complex)
        for c, a1, a2 in self.terms:
            v += c * np.kron(
                coherent_ket(a1, cutoff.d1, tol), coherent_ket(a2, cutoff.d2, tol)
            )
        return StateVector(v, cutoff)


def entangled_coherent(alpha: complex, phi: float, sign: int) -> CoherentSuperposition:
    """Normalized c (|alpha,-alpha> + sign e^{i phi} |-alpha,alpha>).

    c = (2 + sign 2 cos(phi) e^{-4|alpha|^2})^{-1/2}; parameters whose norm
    vanishes (e.g. alpha=0, phi=0, sign=-1) are rejected.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    nsq = 2.0 + 2.0 * sign * math.cos(phi) * math.exp(-4.0 * abs(alpha) ** 2)
    if nsq <= DEGENERACY_TOL:
        raise DegenerateStateError(
            f"entangled coherent state degenerate: norm^2 = {nsq:.3e}"
        )
    c = nsq**-0.5
    alpha = complex(alpha)
    return CoherentSuperposition(
        (
            (c + 0.0j, alpha, -alpha),
            (c * sign * cmath.exp(1j * phi), -alpha, alpha),
        )
    )


def superposition_to_density(
    psi: CoherentSuperposition, cutoff: ModeCutoff, tol: float = TRUNCATION_TOL
) -> DensityOperator:
    """|psi><psi| as a dense matrix, normalized to unit trace."""
    return DensityOperator.from_state_vector(psi.to_state_vector(cutoff, tol))


@dataclass(frozen=True)
class DyadTerm:
    """One weighted normalized dyad |ket1,ket2><bra1,bra2| / <bra|ket>."""

    weight: complex
    ket1: complex
    ket2: complex
    bra1: complex
    bra2: complex

    @property
    def ket(self) -> tuple[complex, complex]:
        return (self.ket1, self.ket2)

    @property
    def bra(self) -> tuple[complex, complex]:
        return (self.bra1, self.bra2)


@dataclass(frozen=True)
class DyadExpansion:
    """Operator as a finite sum of weighted normalized coherent dyads.

    The represented operator is sum_k w_k |ket_k><bra_k| / <bra_k|ket_k>.
    Each dyad has unit trace, so sum_k w_k = 1 is the trace condition.
    A hermitian operator carries, for every term, the weight-conjugated
    partner with ket and bra labels swapped.
    """

    terms: tuple[DyadTerm, ...]

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("dyad expansion needs at least one term")

    def total_weight(self) -> complex:
        return complex(sum(t.weight for t in self.terms))

    def max_label(self) -> float:
        return max(
            max(abs(t.ket1), abs(t.ket2), abs(t.bra1), abs(t.bra2))
            for t in self.terms
        )

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        unmatched = list(self.terms)
        while unmatched:
            t = unmatched.pop()
            for i, s in enumerate(unmatched):
                if (
                    abs(s.weight - t.weight.conjugate()) <= tol
                    and abs(s.ket1 - t.bra1) <= tol
                    and abs(s.ket2 - t.bra2) <= tol
                    and abs(s.bra1 - t.ket1) <= tol
                    and abs(s.bra2 - t.ket2) <= tol
                ):
                    unmatched.pop(i)
                    break
            else:
                # A self-paired term must have ket == bra and real weight.
                if not (
                    abs(t.weight.imag) <= tol
                    and abs(t.ket1 - t.bra1) <= tol
                    and abs(t.ket2 - t.bra2) <= tol
                ):
                    return False
        return True

    def reconstruct(
        self, cutoff: ModeCutoff, tol: float = TRUNCATION_TOL
    ) -> DensityOperator:
        """Dense matrix of the expansion, trace-normalized to absorb the
        (tiny, tail-bounded) truncation deficit."""
        m = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
        for t in self.terms:
            vk = np.kron(
                coherent_ket(t.ket1, cutoff.d1, tol),
                coherent_ket(t.ket2, cutoff.d2, tol),
            )
            vb = np.kron(
                coherent_ket(t.bra1, cutoff.d1, tol),
                coherent_ket(t.bra2, cutoff.d2, tol),
            )
            m += (t.weight / pair_overlap(t.bra, t.ket)) * np.outer(vk, vb.conj())
        m /= np.trace(m)
        return DensityOperator(m, cutoff)


def dyad_expansion_of(
    psi: CoherentSuperposition, tol: float = 1e-10
) -> DyadExpansion:
    """Dyad expansion of |psi><psi| for a normalized superposition.

    Weights w_ij = c_i conj(c_j) <A_j|A_i> pair the normalized dyads
    Lambda(A_i; A_j), so the weights sum to <psi|psi> = 1.
    """
    ns = psi.norm_sq()
    if abs(ns - 1.0) > tol:
        raise ValueError(f"superposition must be normalized; <psi|psi> = {ns}")
    terms = []
    for ci, k1, k2 in psi.terms:
        for cj, b1, b2 in psi.terms:
            w = ci * cj.conjugate() * pair_overlap((b1, b2), (k1, k2))
            terms.append(DyadTerm(w, k1, k2, b1, b2))
    return DyadExpansion(tuple(terms))
