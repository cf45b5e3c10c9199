"""Entanglement, coherence, and metrological measures for two-qubit states.

Concurrence comes in two routes that the tests pin against each other: the
generic spin-flip construction valid for any two-qubit state, and the
closed-form X-state expression whose two max-arguments ("branches") are
physically distinct coherence channels. Coherence is the l1 sum of
off-diagonal magnitudes, optionally after a local product-basis rotation.

The local quantum Fisher information (LQFI) quantifies the worst-case
usefulness of the state for phase estimation generated on one qubit:
Q = min over unit vectors r of F(rho, sigma_r x I). The minimum is reached
in closed form as 1 - lambda_max(M) for a 3x3 matrix M built from the
eigendecomposition of rho, PROVIDED the double sum defining M runs over all
index pairs (the diagonal i = j contributes p_i <i|A|i><i|B|i>). Dropping
the diagonal, as sometimes written, breaks the identity on low-rank states
(a pure product state then scores a spurious Q = 1); that variant is kept
as `lqfi_paper_variant` for comparison, and `lqfi_bruteforce` minimizes the
parent measure on a direction grid without using M at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dynamics import X_FORM_TOL, x_components, x_leakage
from .linalg import NotHermitian, hermiticity_defect, kron
from .model import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z

# eigenvalue pairs with p_i + p_j at or below this are dropped from the sums
PAIR_EPS = 1e-12

# density eigenvalues in [-EIG_CLAMP, 0) are treated as 0; below is an error
EIG_CLAMP = 1e-9


class NotXForm(ValueError):
    """State has entries outside the X sparsity pattern beyond tolerance."""


class XConcurrence(NamedTuple):
    """Concurrence of an X state and its two raw branches.

    c1_branch = |rho23| - sqrt(rho11 rho44) (inner coherence channel),
    c2_branch = |rho14| - sqrt(rho22 rho33) (outer coherence channel);
    concurrence = 2 * max(c1_branch, c2_branch, 0). Branches may be
    negative.
    """

    concurrence: float
    c1_branch: float
    c2_branch: float


def concurrence_generic(rho) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    Spin-flip construction: with l1..l4 the decreasing square roots of the
    eigenvalues of rho (sy x sy) rho* (sy x sy), C = max(l1-l2-l3-l4, 0).
    The l_i are computed as the singular values of sqrt(rho) (sy x sy)
    conj(sqrt(rho)), which is algebraically the same but does not amplify
    eps-sized spurious eigenvalues to sqrt(eps) on rank-deficient states.
    """
    r = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh((r + r.conj().T) / 2.0)
    w[w < 0.0] = 0.0  # clamp roundoff negatives before the root
    sq = (v * np.sqrt(w)) @ v.conj().T
    yy = kron(SIGMA_Y, SIGMA_Y)
    lam = np.linalg.svd(sq @ yy @ sq.conj(), compute_uv=False)
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def concurrence_x(rho) -> XConcurrence:
    """Closed-form concurrence of an X-form state, with both branches.

    Raises NotXForm when any off-pattern entry exceeds the X budget.
    """
    leak = x_leakage(rho)
    if leak > X_FORM_TOL:
        raise NotXForm(f"off-pattern magnitude {leak:.3e} exceeds {X_FORM_TOL:.3e}")
    c = x_components(rho)
    c1 = abs(c.rho23) - math.sqrt(max(c.rho11, 0.0) * max(c.rho44, 0.0))
    c2 = abs(c.rho14) - math.sqrt(max(c.rho22, 0.0) * max(c.rho33, 0.0))
    return XConcurrence(2.0 * max(c1, c2, 0.0), c1, c2)


@dataclass(frozen=True)
class BasisRotation:
    """Local single-qubit rotation applied to both qubits.

    U = [[cos(phi), -exp(i varphi) sin(phi)],
         [exp(-i varphi) sin(phi), cos(phi)]]
    """

    phi: float
    varphi: float

    def __post_init__(self):
        for name in ("phi", "varphi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def rotation_unitary(rot: BasisRotation) -> np.ndarray:
    c, s = math.cos(rot.phi), math.sin(rot.phi)
    phase = np.exp(1j * rot.varphi)
    return np.array([[c, -phase * s], [np.conj(phase) * s, c]], dtype=complex)


def two_qubit_rotation(rot: BasisRotation) -> np.ndarray:
    u = rotation_unitary(rot)
    return kron(u, u)


def l1_coherence(rho, rotation: BasisRotation | None = None) -> float:
    """Sum of off-diagonal entry magnitudes, optionally in a rotated basis.

    For an X state in the unrotated basis this is 2|rho23| + 2|rho14|.
    """
    r = np.asarray(rho, dtype=complex)
    if rotation is not None:
        u = two_qubit_rotation(rotation)
        r = u @ r @ u.conj().T
    a = np.abs(r)
    np.fill_diagonal(a, 0.0)
    return float(a.sum())


def _density_eig(rho):
    r = np.asarray(rho, dtype=complex)
    defect = hermiticity_defect(r)
    if defect > 1e-10:
        raise NotHermitian(f"state hermiticity defect {defect:.3e} exceeds 1e-10")
    p, v = np.linalg.eigh(r)
    low = float(p.min())
    if low < -EIG_CLAMP:
        raise ValueError(f"density eigenvalue {low:.3e} below -{EIG_CLAMP:.0e}")
    p = np.where(p < 0.0, 0.0, p)
    return p, v


def qfi(rho, h) -> float:
    """Quantum Fisher information of `rho` for generator `h`.

    F = (1/2) sum over i != j of (p_i - p_j)^2 / (p_i + p_j) |<i|h|j>|^2,
    pairs with p_i + p_j <= PAIR_EPS dropped. Normalized so that a pure
    state gives the variance of h; for h = sigma_r x I the value is at
    most 1.
    """
    hm = np.asarray(h, dtype=complex)
    defect = hermiticity_defect(hm)
    if defect > 1e-10:
        raise NotHermitian(f"generator hermiticity defect {defect:.3e} exceeds 1e-10")
    p, v = _density_eig(rho)
    h_eig = v.conj().T @ hm @ v
    return _qfi_from_elements(p, h_eig)


def _qfi_from_elements(p, h_eig) -> float:
    # (p_i - p_j)^2 / (p_i + p_j) weights on the off-diagonal pairs
    psum = p[:, None] + p[None, :]
    pdif = p[:, None] - p[None, :]
    mask = psum > PAIR_EPS
    np.fill_diagonal(mask, False)
    w = np.zeros_like(psum)
    w[mask] = pdif[mask] ** 2 / psum[mask]
    return float(0.5 * np.sum(w * np.abs(h_eig) ** 2))


_LOCAL_OBS = None


def _local_observables():
    # sigma_l x I for l = x, y, z, built once
    global _LOCAL_OBS
    if _LOCAL_OBS is None:
        _LOCAL_OBS = np.stack([kron(s, IDENTITY_2)
                               for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])
    return _LOCAL_OBS


def _m_matrix(p, v, include_diagonal: bool) -> np.ndarray:
    """The 3x3 direction matrix M_lk from the eigendecomposition (p, v).

    M_lk = sum over pairs of 2 p_i p_j / (p_i + p_j)
           <i|sigma_l x I|j><j|sigma_k x I|i>; the i = j terms carry weight
    p_i and are included only for the corrected measure.
    """
    a = np.einsum('mi,lmn,nj->lij', v.conj(), _local_observables(), v)
    psum = p[:, None] + p[None, :]
    w = np.zeros_like(psum)
    mask = psum > PAIR_EPS
    w[mask] = 2.0 * (p[:, None] * p[None, :])[mask] / psum[mask]
    if not include_diagonal:
        np.fill_diagonal(w, 0.0)
    m = np.einsum('ij,lij,kij->lk', w, a, a.conj())
    residue = float(np.max(np.abs(m.imag)))
    assert residue < 1e-10, f"M matrix anti-symmetric residue {residue:.3e}"
    return m.real


def lqfi(rho) -> float:
    """Local quantum Fisher information, Q = 1 - lambda_max(M).

    Full double sum (diagonal included), which makes Q equal the minimum of
    qfi(rho, sigma_r x I) over unit directions r. Q = 0 for product states
    and the maximally mixed state, Q = 1 for Bell states.
    """
    p, v = _density_eig(rho)
    m = _m_matrix(p, v, include_diagonal=True)
    return float(1.0 - np.linalg.eigvalsh(m)[-1])


def lqfi_paper_variant(rho) -> float:
    """LQFI with the i = j terms dropped from the double sum.

    Kept for comparison: on rank-deficient states this overestimates Q
    (a pure product state scores 1 instead of 0). Basis-dependent on
    degenerate spectra.
    """
    p, v = _density_eig(rho)
    m = _m_matrix(p, v, include_diagonal=False)
    return float(1.0 - np.linalg.eigvalsh(m)[-1])


def lqfi_bruteforce(rho, n_polar: int = 200, n_azimuth: int = 400) -> float:
    """Grid minimum of qfi(rho, sigma_r x I) over probe directions r.

    Independent cross-check for `lqfi`: evaluates the parent double sum
    directly at every direction of an (n_polar x n_azimuth) sphere grid and
    takes the minimum, never forming M. The grid minimum upper-bounds the
    true minimum by O(grid spacing squared).
    """
    if n_polar < 8 or n_azimuth < 8:
        raise ValueError("grid must be at least 8 x 8")
    p, v = _density_eig(rho)
    a = np.einsum('mi,lmn,nj->lij', v.conj(), _local_observables(), v)

    polar = np.linspace(0.0, math.pi, n_polar)
    azimuth = np.arange(n_azimuth) * (2.0 * math.pi / n_azimuth)
    st, ct = np.sin(polar), np.cos(polar)
    ca, sa = np.cos(azimuth), np.sin(azimuth)
    r = np.empty((n_polar * n_azimuth, 3))
    r[:, 0] = np.outer(st, ca).ravel()
    r[:, 1] = np.outer(st, sa).ravel()
    r[:, 2] = np.repeat(ct, n_azimuth)

    psum = p[:, None] + p[None, :]
    pdif = p[:, None] - p[None, :]
    mask = psum > PAIR_EPS
    np.fill_diagonal(mask, False)
    w = np.zeros_like(psum)
    w[mask] = pdif[mask] ** 2 / psum[mask]

    h_eig = np.einsum('gl,lij->gij', r, a)
    f = 0.5 * np.einsum('ij,gij->g', w, np.abs(h_eig) ** 2)
    return float(f.min())


@dataclass(frozen=True)
class MeasureSet:
    """All scalar measures evaluated on one state."""

    concurrence: float
    c1_branch: float
    c2_branch: float
    l1_coherence: float
    lqfi: float


def evaluate_measures(rho) -> MeasureSet:
    """Bundle the X-state measures for one state (used per CSV row)."""
    xc = concurrence_x(rho)
    return MeasureSet(
        concurrence=xc.concurrence,
        c1_branch=xc.c1_branch,
        c2_branch=xc.c2_branch,
        l1_coherence=l1_coherence(rho),
        lqfi=lqfi(rho),
    )
