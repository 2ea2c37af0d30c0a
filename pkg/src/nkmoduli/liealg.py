"""su(k) machinery: principal su(2) residue triples, the transvectant pairing
on binary forms, the antidiagonal invariant form J, the involution
sigma(A) = -J A^T J^{-1}, and membership in its fixed subalgebra.

Matrices are plain complex numpy arrays of shape (k, k).
"""
from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

__all__ = [
    "commutator",
    "anti_hermitian_part",
    "ResidueTriple",
    "principal_residues",
    "transvectant",
    "form_matrix_J",
    "sigma",
    "is_in_sigma_subalgebra",
    "fixed_subalgebra_dimension",
    "su_basis",
    "random_su",
    "random_sigma_fixed",
]


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anti_hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a - a.conj().T)


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclasses.dataclass(frozen=True)
class ResidueTriple:
    """Anti-Hermitian residue matrices generating the principal
    k-dimensional irreducible su(2) inside su(k)."""

    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    k: int

    def validate(self, tol: float = 1e-12) -> None:
        for r in (self.r1, self.r2, self.r3):
            if _max_abs(r + r.conj().T) > tol:
                raise ValueError("residue matrix is not anti-Hermitian")
            if abs(np.trace(r)) > tol:
                raise ValueError("residue matrix is not traceless")
            if _max_abs(r - sigma(r)) > tol:
                raise ValueError("residue matrix is not sigma-fixed")

    def commutator_normalized(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Rescaled triple (A1, A2, A3) = (r1/2, r2, r3) obeying the cyclic
        relations [A1, A2] = A3, [A2, A3] = A1, [A3, A1] = A2."""
        return 0.5 * self.r1, self.r2, self.r3


def principal_residues(k: int) -> ResidueTriple:
    """Residue triple of the principal embedding su(2) -> su(k).

    R1 = i diag(k-1, k-3, ..., 1-k); with M the subdiagonal matrix carrying
    sqrt(j(k-j)), R2 = (M - M^dag)/2 and R3 = -i (M + M^dag)/2, so that
    R2 + i R3 = M.
    """
    if k < 2:
        raise ValueError("charge k must be >= 2")
    r1 = 1j * np.diag(np.arange(k - 1, -k, -2).astype(np.complex128))
    m = np.zeros((k, k), dtype=np.complex128)
    for j in range(1, k):
        m[j, j - 1] = np.sqrt(j * (k - j))
    md = m.conj().T
    r2 = 0.5 * (m - md)
    r3 = -0.5j * (m + md)
    return ResidueTriple(r1=r1, r2=r2, r3=r3, k=k)


def transvectant(a: Sequence[complex], b: Sequence[complex]) -> complex:
    """Invariant bilinear pairing sum_i (-1)^i a[i] b[k-1-i] on coefficient
    vectors of binary forms of degree k-1 (length-k sequences).

    Skew-symmetric for even k, symmetric for odd k.
    """
    av = np.asarray(a, dtype=np.complex128).ravel()
    bv = np.asarray(b, dtype=np.complex128).ravel()
    if av.size != bv.size:
        raise ValueError(f"length mismatch: {av.size} vs {bv.size}")
    k = av.size
    br = bv[::-1]
    # Products via explicit real arithmetic and a palindromic pairing of the
    # sum, so that swapping the arguments yields the exact sign flip
    # (-1)^(k-1) in floating point, not merely up to rounding.
    re = av.real * br.real - av.imag * br.imag
    im = av.real * br.imag + av.imag * br.real
    signs = np.where(np.arange(k) % 2 == 0, 1.0, -1.0)
    terms = signs * (re + 1j * im)
    rev = terms[::-1]
    half = k // 2
    total = complex(np.sum(terms[:half] + rev[:half])) if half else 0j
    if k % 2 == 1:
        total += complex(terms[half])
    return total


def form_matrix_J(k: int) -> np.ndarray:
    """Antidiagonal matrix with J[i, k+1-i] = (-1)^(i-1) in 1-based indexing;
    satisfies J @ J = (-1)^(k-1) * I."""
    if k < 1:
        raise ValueError("k must be >= 1")
    j = np.zeros((k, k), dtype=np.complex128)
    for r in range(k):
        j[r, k - 1 - r] = 1.0 if r % 2 == 0 else -1.0
    return j


def sigma(a: np.ndarray) -> np.ndarray:
    """The involution A -> -J A^T J^{-1} whose fixed subalgebra in su(k) is
    symplectic for even k and orthogonal for odd k."""
    k = a.shape[0]
    j = form_matrix_J(k)
    j_inv = j if (k - 1) % 2 == 0 else -j  # J^2 = (-1)^(k-1) I
    return -j @ a.T @ j_inv


def is_in_sigma_subalgebra(a: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff a is anti-Hermitian, traceless and satisfies
    a @ J + J @ a.T = 0 (equivalently sigma(a) = a) within tol."""
    if _max_abs(a + a.conj().T) > tol:
        return False
    if abs(np.trace(a)) > tol:
        return False
    j = form_matrix_J(a.shape[0])
    return _max_abs(a @ j + j @ a.T) <= tol


def su_basis(k: int) -> list[np.ndarray]:
    """Real basis of su(k): k-1 diagonal, then off-diagonal real and
    imaginary generators; k^2 - 1 matrices in total."""
    basis = []
    for a in range(k - 1):
        d = np.zeros((k, k), dtype=np.complex128)
        d[a, a] = 1j
        d[a + 1, a + 1] = -1j
        basis.append(d)
    for a in range(k):
        for b in range(a + 1, k):
            e = np.zeros((k, k), dtype=np.complex128)
            e[a, b] = 1.0
            e[b, a] = -1.0
            basis.append(e)
            f = np.zeros((k, k), dtype=np.complex128)
            f[a, b] = 1j
            f[b, a] = 1j
            basis.append(f)
    return basis


def fixed_subalgebra_dimension(k: int, rank_tol: float = 1e-8) -> int:
    """Real dimension of the sigma-fixed subalgebra of su(k), computed as the
    numerical kernel dimension of A -> A - sigma(A) on su(k)."""
    basis = su_basis(k)
    cols = []
    for b in basis:
        image = b - sigma(b)
        cols.append(np.concatenate([image.real.ravel(), image.imag.ravel()]))
    mat = np.stack(cols, axis=1)
    rank = np.linalg.matrix_rank(mat, tol=rank_tol)
    return len(basis) - int(rank)


def random_su(k: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random traceless anti-Hermitian matrix with entries of size ~scale."""
    x = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    a = anti_hermitian_part(x)
    a -= np.trace(a) / k * np.eye(k)
    return scale * a


def random_sigma_fixed(k: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of the sigma-fixed subalgebra of su(k)."""
    a = random_su(k, rng, scale)
    return 0.5 * (a + sigma(a))
