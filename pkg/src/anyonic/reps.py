"""Explicit unitary representations for electric-charge probes.

A probe pair starts in the maximally entangled state over an m-dimensional
representation R and its dual; dragging the carrier around total flux g maps
the internal state by R(g) (x) 1. All fusion statistics the simulator needs
reduce to characters, which are cached here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup


class RepresentationError(ValueError):
    pass


@dataclass
class Representation:
    """Map from element index to a unitary matrix, verified at 1e-9."""

    name: str
    group: FiniteGroup
    matrices: list[np.ndarray]
    _chars: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.matrices) != len(self.group):
            raise RepresentationError("need one matrix per group element")
        self._chars = np.array([np.trace(m) for m in self.matrices])

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    def matrix(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def character(self, i: int) -> complex:
        return complex(self._chars[i])

    def vacuum_amplitude(self, i: int) -> complex:
        """<Phi0| (R(g) (x) 1) |Phi0> = chi(g)/m for the maximally entangled
        pair state."""
        return complex(self._chars[i]) / self.dim

    def verify(self, tol: float = 1e-9, spot_checks: int = 200, seed: int = 0) -> None:
        """Spot-check unitarity and the homomorphism property."""
        G = self.group
        rng = np.random.default_rng(seed)
        m = self.dim
        ident = self.matrices[G.identity_index]
        if not np.allclose(ident, np.eye(m), atol=tol):
            raise RepresentationError(f"{self.name}: identity does not map to 1")
        n = len(G)
        pairs = rng.integers(0, n, size=(min(spot_checks, n * n), 2))
        for i, j in pairs:
            lhs = self.matrices[int(i)] @ self.matrices[int(j)]
            rhs = self.matrices[G.mul(int(i), int(j))]
            if not np.allclose(lhs, rhs, atol=tol):
                raise RepresentationError(f"{self.name}: R(g)R(h) != R(gh)")
        for i in rng.integers(0, n, size=min(spot_checks, n)):
            u = self.matrices[int(i)]
            if not np.allclose(u.conj().T @ u, np.eye(m), atol=tol):
                raise RepresentationError(f"{self.name}: non-unitary matrix")


def trivial_rep(G: FiniteGroup) -> Representation:
    return Representation("trivial", G, [np.eye(1) for _ in range(len(G))])


def standard_rep(G: FiniteGroup) -> Representation:
    """(k-1)-dimensional complement of the all-ones vector in the permutation
    action. Irreducible for the natural A_k / S_k actions; faithful whenever
    the permutation action is. chi(g) = fixed_points(g) - 1."""
    k = G.degree
    if k < 2:
        raise RepresentationError("degree must be >= 2")
    basis = np.zeros((k, k - 1))
    for j in range(1, k):
        v = np.zeros(k)
        v[:j] = 1.0
        v[j] = -j
        basis[:, j - 1] = v / np.linalg.norm(v)
    mats = []
    for e in G.elements:
        P = np.zeros((k, k))
        for x, y in enumerate(e.images):
            P[y, x] = 1.0
        mats.append(basis.T @ P @ basis)
    return Representation(f"std({G.describe()})", G, mats)


def rep_by_name(G: FiniteGroup, name: str) -> Representation:
    if name in ("std", "standard"):
        return standard_rep(G)
    if name == "trivial":
        return trivial_rep(G)
    raise RepresentationError(f"unknown representation {name!r}")
