"""Group data attached to a color Lie algebra.

A pair couples the algebra with a group acting on it: the identity component
acts through exponentials of inner derivations and needs no explicit storage,
while disconnected parts are carried as a finite list of extra generators,
each one a degree-preserving bracket automorphism of the algebra.  Group
elements optionally also carry a unitary action on a representation space,
bound later by the representation layer.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .colorlie import ColorLieAlgebra
from .errors import AxiomError, RankMismatchError
from .grading import is_even_like
from .report import Report

_PAIR_TOL = 1e-9


class GroupElement:
    """One group sample: its action on the algebra and, optionally, a space.

    ``ad`` is the matrix of the action on the algebra basis (columns are
    images of basis vectors).  ``pi`` is the matrix on a representation
    space, present only once a representation has bound it.
    """

    __slots__ = ("label", "ad", "pi")

    def __init__(self, label: str, ad, pi=None):
        self.label = str(label)
        self.ad = np.asarray(ad, dtype=float)
        if self.ad.ndim != 2 or self.ad.shape[0] != self.ad.shape[1]:
            raise ValueError("ad matrix must be square")
        self.pi = None if pi is None else np.asarray(pi, dtype=complex)

    @classmethod
    def identity(cls, dim: int, pi_dim: int | None = None) -> "GroupElement":
        pi = None if pi_dim is None else np.eye(pi_dim, dtype=complex)
        return cls("1", np.eye(dim), pi)

    def compose(self, other: "GroupElement") -> "GroupElement":
        if self.ad.shape != other.ad.shape:
            raise ValueError("group elements act on different algebras")
        # an unbound identity is neutral; without this, composing it with a
        # bound element would silently strip the bound action
        pi = None
        if self.pi is not None and other.pi is not None:
            pi = self.pi @ other.pi
        elif self.pi is None and self.is_identity():
            pi = other.pi
        elif other.pi is None and other.is_identity():
            pi = self.pi
        return GroupElement(f"({self.label} {other.label})", self.ad @ other.ad, pi)

    def inverse(self) -> "GroupElement":
        pi = None if self.pi is None else np.linalg.inv(self.pi)
        return GroupElement(f"{self.label}^-1", np.linalg.inv(self.ad), pi)

    def bind(self, pi) -> "GroupElement":
        """Attach a representation-space matrix, keeping the algebra action."""
        return GroupElement(self.label, self.ad, pi)

    def is_identity(self, tol: float = 1e-12) -> bool:
        if not np.allclose(self.ad, np.eye(self.ad.shape[0]), atol=tol):
            return False
        if self.pi is not None:
            return bool(np.allclose(self.pi, np.eye(self.pi.shape[0]), atol=tol))
        return True

    def __repr__(self) -> str:
        bound = "bound" if self.pi is not None else "unbound"
        return f"GroupElement({self.label!r}, dim={self.ad.shape[0]}, {bound})"


def ad_operator(l: ColorLieAlgebra, coeffs) -> np.ndarray:
    """Matrix of bracketing with sum_i coeffs[i] x_i, columns indexed by j."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (l.dim,):
        raise ValueError(f"coefficient vector must have length {l.dim}")
    return np.einsum("i,ijk->kj", coeffs, l.structure)


def inner_element(l: ColorLieAlgebra, coeffs, t: float = 1.0,
                  label: str | None = None) -> GroupElement:
    """Identity-component sample exp(t ad(x)) for x in the even-like part.

    The coefficient vector must be supported on even-like sectors, otherwise
    the exponential leaves the group acting on the algebra.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    for i in np.flatnonzero(coeffs):
        if not is_even_like(l.degrees[i]):
            raise ValueError(f"basis element {l.labels[i]} is odd-like; inner "
                             "group samples come from the even-like part")
    if label is None:
        label = f"exp({t:g}*ad)"
    return GroupElement(label, expm(t * ad_operator(l, coeffs)))


def check_ad_map(l: ColorLieAlgebra, ad, tol: float = _PAIR_TOL,
                 name: str = "ad") -> Report:
    """Is a matrix a degree-preserving bracket automorphism of the algebra?"""
    ad = np.asarray(ad, dtype=float)
    rep = Report(f"automorphism check: {name}", context={"dim": l.dim})
    if ad.shape != (l.dim, l.dim):
        raise RankMismatchError(
            f"ad matrix is {ad.shape}, algebra has dimension {l.dim}")

    off = l.deg_codes[:, None] != l.deg_codes[None, :]
    grade_res = float(np.max(np.abs(ad * off))) if off.any() else 0.0
    rep.add("grading preserved", grade_res <= tol, grade_res, tol)

    det = float(np.linalg.det(ad))
    rep.add("invertible", abs(det) > tol, detail=f"det={det:.3e}")

    c = l.structure
    # Ad[x_i, x_j] vs [Ad x_i, Ad x_j], all pairs at once
    lhs = np.einsum("ijm,km->ijk", c, ad)
    rhs = np.einsum("pi,qj,pqk->ijk", ad, ad, c)
    resid = lhs - rhs
    br_res = float(np.max(np.abs(resid))) if resid.size else 0.0
    detail = ""
    if br_res > tol:
        i, j, _ = np.unravel_index(np.argmax(np.abs(resid)), resid.shape)
        detail = f"worst pair ({l.labels[i]}, {l.labels[j]})"
    rep.add("bracket automorphism", br_res <= tol, br_res, tol, detail)
    return rep


class HCPair:
    """A color Lie algebra together with group generators acting on it."""

    __slots__ = ("algebra", "extra_generators")

    def __init__(self, algebra: ColorLieAlgebra, extra_generators=(),
                 validate: bool = True, tol: float = _PAIR_TOL):
        self.algebra = algebra
        self.extra_generators = list(extra_generators)
        for g in self.extra_generators:
            if g.ad.shape != (algebra.dim, algebra.dim):
                raise RankMismatchError(
                    f"generator {g.label!r} acts on dimension {g.ad.shape[0]}, "
                    f"algebra has {algebra.dim}")
        if validate:
            rep = check_pair(self, tol=tol)
            if not rep.passed:
                raise AxiomError("group generators fail to act by automorphisms:\n"
                                 + rep.to_text())

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def identity(self) -> GroupElement:
        return GroupElement.identity(self.algebra.dim)

    def __repr__(self) -> str:
        return (f"HCPair(dim={self.algebra.dim}, "
                f"extra_generators={len(self.extra_generators)})")


def check_pair(pair: HCPair, tol: float = _PAIR_TOL) -> Report:
    """Validate every stored generator of the pair."""
    rep = Report("pair check", context={"generators": len(pair.extra_generators)})
    for g in pair.extra_generators:
        sub = check_ad_map(pair.algebra, g.ad, tol=tol, name=g.label)
        rep.extend(sub, prefix=f"{g.label}: ")
    if not pair.extra_generators:
        rep.add("no extra generators", True, detail="identity component only")
    return rep
