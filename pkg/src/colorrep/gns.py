"""Reconstruction of cyclic representations from positive definite functions.

A function on the transformation monoid that is positive definite, supported
in degree zero, and of finite type determines a graded Hilbert space, a
distinguished cyclic vector, and unitary operators realizing the monoid by
left translation.  This module builds that data from finitely many samples,
certifies what it verified, and compares independent reconstructions.
"""

from __future__ import annotations

import numpy as np

from .colorlie import ColorLieAlgebra
from .enveloping import (DEFAULT_LEVEL_CAP, EnvElement, MonoidElement,
                         is_normal_word, s_mul, s_star)
from .errors import EquivalenceError, PositivityError, StabilizationError
from .grading import Degree
from .hcpair import GroupElement, HCPair
from .report import Report
from .reps import (UnitaryRep, check_unitary_rep, exp_group_element,
                   matrix_coefficient, monoid_operator)
from .spaces import GammaInnerSpace, GradedSpace, HomogeneousMap

_GNS_TOL = 1e-9
_EXP_TIMES = (0.5, 1.0)


class PDFunction:
    """Scalar function on the monoid, linear over the enveloping part.

    Instances remember where they came from.  Diagonal coefficients of a
    representation keep the representation and vector, which unlocks a much
    faster Gram assembly; table-backed functions only know their values on
    normal words with trivial group part.
    """

    __slots__ = ("algebra", "provenance", "rep", "vector", "table", "_eval")

    def __init__(self, algebra: ColorLieAlgebra, evaluator,
                 provenance: str = "custom"):
        self.algebra = algebra
        self._eval = evaluator
        self.provenance = provenance
        self.rep = None
        self.vector = None
        self.table = None

    def __call__(self, s: MonoidElement) -> complex:
        if s.env.algebra is not self.algebra:
            raise ValueError("monoid element belongs to a different algebra")
        return complex(self._eval(s))

    @classmethod
    def from_rep(cls, r: UnitaryRep, v) -> "PDFunction":
        """Diagonal matrix coefficient s -> (op(s) v, v)."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (r.space_dim,):
            raise ValueError(f"vector must have length {r.space_dim}")
        out = cls(r.algebra, lambda s: matrix_coefficient(r, v, v, s),
                  provenance="diagonal coefficient")
        out.rep = r
        out.vector = v
        return out

    @classmethod
    def from_table(cls, l: ColorLieAlgebra, table) -> "PDFunction":
        """Function given by values on normal words.

        Table keys are index tuples in rewriting-stable form.  Only elements
        with trivial group part can be evaluated; missing words count as zero.
        """
        clean: dict[tuple, complex] = {}
        for word, val in table.items():
            word = tuple(int(i) for i in word)
            if not is_normal_word(l, word):
                raise ValueError(f"table key {word} is not a normal word")
            clean[word] = complex(val)

        def ev(s: MonoidElement) -> complex:
            if not s.group.is_identity():
                raise ValueError(
                    f"table-backed function cannot evaluate group element "
                    f"{s.group.label!r}; only the identity component is tabulated")
            return sum((c * clean.get(w, 0.0) for w, c in s.env.terms.items()),
                       start=0.0 + 0.0j)

        out = cls(l, ev, provenance="table")
        out.table = clean
        return out

    def __repr__(self) -> str:
        return f"PDFunction({self.provenance}, dim={self.algebra.dim})"


class SampleSet:
    """Finite probe of the monoid: group samples times basis monomials."""

    __slots__ = ("elements", "level", "group_count")

    def __init__(self, elements, level: int, group_count: int):
        self.elements = list(elements)
        self.level = int(level)
        self.group_count = int(group_count)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return (f"SampleSet({len(self.elements)} elements, "
                f"level={self.level}, groups={self.group_count})")


def normal_words(l: ColorLieAlgebra, max_level: int) -> list[tuple]:
    """All rewriting-stable index words up to the length bound, shortest first."""
    words: list[tuple] = [()]
    frontier: list[tuple] = [()]
    for _ in range(max_level):
        grown = []
        for w in frontier:
            start = w[-1] if w else 0
            for i in range(start, l.dim):
                if w and i == w[-1] and l.beta_table[i, i] == -1:
                    continue  # squares of these letters rewrite away
                grown.append(w + (i,))
        words.extend(grown)
        frontier = grown
    return words


def default_group_samples(r, ts=_EXP_TIMES) -> list[GroupElement]:
    """Identity, the bound extra generators, and exp samples of the zero sector."""
    l = r.algebra
    out = [GroupElement.identity(l.dim, r.space_dim)]
    out.extend(g for g in r.pair.extra_generators if g.pi is not None)
    zero = Degree.zero(l.rank)
    for i in l.sector(zero):
        coeffs = np.zeros(l.dim)
        coeffs[i] = 1.0
        for t in ts:
            out.append(exp_group_element(r, coeffs, t=t,
                                         label=f"exp({t:g}*{l.labels[i]})"))
    return out


def build_sample_set(l: ColorLieAlgebra, group_samples, level: int) -> SampleSet:
    """Pair every group sample with every monomial up to the level.

    The identity monoid element always sits at index zero.
    """
    groups = [g for g in group_samples if not g.is_identity()]
    # bind the identity whenever the others are bound, so that star and
    # product stay inside the bound part of the monoid
    pi_dim = next((g.pi.shape[0] for g in groups if g.pi is not None), None)
    groups.insert(0, GroupElement.identity(l.dim, pi_dim))
    elements = []
    for g in groups:
        for w in normal_words(l, level):
            elements.append(MonoidElement(g, EnvElement(l, {w: 1.0})))
    return SampleSet(elements, level, len(groups))


def _monoid_pair(a: MonoidElement, b: MonoidElement) -> MonoidElement:
    # a* b, with the rewriting cap sized to the words actually present
    cap = max(1, a.level + b.level)
    return s_mul(s_star(a), b, level_cap=cap)


def _sample_columns(r: UnitaryRep, v: np.ndarray, samples) -> np.ndarray:
    return np.column_stack([monoid_operator(r, s) @ v for s in samples])


def sample_gram(psi: PDFunction, samples, rng=None,
                spot_checks: int = 4) -> tuple[np.ndarray, float]:
    """Gram matrix M[i, j] = psi(s_i* s_j) over the samples.

    Representation-backed functions evaluate through the operators; a few
    entries are then recomputed through the monoid product as an independent
    route, and the worst disagreement is returned alongside the matrix.
    Other functions pay for every entry through the monoid product, and the
    returned disagreement is zero.
    """
    elements = list(samples)
    n = len(elements)
    if psi.rep is not None:
        u = _sample_columns(psi.rep, psi.vector, elements)
        g = psi.rep.inner.gram_dense()
        m = u.conj().T @ g @ u
        rng = np.random.default_rng(0) if rng is None else rng
        worst = 0.0
        for _ in range(min(spot_checks, n * n)):
            i = int(rng.integers(n))
            j = int(rng.integers(n))
            direct = psi(_monoid_pair(elements[i], elements[j]))
            worst = max(worst, abs(direct - m[i, j]))
        return m, worst
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            m[i, j] = psi(_monoid_pair(elements[i], elements[j]))
    return m, 0.0


def check_positive_definite(psi: PDFunction, samples,
                            tol: float = _GNS_TOL) -> Report:
    """Support condition and Gram positivity over a finite sample set.

    The support condition, the Hermitian symmetry of the Gram matrix, and the
    eigenvalue floor are all certified on the given samples only; the detail
    strings say so.
    """
    elements = list(samples)
    if not elements:
        raise ValueError("sample set is empty")
    rep = Report("positive definiteness",
                 context={"samples": len(elements), "tol": tol})

    worst = 0.0
    at = ""
    for s in elements:
        d = s.degree
        if d is None or d.is_zero:
            continue
        val = abs(psi(s))
        if val > worst:
            worst, at = val, f"degree {d}"
    rep.add("support condition", worst <= tol, worst, tol,
            "verified on sample set" + (f"; worst at {at}" if at else ""))

    m, spot = sample_gram(psi, elements)
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    if psi.rep is not None:
        spot_tol = max(tol, 1e-8)
        rep.add("assembly route agreement", spot <= spot_tol, spot, spot_tol,
                "operator route against monoid-product route, sampled entries")

    herm = float(np.linalg.norm(m - m.conj().T, 2))
    rep.add("gram hermitian", herm <= tol * scale, herm, tol * scale,
            "verified on sample set")

    eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    floor = tol * scale
    low = float(eigs.min()) if eigs.size else 0.0
    rep.add("gram positive semidefinite", low >= -floor,
            max(0.0, -low), floor, "verified on sample set")
    rep.context["min_eigenvalue"] = low
    rep.context["gram_norm"] = scale
    return rep


class GNSResult:
    """Outcome of a reconstruction, with the evidence kept alongside."""

    __slots__ = ("rep", "cyclic", "gram_spectrum", "level_used", "report",
                 "sample_count")

    def __init__(self, rep: UnitaryRep, cyclic: np.ndarray, gram_spectrum,
                 level_used: int, report: Report, sample_count: int):
        self.rep = rep
        self.cyclic = cyclic
        self.gram_spectrum = gram_spectrum
        self.level_used = level_used
        self.report = report
        self.sample_count = sample_count

    def __repr__(self) -> str:
        return (f"GNSResult(dim={self.rep.space_dim}, "
                f"level_used={self.level_used}, samples={self.sample_count})")


def _translate_column(psi: PDFunction, m_left: MonoidElement,
                      s: MonoidElement, idx: int, elements, u_cols,
                      gram_dense, op_left=None):
    """Pairing data for the left translate m_left * s.

    Returns (w, n2): w[t] = psi(t* (m_left s)) for every sample t, and the
    squared length of the translate.  Rep-backed functions push the translate
    through the operators; others multiply in the monoid.
    """
    if psi.rep is not None:
        if op_left is None:
            op_left = monoid_operator(psi.rep, m_left)
        vec = op_left @ u_cols[:, idx]
        w = u_cols.conj().T @ (gram_dense @ vec)
        n2 = float(np.real(vec.conj() @ gram_dense @ vec))
        return w, n2
    ms = s_mul(m_left, s, level_cap=max(1, m_left.level + s.level))
    w = np.array([psi(_monoid_pair(t, ms)) for t in elements])
    n2 = float(np.real(psi(_monoid_pair(ms, ms))))
    return w, n2


def gns_construct(psi: PDFunction, group_samples=None,
                  level_cap: int = DEFAULT_LEVEL_CAP,
                  tol: float = _GNS_TOL) -> GNSResult:
    """Build the cyclic representation generated by a positive definite function.

    Sample sets grow level by level until the Gram rank stops moving; the
    quotient by the kernel is taken sector by sector, and left translation by
    each generator and group sample is expressed on the retained basis.  The
    reconstruction is validated before it is returned.

    Raises StabilizationError when the rank is still growing at the cap, when
    a translate escapes the span the rank test certified, or when the
    assembled operators fail validation.  Positivity failures on the sample
    set raise PositivityError.  A function that vanishes on every sample has
    nothing to reconstruct and raises ValueError.
    """
    l = psi.algebra
    if group_samples is None:
        if psi.rep is not None:
            group_samples = default_group_samples(psi.rep)
        else:
            group_samples = [GroupElement.identity(l.dim)]

    # grow until the retained rank repeats
    prev_rank = None
    history = {}
    chosen = None
    for level in range(level_cap + 1):
        ss = build_sample_set(l, group_samples, level)
        m, spot = sample_gram(psi, ss.elements)
        scale = max(1.0, float(np.linalg.norm(m, 2)))
        eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        rank = int(np.sum(eigs > tol * scale))
        history[level] = (ss, m, spot)
        if prev_rank is not None and rank == prev_rank:
            chosen = level - 1
            break
        prev_rank = rank
    if chosen is None:
        raise StabilizationError(
            f"gram rank still growing at level {level_cap} "
            f"(rank {prev_rank}); the function is not of finite type "
            "within the configured cap")

    samples, m, spot = history[chosen]
    elements = samples.elements
    n = len(elements)
    if not elements[0].is_identity():
        raise ValueError("sample set does not start with the identity")

    report = Report("gns reconstruction",
                    context={"level_used": chosen, "samples": n, "tol": tol})

    # certify positivity on the level that witnessed the rank repeat, not
    # just on the retained samples; it sees strictly more of the function
    pd = check_positive_definite(psi, history[chosen + 1][0].elements, tol=tol)
    report.extend(pd, prefix="pd: ")
    if not pd.passed:
        raise PositivityError(
            "the function fails positive definiteness on the sample set")

    norm_scale = max(1.0, float(np.linalg.norm(m, 2)))
    degs = [s.degree for s in elements]

    # classes of different degrees must be orthogonal already at gram level
    cross = 0.0
    for i in range(n):
        for j in range(n):
            if degs[i] != degs[j]:
                cross = max(cross, abs(m[i, j]))
    report.add("gram respects the grading", cross <= tol * norm_scale,
               cross, tol * norm_scale, "verified on sample set")
    if cross > tol * norm_scale:
        raise PositivityError(
            "sample classes of distinct degrees fail to be orthogonal "
            f"(leakage {cross:.3e})")

    # sector-by-sector spectral quotient
    by_degree: dict[Degree, list[int]] = {}
    for i, d in enumerate(degs):
        by_degree.setdefault(d, []).append(i)
    spectrum = {}
    space_dims: dict[Degree, int] = {}
    basis_cols = []
    for d in sorted(by_degree):
        idx = np.array(by_degree[d])
        md = m[np.ix_(idx, idx)]
        lam, vecs = np.linalg.eigh((md + md.conj().T) / 2.0)
        keep = lam > tol * norm_scale
        spectrum[str(d)] = {
            "retained": [float(x) for x in lam[keep]],
            "discarded": [float(x) for x in lam[~keep]],
        }
        k = int(np.sum(keep))
        if k == 0:
            continue
        space_dims[d] = k
        for j in reversed(range(len(lam))):
            if not keep[j]:
                continue
            c = np.zeros(n, dtype=complex)
            c[idx] = vecs[:, j] / np.sqrt(lam[j])
            basis_cols.append(c)
    if not space_dims:
        raise ValueError(
            "the function vanishes on the sample set; nothing to reconstruct")

    space = GradedSpace(l.rank, space_dims)
    c_mat = np.column_stack(basis_cols)       # samples x dim
    p_mat = c_mat.conj().T                    # coordinates = p_mat @ pairings
    total = space.total_dim

    ortho = float(np.linalg.norm(p_mat @ m @ c_mat - np.eye(total), 2))
    report.add("quotient basis orthonormal", ortho <= 1e-8, ortho, 1e-8)

    u_cols = None
    gram_dense = None
    if psi.rep is not None:
        u_cols = _sample_columns(psi.rep, psi.vector, elements)
        gram_dense = psi.rep.inner.gram_dense()

    # one escape budget for everything: discarded spectral mass bounds what an
    # honest translate can lose, so the threshold scales with the sample count
    escape_tol = n * max(tol, 1e-8) * norm_scale
    worst_escape = 0.0

    def translated_matrix(m_left: MonoidElement, what: str) -> np.ndarray:
        nonlocal worst_escape
        op_left = None
        if psi.rep is not None:
            op_left = monoid_operator(psi.rep, m_left)
        kappa = np.zeros((total, n), dtype=complex)
        for s_idx, s in enumerate(elements):
            w, n2 = _translate_column(psi, m_left, s, s_idx, elements,
                                      u_cols, gram_dense, op_left)
            kappa[:, s_idx] = p_mat @ w
            stray = n2 - float(np.sum(np.abs(kappa[:, s_idx]) ** 2))
            worst_escape = max(worst_escape, stray)
            if stray > escape_tol:
                raise StabilizationError(
                    f"left translation by {what} leaves the certified span "
                    f"(escape {stray:.3e} on sample {s_idx})")
        return kappa @ c_mat

    block_tol = max(tol * 100, 1e-8)

    def to_block(degree: Degree, dense: np.ndarray, what: str) -> HomogeneousMap:
        try:
            return HomogeneousMap.from_dense(space, space, degree, dense,
                                             rtol=block_tol)
        except ValueError as e:
            raise StabilizationError(
                f"{what} leaks across the grading: {e}") from None

    rho = []
    for i in range(l.dim):
        gen = MonoidElement.from_env(EnvElement(l, {(i,): 1.0}))
        dense = translated_matrix(gen, f"rho({l.labels[i]})")
        rho.append(to_block(l.degrees[i], dense, f"rho({l.labels[i]})"))

    new_gens = []
    for g in group_samples:
        if g.is_identity():
            continue
        dense = translated_matrix(MonoidElement.from_group(l, g),
                                  f"pi({g.label})")
        new_gens.append(GroupElement(g.label, g.ad, dense))

    report.add("translates stay in the span", worst_escape <= escape_tol,
               max(0.0, worst_escape), escape_tol)

    # cyclic class of the identity sample, cleaned of cross-sector dust
    v0 = p_mat @ m[:, 0]
    zero = Degree.zero(l.rank)
    v0_clean = np.zeros_like(v0)
    sl = space.slice_of(zero)
    v0_clean[sl] = v0[sl]
    dust = float(np.linalg.norm(v0 - v0_clean))
    dust_tol = block_tol * max(1.0, float(np.linalg.norm(v0)))
    report.add("cyclic class homogeneous", dust <= dust_tol, dust, dust_tol)
    if dust > dust_tol:
        raise StabilizationError(
            f"the identity class is not of degree zero (stray mass {dust:.3e})")

    inner = GammaInnerSpace.standard(space)
    rep = UnitaryRep(HCPair(l, new_gens, validate=False), inner, rho)

    final = check_unitary_rep(rep, tol=block_tol)
    report.extend(final, prefix="rep: ")
    if not final.passed:
        raise StabilizationError(
            "the reconstructed operators fail the representation axioms; "
            "the sampled function is not consistent")

    # reproducing identity, on a handful of samples: pairing a basis class
    # against the kernel class at s must reproduce evaluation at s
    rng = np.random.default_rng(11)
    picks = [0] + sorted(rng.choice(n, size=min(4, n), replace=False).tolist())
    worst_repr = 0.0
    for s_idx in set(picks):
        s = elements[s_idx]
        adj = s_star(s)
        if psi.rep is not None:
            vec = monoid_operator(psi.rep, adj) @ psi.vector
            w = u_cols.conj().T @ (gram_dense @ vec)
        else:
            w = np.array([psi(_monoid_pair(t, adj)) for t in elements])
        lhs = np.conj(p_mat @ w)
        rhs = np.zeros(total, dtype=complex)
        for t_idx, t in enumerate(elements):
            st = s_mul(s, t, level_cap=max(1, s.level + t.level))
            rhs += c_mat[t_idx, :] * psi(st)
        worst_repr = max(worst_repr, float(np.max(np.abs(lhs - rhs))))
    report.add("reproducing property", worst_repr <= 1e-8, worst_repr, 1e-8,
               "verified on sample set")

    cyc = check_cyclic(rep, v0_clean, tol=tol, level_cap=level_cap)
    report.add("identity class cyclic", cyc.passed,
               detail=str(cyc.context.get("rank")))
    if not cyc.passed:
        raise StabilizationError(
            "the identity class fails to be cyclic for the reconstruction")
    if not report.passed:
        raise StabilizationError("reconstruction consistency checks failed")

    return GNSResult(rep, v0_clean, spectrum, chosen, report, n)


def check_cyclic(r: UnitaryRep, v, tol: float = _GNS_TOL,
                 level_cap: int = DEFAULT_LEVEL_CAP) -> Report:
    """Whether translates of the vector span the whole space."""
    l = r.algebra
    v = np.asarray(v, dtype=complex)
    if v.shape != (r.space_dim,):
        raise ValueError(f"vector must have length {r.space_dim}")
    total = r.space_dim
    rep = Report("cyclicity", context={"dimension": total})
    groups = default_group_samples(r)
    rank = 0
    prev_rank = None
    level = 0
    for level in range(level_cap + 1):
        cols = []
        for g in groups:
            pig = None if g.pi is None else np.asarray(g.pi, dtype=complex)
            for w in normal_words(l, level):
                u = v
                for i in reversed(w):
                    u = r.rho_matrix(i) @ u
                cols.append(u if pig is None else pig @ u)
        sv = np.linalg.svd(np.column_stack(cols), compute_uv=False)
        top = float(sv[0]) if sv.size else 0.0
        rank = int(np.sum(sv > tol * max(1.0, top)))
        if rank == total or rank == prev_rank:
            break
        prev_rank = rank
    rep.add("translates span the space", rank == total,
            detail=f"rank {rank} of {total} at level {level}")
    rep.context["rank"] = rank
    rep.context["level"] = level
    return rep


def _paired_group_samples(r1: UnitaryRep, r2: UnitaryRep, ts=_EXP_TIMES):
    """Group samples described abstractly, bound in both representations."""
    l = r1.algebra
    pairs = [(GroupElement.identity(l.dim, r1.space_dim),
              GroupElement.identity(l.dim, r2.space_dim))]
    by_label = {g.label: g for g in r2.pair.extra_generators
                if g.pi is not None}
    for g in r1.pair.extra_generators:
        if g.pi is not None and g.label in by_label:
            pairs.append((g, by_label[g.label]))
    zero = Degree.zero(l.rank)
    for i in l.sector(zero):
        coeffs = np.zeros(l.dim)
        coeffs[i] = 1.0
        for t in ts:
            pairs.append((exp_group_element(r1, coeffs, t=t),
                          exp_group_element(r2, coeffs, t=t)))
    return pairs


def _orbit_columns(r: UnitaryRep, v: np.ndarray, groups, l, level: int):
    cols = []
    for g in groups:
        pig = np.asarray(g.pi, dtype=complex)
        for w in normal_words(l, level):
            u = v
            for i in reversed(w):
                u = r.rho_matrix(i) @ u
            cols.append(pig @ u)
    return np.column_stack(cols)


def _numeric_rank(mat: np.ndarray, tol: float) -> int:
    sv = np.linalg.svd(mat, compute_uv=False)
    if not sv.size:
        return 0
    return int(np.sum(sv > tol * max(1.0, float(sv[0]))))


def unitary_equivalence(r1: UnitaryRep, v1, r2: UnitaryRep, v2,
                        tol: float = 1e-8,
                        level_cap: int = DEFAULT_LEVEL_CAP) -> np.ndarray:
    """Unitary intertwiner matching translates of v1 to translates of v2.

    Both vectors must be cyclic and the matrix coefficients must agree on a
    shared abstract sample set; otherwise no such map exists and
    EquivalenceError reports which way it failed.  Returns the matrix of the
    intertwiner, columns indexed by the first space.
    """
    if r1.algebra is not r2.algebra:
        raise EquivalenceError("representations live over different algebras")
    l = r1.algebra
    v1 = np.asarray(v1, dtype=complex)
    v2 = np.asarray(v2, dtype=complex)

    if not check_cyclic(r1, v1, level_cap=level_cap).passed:
        raise EquivalenceError("the first vector is not cyclic")
    if not check_cyclic(r2, v2, level_cap=level_cap).passed:
        raise EquivalenceError("the second vector is not cyclic")

    pairs = _paired_group_samples(r1, r2)
    g1s = [p[0] for p in pairs]
    g2s = [p[1] for p in pairs]
    u1 = u2 = None
    for level in range(level_cap + 1):
        u1 = _orbit_columns(r1, v1, g1s, l, level)
        u2 = _orbit_columns(r2, v2, g2s, l, level)
        if (_numeric_rank(u1, tol) == r1.space_dim
                and _numeric_rank(u2, tol) == r2.space_dim):
            break
    else:
        raise EquivalenceError(
            "sampled translates never span both spaces")

    g1d = r1.inner.gram_dense()
    g2d = r2.inner.gram_dense()
    gram1 = u1.conj().T @ g1d @ u1
    gram2 = u2.conj().T @ g2d @ u2
    gap = float(np.linalg.norm(gram1 - gram2, 2))
    scale = max(1.0, float(np.linalg.norm(gram1, 2)))
    if gap > tol * scale:
        raise EquivalenceError(
            f"matrix coefficients disagree on the sample set (gap {gap:.3e}); "
            "the representations are not equivalent through these vectors")

    t_mat = u2 @ np.linalg.pinv(u1, rcond=1e-12)

    def demand(name: str, resid: float, bound: float) -> None:
        if resid > bound:
            raise EquivalenceError(
                f"candidate intertwiner fails {name} (residual {resid:.3e})")

    demand("well-definedness",
           float(np.linalg.norm(t_mat @ u1 - u2, 2)),
           tol * max(1.0, float(np.linalg.norm(u2, 2))))
    demand("isometry",
           float(np.linalg.norm(t_mat.conj().T @ g2d @ t_mat - g1d, 2)),
           tol * max(1.0, float(np.linalg.norm(g1d, 2))))

    on = 0.0
    for d in r1.inner.space.degrees:
        block = t_mat[r2.inner.space.slice_of(d), r1.inner.space.slice_of(d)]
        on += float(np.sum(np.abs(block) ** 2))
    off = float(np.sqrt(max(0.0, np.sum(np.abs(t_mat) ** 2) - on)))
    demand("grading", off, tol * max(1.0, float(np.linalg.norm(t_mat))))

    for i in range(l.dim):
        demand(f"intertwining rho({l.labels[i]})",
               float(np.linalg.norm(t_mat @ r1.rho_matrix(i)
                                    - r2.rho_matrix(i) @ t_mat, 2)),
               tol * max(1.0, float(np.linalg.norm(r2.rho_matrix(i), 2))))
    for a, b in pairs[1:]:
        demand(f"intertwining pi({a.label})",
               float(np.linalg.norm(t_mat @ np.asarray(a.pi, dtype=complex)
                                    - np.asarray(b.pi, dtype=complex) @ t_mat,
                                    2)),
               tol * max(1.0, float(np.linalg.norm(b.pi, 2))))
    demand("the cyclic matching", float(np.linalg.norm(t_mat @ v1 - v2)),
           tol * max(1.0, float(np.linalg.norm(v2))))
    return t_mat


def gns_roundtrip(r: UnitaryRep, v0, level_cap: int = DEFAULT_LEVEL_CAP,
                  tol: float = _GNS_TOL) -> Report:
    """Full circle: coefficient function, reconstruction, equivalence.

    Starting from a representation with a cyclic degree-zero vector, takes
    the diagonal coefficient function, rebuilds a representation from it, and
    certifies the rebuilt one is unitarily equivalent to the original.
    """
    rep = Report("gns roundtrip", context={"dimension": r.space_dim})
    base = check_unitary_rep(r)
    rep.add("original representation valid", base.passed, base.max_residual())
    v0 = np.asarray(v0, dtype=complex)
    d = r.inner.space.homogeneous_degree(v0, rtol=1e-9)
    rep.add("vector homogeneous of degree zero",
            d is not None and d.is_zero, detail=f"degree {d}")
    cyc = check_cyclic(r, v0, tol=max(tol, 1e-9), level_cap=level_cap)
    rep.add("vector cyclic", cyc.passed,
            detail=f"rank {cyc.context.get('rank')} of {r.space_dim}")
    if not rep.passed:
        return rep

    psi = PDFunction.from_rep(r, v0)
    pd_samples = build_sample_set(r.algebra, default_group_samples(r),
                                  min(1, level_cap))
    pd = check_positive_definite(psi, pd_samples, tol=max(tol, 1e-9))
    rep.extend(pd, prefix="pd: ")
    if not pd.passed:
        return rep

    try:
        result = gns_construct(psi, level_cap=level_cap, tol=tol)
    except (PositivityError, StabilizationError, ValueError) as e:
        rep.add("reconstruction", False, detail=str(e))
        return rep
    rep.add("reconstruction", True,
            detail=f"dimension {result.rep.space_dim}, "
                   f"level {result.level_used}")
    rep.add("dimension matches", result.rep.space_dim == r.space_dim,
            detail=f"{result.rep.space_dim} vs {r.space_dim}")
    rep.context["level_used"] = result.level_used
    rep.context["gram_spectrum"] = result.gram_spectrum

    eq_tol = max(tol, 1e-6)
    try:
        t_mat = unitary_equivalence(r, v0, result.rep, result.cyclic,
                                    tol=eq_tol, level_cap=level_cap)
    except EquivalenceError as e:
        rep.add("unitary equivalence", False, detail=str(e))
        return rep
    worst = max(
        float(np.linalg.norm(t_mat @ r.rho_matrix(i)
                             - result.rep.rho_matrix(i) @ t_mat, 2))
        for i in range(r.algebra.dim)) if r.algebra.dim else 0.0
    rep.add("unitary equivalence", True, worst, eq_tol,
            "intertwiner recovered")
    return rep
