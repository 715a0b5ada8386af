"""Shared random builders for the test suite.  Everything is seeded."""

from __future__ import annotations

import numpy as np

from colorrep.grading import Degree, all_degrees
from colorrep.spaces import GammaInnerSpace, GradedSpace, HomogeneousMap


def random_space(rng, rank, max_dim=3, min_sectors=1, ensure_zero=False):
    """A graded space with a random nonempty subset of sectors."""
    degs = all_degrees(rank)
    dims = {}
    for d in degs:
        if rng.random() < 0.6:
            dims[d] = int(rng.integers(1, max_dim + 1))
    if ensure_zero:
        dims.setdefault(Degree.zero(rank), int(rng.integers(1, max_dim + 1)))
    while len(dims) < min_sectors:
        d = degs[int(rng.integers(len(degs)))]
        dims[d] = int(rng.integers(1, max_dim + 1))
    return GradedSpace(rank, dims)


def random_gram(rng, d):
    """Hermitian positive definite with eigenvalues bounded away from zero."""
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a.conj().T @ a + 0.5 * np.eye(d)


def random_gamma_space(rng, space=None, rank=None, max_dim=3, identity=False):
    if space is None:
        space = random_space(rng, rank, max_dim=max_dim)
    if identity:
        return GammaInnerSpace.standard(space)
    return GammaInnerSpace(space, {deg: random_gram(rng, d) for deg, d in space.dims.items()})


def random_homog_map(rng, space, degree):
    """Random homogeneous endomorphism of the given degree."""
    blocks = {}
    for b in space.degrees:
        tb = degree * b
        if space.dim(tb) == 0:
            continue
        shape = (space.dim(tb), space.dim(b))
        blocks[b] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return HomogeneousMap(space, space, degree, blocks)


def random_vector(rng, space):
    return rng.standard_normal(space.total_dim) + 1j * rng.standard_normal(space.total_dim)


def random_homog_vector(rng, space, degree):
    v = np.zeros(space.total_dim, dtype=complex)
    s = space.slice_of(degree)
    n = s.stop - s.start
    v[s] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v
