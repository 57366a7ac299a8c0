"""Finite-truncation GNS machinery.

A state restricted to the span of all words up to a fixed degree gives a
Hermitian Gram matrix G_ab = rho(w_a^dagger w_b).  Positivity of the state
is positive semi-definiteness of every such Gram matrix.  Quotienting by
the Gram null space and letting generators act by left multiplication
(which raises the degree, so the maps are rectangular and free of
truncation error) yields a concrete representation whose vacuum
expectations reproduce the state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import AlgebraElement, Index, Word, word_adjoint
from .gaussian import State


@dataclass(frozen=True)
class MonomialBasis:
    """All words of length at most ``degree`` over an index list.

    Graded-lexicographic order with the identity word first; lexicographic
    position follows the order of ``indices``.
    """

    indices: tuple
    degree: int
    words: tuple

    def __len__(self):
        return len(self.words)

    def position(self, w: Word) -> int:
        return self.words.index(tuple(w))


def build_basis(indices, degree: int) -> MonomialBasis:
    if degree < 0:
        raise ValueError("degree must be non-negative")
    indices = tuple(i if isinstance(i, Index) else Index(i) for i in indices)
    tags = [i.tag for i in indices]
    if len(set(tags)) != len(tags):
        raise ValueError("basis indices must have distinct tags")
    words = []
    for length in range(degree + 1):
        words.extend(product(indices, repeat=length))
    return MonomialBasis(indices=indices, degree=degree, words=tuple(words))


@dataclass
class GramReport:
    """Gram matrix of a monomial basis under a state, with its spectrum."""

    gram: np.ndarray
    eigenvalues: np.ndarray
    null_dimension: int
    tolerance: float
    hermiticity_defect: float = field(default=0.0)

    @property
    def dimension(self) -> int:
        return self.gram.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0]) if self.eigenvalues.size else 0.0

    def is_positive(self, tol: float | None = None) -> bool:
        tol = self.tolerance if tol is None else tol
        return self.min_eigenvalue >= -tol

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "null_dimension": self.null_dimension,
            "tolerance": self.tolerance,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.as_dict(), **kwargs)


def _gram_matrix(basis: MonomialBasis, state: State) -> np.ndarray:
    n = len(basis)
    g = np.zeros((n, n), dtype=complex)
    for a, wa in enumerate(basis.words):
        left = word_adjoint(wa)
        for b, wb in enumerate(basis.words):
            g[a, b] = state.word_expect(left + wb)
    return g


def gram(basis: MonomialBasis, state: State, tolerance: float = 1e-10) -> GramReport:
    """Gram matrix G_ab = rho(w_a^dagger w_b) with eigenvalues and null count."""
    g = _gram_matrix(basis, state)
    defect = float(np.max(np.abs(g - g.conj().T))) if g.size else 0.0
    sym = 0.5 * (g + g.conj().T)
    eig = np.linalg.eigvalsh(sym) if g.size else np.zeros(0)
    null = int(np.sum(np.abs(eig) <= tolerance))
    return GramReport(
        gram=g,
        eigenvalues=eig,
        null_dimension=null,
        tolerance=tolerance,
        hermiticity_defect=defect,
    )


class Representation:
    """Left multiplication on the null-space quotients of the Gram matrices.

    For each degree j <= d the span of words of length <= j is quotiented
    by its Gram null space; generators act as rectangular degree-raising
    matrices between consecutive quotients.  ``maps`` holds the top-level
    (degree d to degree d+1) map per generator index; ``cyclic_vector``
    holds the quotient coordinates of the identity word at degree d.
    """

    def __init__(self, basis, maps, cyclic_vector, level_maps, isometries, bases):
        self.basis = basis
        self.maps = maps
        self.cyclic_vector = cyclic_vector
        self._level_maps = level_maps
        self._isometries = isometries
        self._bases = bases

    @property
    def dimension(self) -> int:
        """Dimension of the degree-d quotient (basis size minus null space)."""
        return self._isometries[self.basis.degree].shape[0]

    def vacuum_vector(self, level: int) -> np.ndarray:
        """Quotient coordinates of the identity word at the given degree."""
        return self._isometries[level][:, 0].copy()

    def apply_word(self, w: Word) -> np.ndarray:
        """Apply the represented word to the vacuum, composing tower maps."""
        w = tuple(w)
        if len(w) > self.basis.degree + 1:
            raise ValueError(
                f"word length {len(w)} exceeds representation degree {self.basis.degree} + 1"
            )
        vec = self.vacuum_vector(0)
        level = 0
        for i in reversed(w):
            vec = self._level_maps[i][level] @ vec
            level += 1
        return vec

    def vacuum_expectation(self, w: Word) -> complex:
        """<vacuum, pi(w) vacuum>; reproduces the state on words up to degree d."""
        vec = self.apply_word(w)
        omega = self.vacuum_vector(len(w))
        return complex(np.vdot(omega, vec))


def represent(basis: MonomialBasis, state: State, tolerance: float = 1e-10) -> Representation:
    """GNS representation data for all degrees up to ``basis.degree`` + 1.

    Needs the state on words up to length 2*degree + 2.  Raises if any
    Gram matrix is indefinite beyond tolerance, signaling a non-state.
    """
    d = basis.degree
    bases = [build_basis(basis.indices, j) for j in range(d + 2)]
    isometries = []
    pseudo_inverses = []
    for level_basis in bases:
        g = _gram_matrix(level_basis, state)
        g = 0.5 * (g + g.conj().T)
        eig, vectors = np.linalg.eigh(g)
        top = float(eig[-1]) if eig.size else 0.0
        if eig.size and float(eig[0]) < -tolerance * max(1.0, top):
            raise ValueError(
                f"Gram matrix at degree {level_basis.degree} has eigenvalue "
                f"{float(eig[0]):.3e}; not a state"
            )
        cut = tolerance * max(top, 0.0)
        keep = eig > cut
        lam = eig[keep]
        u = vectors[:, keep]
        # coordinates h = T x turn the Gram pairing into the flat inner product
        t = (np.sqrt(lam)[:, None]) * u.conj().T
        t_plus = u * (1.0 / np.sqrt(lam))[None, :]
        isometries.append(t)
        pseudo_inverses.append(t_plus)

    level_maps = {}
    for i in basis.indices:
        per_level = []
        for j in range(d + 1):
            lower, upper = bases[j], bases[j + 1]
            row_of = {w: r for r, w in enumerate(upper.words)}
            lift = np.zeros((len(upper), len(lower)))
            for col, w in enumerate(lower.words):
                lift[row_of[(i,) + w], col] = 1.0
            per_level.append(isometries[j + 1] @ lift @ pseudo_inverses[j])
        level_maps[i] = per_level

    maps = {i: level_maps[i][d] for i in basis.indices}
    cyclic = isometries[d][:, 0].copy()
    return Representation(basis, maps, cyclic, level_maps, isometries, bases)


def positivity_probe(
    state: State,
    trials: int,
    max_len: int,
    seed: int = 0,
    indices=None,
) -> float:
    """Worst case of Re rho(A^dagger A) over randomized elements A.

    Genuine states stay above -1e-10; a clearly negative value certifies a
    non-state.  With ``trials`` = 0 there is no evidence and +inf returns.
    """
    if trials <= 0:
        return math.inf
    pool = tuple(indices if indices is not None else state.indices)
    if not pool:
        raise ValueError("no indices available to build probe elements")
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(trials):
        terms = {}
        for _ in range(int(rng.integers(1, 5))):
            length = int(rng.integers(0, max_len + 1))
            w = tuple(pool[int(k)] for k in rng.integers(0, len(pool), size=length))
            coeff = complex(rng.standard_normal(), rng.standard_normal())
            terms[w] = terms.get(w, 0j) + coeff
        element = AlgebraElement(terms)
        value = state.expect(element.adjoint() * element).real
        worst = min(worst, value)
    return worst
