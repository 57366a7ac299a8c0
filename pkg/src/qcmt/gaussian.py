"""Gaussian states on the free measurement algebra.

A Gaussian state is fixed by a Hermitian positive semi-definite pairing
(i, j) on the index set together with the index involution.  Odd moments
vanish; an even moment is the sum over perfect matchings of the pairwise
contractions (i_m^c, i_n) with m < n, which is the mixed derivative at
zero of the exponential generating function

    exp( - sum_m lambda_m^2 (i_m^c, i_m)/2
         - sum_{m<n} lambda_m lambda_n (i_m^c, i_n) ).

``wick_expect`` enumerates matchings; ``moment_from_generating_series``
differentiates the generating function instead and is kept as a slow,
structurally independent cross-check of the same number.
"""

from __future__ import annotations

import cmath

import numpy as np

from .algebra import AlgebraElement, Index, Word

# Explicit matching enumeration grows as (N-1)!!; refuse beyond this.
MATCHING_CAP = 12


class GaussianKernel:
    """Hermitian positive semi-definite sesquilinear pairing on an index set.

    Entry (i, j) is the two-measurement value rho(M_i^dagger M_j); together
    with the involution i -> i^c it determines every Gaussian moment.

    Parameters
    ----------
    entries : dict
        Map from ``(Index, Index)`` pairs to complex pairing values.
        A missing ``(i, j)`` falls back to the conjugate of ``(j, i)``.
    indices : sequence of Index, optional
        Presentation order of the index set; defaults to first appearance
        in ``entries``.
    validate : bool
        Check Hermiticity and positive semi-definiteness of the matrix
        over the known index set.  Disable only to build deliberate
        non-states for positivity detection tests.
    tol : float
        Validation tolerance for the Hermiticity defect and for the most
        negative admissible eigenvalue.
    """

    def __init__(self, entries, indices=None, validate=True, tol=1e-10):
        self._pair = {}
        order = []
        seen = set()

        def note(ix):
            if ix.tag not in seen:
                seen.add(ix.tag)
                order.append(ix)

        if indices is not None:
            for ix in indices:
                note(ix)
        for (a, b), value in entries.items():
            self._pair[(a.tag, b.tag)] = complex(value)
            note(a)
            note(b)
        self._indices = tuple(order)
        self.tol = float(tol)
        if validate:
            self.validate()

    @classmethod
    def from_matrix(cls, indices, matrix, validate=True, tol=1e-10):
        """Build a kernel from an index list and the full pairing matrix.

        Plain tags are promoted to self-conjugate indices, so a real
        symmetric matrix over integer tags gives the trivial involution.
        """
        idx = [i if isinstance(i, Index) else Index(i) for i in indices]
        matrix = np.asarray(matrix, dtype=complex)
        try:
            matrix = matrix.reshape(len(idx), len(idx))
        except ValueError as exc:
            raise ValueError(
                f"matrix shape {matrix.shape} does not match {len(idx)} indices"
            ) from exc
        entries = {}
        for a, ia in enumerate(idx):
            for b, ib in enumerate(idx):
                entries[(ia, ib)] = matrix[a, b]
        return cls(entries, indices=idx, validate=validate, tol=tol)

    @property
    def indices(self) -> tuple:
        return self._indices

    def pairing(self, i: Index, j: Index) -> complex:
        """The pairing (i, j); Hermiticity fills entries stored transposed."""
        key = (i.tag, j.tag)
        if key in self._pair:
            return self._pair[key]
        swapped = (j.tag, i.tag)
        if swapped in self._pair:
            return self._pair[swapped].conjugate()
        raise KeyError(f"kernel has no entry for pair ({i!r}, {j!r})")

    def matrix(self, indices=None) -> np.ndarray:
        indices = self._indices if indices is None else list(indices)
        n = len(indices)
        out = np.zeros((n, n), dtype=complex)
        for a, ia in enumerate(indices):
            for b, ib in enumerate(indices):
                out[a, b] = self.pairing(ia, ib)
        return out

    def hermiticity_defect(self) -> float:
        m = self.matrix()
        if m.size == 0:
            return 0.0
        return float(np.max(np.abs(m - m.conj().T)))

    def eigenvalues(self) -> np.ndarray:
        m = self.matrix()
        if m.size == 0:
            return np.zeros(0)
        return np.linalg.eigvalsh(0.5 * (m + m.conj().T))

    def min_eigenvalue(self) -> float:
        eig = self.eigenvalues()
        return float(eig[0]) if eig.size else 0.0

    def validate(self):
        m = self.matrix()
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        defect = self.hermiticity_defect()
        if defect > self.tol * scale:
            raise ValueError(f"kernel is not Hermitian: defect {defect:.3e}")
        if m.size:
            lo = self.min_eigenvalue()
            if lo < -self.tol * scale:
                raise ValueError(f"kernel is not positive semi-definite: min eigenvalue {lo:.3e}")

    def as_dict(self) -> dict:
        """JSON-ready form; complex matrix entries become [re, im] pairs."""
        m = self.matrix()
        return {
            "indices": [str(i.tag) for i in self._indices],
            "matrix": [[[v.real, v.imag] for v in row] for row in m.tolist()],
        }

    def to_json(self, **kwargs) -> str:
        import json

        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.as_dict(), **kwargs)

    def __repr__(self):
        tags = [i.tag for i in self._indices]
        return f"GaussianKernel(indices={tags!r})"


def two_point(kernel: GaussianKernel, i: Index, j: Index) -> complex:
    """Two-measurement value rho(M_i M_j) = (i^c, j)."""
    return kernel.pairing(i.involve(), j)


def commutator_factor(kernel: GaussianKernel, i: Index, j: Index) -> complex:
    """Scalar c with rho(A [M_i, M_j] B) = c rho(A B); zero is the commutative case."""
    return kernel.pairing(i.involve(), j) - kernel.pairing(j.involve(), i)


def wick_expect(kernel: GaussianKernel, w: Word) -> complex:
    """Moment of an ordered word under the Gaussian state of ``kernel``.

    Sums the product of contractions (i_m^c, i_n), m < n, over all perfect
    matchings of the word positions.  Odd words vanish; words longer than
    ``MATCHING_CAP`` are refused.
    """
    n = len(w)
    if n > MATCHING_CAP:
        raise ValueError(f"word length {n} exceeds the matching cap {MATCHING_CAP}")
    if n == 0:
        return 1 + 0j
    if n % 2:
        return 0j
    # contraction table: left factor always carries the involution
    pair = kernel.pairing
    conj = [i.involve() for i in w]

    def matchings(positions):
        if not positions:
            yield 1 + 0j
            return
        first = positions[0]
        rest = positions[1:]
        for t, partner in enumerate(rest):
            factor = pair(conj[first], w[partner])
            if factor == 0:
                continue
            remaining = rest[:t] + rest[t + 1 :]
            for sub in matchings(remaining):
                yield factor * sub

    return sum(matchings(tuple(range(n))), 0j)


def generating_function(kernel: GaussianKernel, indices, lambdas) -> complex:
    """Gaussian expectation of the product of exponentials exp(i lambda_m M_{i_m}).

    Returns exp(-sum_m lambda_m^2 (i_m^c,i_m)/2 - sum_{m<n} lambda_m lambda_n (i_m^c,i_n)).
    """
    indices = list(indices)
    lambdas = list(lambdas)
    if len(indices) != len(lambdas):
        raise ValueError(
            f"{len(indices)} indices but {len(lambdas)} lambda parameters"
        )
    exponent = 0j
    conj = [i.involve() for i in indices]
    for m, i in enumerate(indices):
        exponent += lambdas[m] ** 2 * kernel.pairing(conj[m], i) / 2
    for m in range(len(indices)):
        for n in range(m + 1, len(indices)):
            exponent += lambdas[m] * lambdas[n] * kernel.pairing(conj[m], indices[n])
    return cmath.exp(-exponent)


def _series_multiply(left, right, n):
    """Product of truncated multivariate polynomials over exponent tuples.

    Any monomial with an exponent above one is dropped: it can never reach
    the multilinear target monomial lambda_1 ... lambda_n again.
    """
    out = {}
    for ea, ca in left.items():
        for eb, cb in right.items():
            exps = tuple(x + y for x, y in zip(ea, eb))
            if any(x > 1 for x in exps):
                continue
            out[exps] = out.get(exps, 0j) + ca * cb
    return out


def moment_from_generating_series(kernel: GaussianKernel, w: Word) -> complex:
    """Moment of a word by differentiating the generating function at zero.

    Expands exp(Q) as a truncated power series, with Q the quadratic
    exponent of ``generating_function`` in one lambda variable per word
    position, and reads off the coefficient of lambda_1 ... lambda_N,
    which equals the mixed partial at zero.  Dividing by i^N undoes the
    i lambda_m factors in the exponentials and yields rho(M_{i_1}...M_{i_N}).

    Structurally independent of the matching enumeration in
    ``wick_expect``; intended as its oracle.
    """
    n = len(w)
    if n == 0:
        return 1 + 0j
    conj = [i.involve() for i in w]
    zero = (0,) * n
    quad = {}
    for m in range(n):
        for t in range(m, n):
            if m == t:
                coeff = -kernel.pairing(conj[m], w[m]) / 2
                exps = tuple(2 if s == m else 0 for s in range(n))
            else:
                coeff = -kernel.pairing(conj[m], w[t])
                exps = tuple(1 if s in (m, t) else 0 for s in range(n))
            if any(x > 1 for x in exps):
                continue
            if coeff != 0:
                quad[exps] = quad.get(exps, 0j) + coeff
    series = {zero: 1 + 0j}
    power = {zero: 1 + 0j}
    factorial = 1.0
    for order in range(1, n + 1):
        power = _series_multiply(power, quad, n)
        if not power:
            break
        factorial *= order
        for exps, c in power.items():
            series[exps] = series.get(exps, 0j) + c / factorial
    target = (1,) * n
    return series.get(target, 0j) / (1j) ** n


class State:
    """Expectation functional: linear, normalized, positive, adjoint-compatible."""

    def word_expect(self, w: Word) -> complex:
        raise NotImplementedError

    @property
    def indices(self) -> tuple:
        raise NotImplementedError

    def expect(self, element) -> complex:
        """Linear extension of the word evaluator to algebra elements."""
        if isinstance(element, AlgebraElement):
            return sum(
                (c * self.word_expect(w) for w, c in element.terms.items()), 0j
            )
        return self.word_expect(tuple(element))


class GaussianState(State):
    """Mean-zero Gaussian state with all moments given by the Wick expansion."""

    def __init__(self, kernel: GaussianKernel):
        self.kernel = kernel

    @property
    def indices(self) -> tuple:
        return self.kernel.indices

    def word_expect(self, w: Word) -> complex:
        return wick_expect(self.kernel, w)

    def __repr__(self):
        return f"GaussianState({self.kernel!r})"
