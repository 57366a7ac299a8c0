"""Free *-algebra of indexed measurement operators.

Elements are finite complex-linear combinations of ordered words of
generators.  The product concatenates words, the adjoint conjugates
coefficients and reverses words while sending each generator index to
its involution partner.  No commutation rule is applied here: every
relation between measurements lives in the states, not in the algebra.
"""

from __future__ import annotations

from typing import Hashable


class Index:
    """Measurement label paired with the label of its adjoint generator.

    Equality and hashing use the tag alone, so indices can key kernel
    matrices and coefficient maps.  ``ctag`` is the tag of the involution
    partner; omitting it makes the index self-conjugate.
    """

    __slots__ = ("tag", "ctag")

    def __init__(self, tag: Hashable, ctag: Hashable | None = None):
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "ctag", tag if ctag is None else ctag)

    def __setattr__(self, name, value):
        raise AttributeError("Index is immutable")

    def involve(self) -> "Index":
        """Return the involution partner; applying twice gives back self."""
        return Index(self.ctag, self.tag)

    @property
    def self_conjugate(self) -> bool:
        return self.tag == self.ctag

    def __eq__(self, other):
        if not isinstance(other, Index):
            return NotImplemented
        return self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        if self.self_conjugate:
            return f"Index({self.tag!r})"
        return f"Index({self.tag!r}, {self.ctag!r})"


def paired_indices(tag: Hashable, ctag: Hashable) -> tuple[Index, Index]:
    """Build a conjugate pair of indices (i, i^c) with a nontrivial involution."""
    return Index(tag, ctag), Index(ctag, tag)


# A word is an ordered tuple of generator indices; the empty tuple is the
# identity operator.
Word = tuple


def word(*indices: Index) -> Word:
    return tuple(indices)


def word_adjoint(w: Word) -> Word:
    """Adjoint of an ordered product: reverse the order, involve each index."""
    return tuple(i.involve() for i in reversed(w))


def word_label(w: Word, names: dict | None = None) -> str:
    """Human-readable product label, e.g. ``M1*M2``; the identity prints as ``1``."""
    if not w:
        return "1"
    if names is None:
        return "*".join(f"M{i.tag}" for i in w)
    return "*".join(names[i] for i in w)


class LinearCombination:
    """Finite complex-linear combination of hashable words.

    Subclasses provide the word product and word adjoint; addition, scalar
    action, products, and the adjoint are shared.  Coefficients of magnitude
    at most ``tol`` are pruned so canonical forms stay comparable.
    """

    tol = 1e-14

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in terms.items():
                c = complex(c)
                if abs(c) > self.tol:
                    clean[w] = c
        object.__setattr__(self, "terms", clean)

    # hooks -----------------------------------------------------------
    @staticmethod
    def _word_product(left, right):
        raise NotImplementedError

    @staticmethod
    def _word_adjoint(w):
        raise NotImplementedError

    # linear structure --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0j) + c
        return type(self)(out)

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return type(self)({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, type(self)):
            out = {}
            for wa, ca in self.terms.items():
                for wb, cb in other.terms.items():
                    w = self._word_product(wa, wb)
                    out[w] = out.get(w, 0j) + ca * cb
            return type(self)(out)
        if isinstance(other, (int, float, complex)):
            return type(self)({w: c * other for w, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def adjoint(self):
        """Complex anti-linear involution: conjugate coefficients, adjoint words."""
        return type(self)(
            {self._word_adjoint(w): c.conjugate() for w, c in self.terms.items()}
        )

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_coeff(self) -> float:
        """Largest coefficient magnitude; zero for the zero element."""
        if not self.terms:
            return 0.0
        return max(abs(c) for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self):
        return len(self.terms)


class AlgebraElement(LinearCombination):
    """Element of the free *-algebra generated by the measurement operators."""

    __slots__ = ()

    @staticmethod
    def _word_product(left: Word, right: Word) -> Word:
        return left + right

    @staticmethod
    def _word_adjoint(w: Word) -> Word:
        return word_adjoint(w)

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    @classmethod
    def identity(cls) -> "AlgebraElement":
        return cls({(): 1.0})

    @classmethod
    def from_word(cls, w: Word, coeff: complex = 1.0) -> "AlgebraElement":
        return cls({tuple(w): coeff})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"({c:g})*{word_label(w)}" for w, c in self.terms.items()]
        return " + ".join(parts)


def generator(index: Index) -> AlgebraElement:
    """The generator for one measurement index, as an algebra element."""
    return AlgebraElement({(index,): 1.0})
