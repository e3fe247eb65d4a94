# coding: utf-8

"""
Arithmetic over the elementary abelian group C_p^r.

Elements are plain tuples of residues in ``[0, p-1]``; every operation
reduces eagerly so equality and hashing are tuple equality.
"""

import cmath
import itertools
from functools import lru_cache
from typing import Tuple, List, Iterator, Sequence as SequenceType

import numpy as np
import sympy

from .constants import Coords
from .errors import NotPrime, BadRank, DimensionMismatch, CoordOutOfRange, RankUnsupported, SingularBasis

import logging
logger = logging.getLogger(__name__)


Element = Coords
Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]


class GroupSpec:
    __slots__ = ("p", "r")

    def __init__(self, p: int, r: int):
        self.p = p
        self.r = r

    @property
    def order(self) -> int:
        return self.p ** self.r

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.p,) * self.r

    @property
    def zero(self) -> Element:
        return (0,) * self.r

    def elements(self) -> Iterator[Element]:
        return itertools.product(range(self.p), repeat=self.r)

    def nonzero_elements(self) -> Iterator[Element]:
        zero = self.zero
        return (g for g in self.elements() if g != zero)

    def index(self, g: Element) -> int:
        idx = 0
        for c in g:
            idx = idx * self.p + c
        return idx

    def element_at(self, index: int) -> Element:
        coords = []
        for _ in range(self.r):
            index, c = divmod(index, self.p)
            coords.append(c)
        return tuple(reversed(coords))

    def check(self, g: SequenceType[int]) -> Element:
        if len(g) != self.r:
            raise DimensionMismatch(f"expect {self.r} coordinates, got {len(g)}: {tuple(g)}")
        for c in g:
            if not 0 <= c < self.p:
                raise CoordOutOfRange(f"coordinate {c} not in [0, {self.p - 1}]")
        return tuple(int(c) for c in g)

    def dict(self) -> dict:
        return {"p": self.p, "r": self.r, "order": self.order}

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and (self.p, self.r) == (other.p, other.r)

    def __hash__(self):
        return hash((self.p, self.r))

    def __repr__(self):
        return f"<GroupSpec(p={self.p}, r={self.r}, order={self.order})>"


def make_group(p: int, r: int) -> GroupSpec:
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not a prime")
    if r < 1:
        raise BadRank(f"rank must be >= 1, got {r}")
    return GroupSpec(int(p), int(r))


def _operand(spec: GroupSpec, g) -> Element:
    if len(g) != spec.r:
        raise DimensionMismatch(f"expect {spec.r} coordinates, got {len(g)}")
    return tuple(int(c) % spec.p for c in g)


def add(spec: GroupSpec, g: Element, h: Element) -> Element:
    g, h = _operand(spec, g), _operand(spec, h)
    return tuple((a + b) % spec.p for a, b in zip(g, h))


def sub(spec: GroupSpec, g: Element, h: Element) -> Element:
    g, h = _operand(spec, g), _operand(spec, h)
    return tuple((a - b) % spec.p for a, b in zip(g, h))


def neg(spec: GroupSpec, g: Element) -> Element:
    return tuple((-c) % spec.p for c in _operand(spec, g))


def scalar_mul(spec: GroupSpec, n: int, g: Element) -> Element:
    return tuple((n * c) % spec.p for c in _operand(spec, g))


def element_sum(spec: GroupSpec, items) -> Element:
    total = [0] * spec.r
    for g in items:
        for i, c in enumerate(g):
            total[i] += c
    return tuple(c % spec.p for c in total)


def element_op(spec: GroupSpec, op: str, *args) -> Element:
    match op:
        case "add":
            return add(spec, *args)
        case "neg":
            return neg(spec, *args)
        case "scalar_mul":
            return scalar_mul(spec, *args)
        case _:
            raise ValueError(f"unknown element operation: {op}")


@lru_cache(maxsize=32)
def element_table(p: int, r: int) -> np.ndarray:
    """
    All elements of C_p^r as an ``(p^r, r)`` array in lexicographic (index) order.
    """
    grids = np.indices((p,) * r).reshape(r, -1).T
    grids.setflags(write=False)
    return grids


def shift_permutation(spec: GroupSpec, x: Element) -> np.ndarray:
    """
    Index array ``perm`` with ``perm[index(g)] = index(g - x)``, so that
    ``table[..., perm]`` is the table translated by ``x``.
    """
    elems = element_table(spec.p, spec.r)
    shifted = (elems - np.asarray(x, dtype=np.int64)) % spec.p
    return np.ravel_multi_index(tuple(shifted.T), spec.shape)


class Basis:
    """
    An ordered basis (e_1, ..., e_r) together with its inverse coordinate matrix mod p.
    """
    __slots__ = ("spec", "vectors", "inverse")

    def __init__(self, spec: GroupSpec, vectors: Tuple[Element, ...], inverse: Tuple[Tuple[int, ...], ...]):
        self.spec = spec
        self.vectors = vectors
        self.inverse = inverse

    @property
    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        r = self.spec.r
        return tuple(tuple(self.vectors[j][i] for j in range(r)) for i in range(r))

    def is_standard(self) -> bool:
        return self.vectors == standard_basis(self.spec).vectors

    def dict(self) -> dict:
        return {"vectors": [list(v) for v in self.vectors]}

    def __eq__(self, other):
        return isinstance(other, Basis) and self.spec == other.spec and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.spec, self.vectors))

    def __repr__(self):
        return f"<Basis({', '.join(map(str, self.vectors))})>"


def make_basis(spec: GroupSpec, vectors: SequenceType[Element]) -> Basis:
    if len(vectors) != spec.r:
        raise DimensionMismatch(f"basis needs {spec.r} vectors, got {len(vectors)}")
    vectors = tuple(spec.check(v) for v in vectors)
    r = spec.r
    mat = sympy.Matrix(r, r, lambda i, j: vectors[j][i])
    if mat.det() % spec.p == 0:
        raise SingularBasis(f"vectors {vectors} are linearly dependent mod {spec.p}")
    inv = mat.inv_mod(spec.p)
    inverse = tuple(tuple(int(inv[i, j]) % spec.p for j in range(r)) for i in range(r))
    return Basis(spec, vectors, inverse)


@lru_cache(maxsize=32)
def _standard_basis(p: int, r: int) -> Basis:
    spec = GroupSpec(p, r)
    vectors = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    return Basis(spec, vectors, vectors)


def standard_basis(spec: GroupSpec) -> Basis:
    return _standard_basis(spec.p, spec.r)


def change_basis(spec: GroupSpec, e1: Element, e2: Element) -> Basis:
    if spec.r != 2:
        raise RankUnsupported(f"change_basis needs rank 2, got {spec.r}")
    return make_basis(spec, (e1, e2))


def projections(basis: Basis, g: Element) -> Tuple[int, ...]:
    """
    Coefficients (c_1, ..., c_r) with ``g = sum c_i e_i``.
    """
    spec = basis.spec
    g = _operand(spec, g)
    return tuple(sum(row[j] * g[j] for j in range(spec.r)) % spec.p for row in basis.inverse)


def recombine(basis: Basis, coeffs: SequenceType[int]) -> Element:
    spec = basis.spec
    if len(coeffs) != spec.r:
        raise DimensionMismatch(f"expect {spec.r} coefficients, got {len(coeffs)}")
    return tuple(
        sum(coeffs[j] * basis.vectors[j][i] for j in range(spec.r)) % spec.p for i in range(spec.r)
    )


class SubgroupLine:
    """
    An order-p subgroup of C_p^2, given by its canonical direction (1, t) or (0, 1).
    """
    __slots__ = ("spec", "direction", "normalized")

    def __init__(self, spec: GroupSpec, direction: Element):
        if spec.r != 2:
            raise RankUnsupported(f"subgroup lines need rank 2, got {spec.r}")
        p = spec.p
        a, b = (c % p for c in direction)
        if a:
            direction = (1, b * pow(a, -1, p) % p)
        elif b:
            direction = (0, 1)
        else:
            raise ValueError("direction of a subgroup line must be nonzero")
        self.spec = spec
        self.direction = direction
        self.normalized = True

    def coset_index(self, g: Element) -> int:
        """
        Value of a linear functional vanishing exactly on the line; equal for g, h iff g - h is on the line.
        """
        p = self.spec.p
        if self.direction[0] == 1:
            return (g[1] - self.direction[1] * g[0]) % p
        return g[0] % p

    def coset_representative(self, level: int) -> Element:
        if self.direction[0] == 1:
            return 0, level % self.spec.p
        return level % self.spec.p, 0

    def contains(self, g: Element) -> bool:
        return self.coset_index(g) == 0

    def elements(self) -> List[Element]:
        return [scalar_mul(self.spec, n, self.direction) for n in range(self.spec.p)]

    def complement(self) -> Element:
        """
        A vector outside the line, completing the direction to a basis.
        """
        return (0, 1) if self.direction[0] == 1 else (1, 0)

    def dict(self) -> dict:
        return {"direction": list(self.direction)}

    def __eq__(self, other):
        return isinstance(other, SubgroupLine) and self.spec == other.spec and self.direction == other.direction

    def __hash__(self):
        return hash((self.spec, self.direction))

    def __repr__(self):
        return f"<SubgroupLine{self.direction}>"


def order_p_subgroups(spec: GroupSpec) -> List[SubgroupLine]:
    if spec.r != 2:
        raise RankUnsupported(f"order-p subgroups are enumerated for rank 2 only, got {spec.r}")
    lines = [SubgroupLine(spec, (1, t)) for t in range(spec.p)]
    lines.append(SubgroupLine(spec, (0, 1)))
    return lines


class CharacterId:
    __slots__ = ("j",)

    def __init__(self, j: SequenceType[int]):
        self.j = tuple(int(c) for c in j)

    @property
    def is_principal(self) -> bool:
        return not any(self.j)

    def dict(self) -> dict:
        return {"j": list(self.j)}

    def __eq__(self, other):
        return isinstance(other, CharacterId) and self.j == other.j

    def __hash__(self):
        return hash(self.j)

    def __repr__(self):
        return f"<CharacterId{self.j}>"


def characters(spec: GroupSpec) -> Iterator[CharacterId]:
    return (CharacterId(j) for j in spec.elements())


def character_level(spec: GroupSpec, chi: CharacterId, g: Element) -> int:
    """
    <j, g> mod p; characters agree on g and h iff their levels agree.
    """
    if len(chi.j) != spec.r or len(g) != spec.r:
        raise DimensionMismatch("character and element must both have rank coordinates")
    return sum(a * b for a, b in zip(chi.j, g)) % spec.p


def character_value(spec: GroupSpec, chi: CharacterId, g: Element) -> complex:
    level = character_level(spec, chi, g)
    if level == 0:
        return complex(1.0, 0.0)
    if 2 * level == spec.p:
        return complex(-1.0, 0.0)
    return cmath.exp(2j * cmath.pi * level / spec.p)


@lru_cache(maxsize=8)
def _automorphisms(p: int) -> Tuple[Matrix2, ...]:
    mats = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p:
            mats.append(((a, b), (c, d)))
    return tuple(mats)


def automorphisms(spec: GroupSpec) -> Tuple[Matrix2, ...]:
    """
    All invertible 2x2 matrices mod p, i.e. the automorphism group of C_p^2.
    """
    if spec.r != 2:
        raise RankUnsupported(f"automorphisms are enumerated for rank 2 only, got {spec.r}")
    return _automorphisms(spec.p)


def apply_matrix(spec: GroupSpec, m: Matrix2, g: Element) -> Element:
    p = spec.p
    return (m[0][0] * g[0] + m[0][1] * g[1]) % p, (m[1][0] * g[0] + m[1][1] * g[1]) % p
