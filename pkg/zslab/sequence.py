# coding: utf-8

"""
Sequences over C_p^r as canonical multisets.

Text format::

    # comment
    group 3 2
    1 0 * 2
    0 1

The first non-comment line is the ``group <p> <r>`` header, every further
line is one element optionally followed by ``* <multiplicity>``.
"""

import collections
from pathlib import Path
from typing import Iterable, Iterator, List, Tuple, Callable, Dict

from .constants import FilePathType
from .errors import ParseError, HeaderMissing, CoordOutOfRange, NotASubsequence, RankUnsupported, DimensionMismatch
from .group import GroupSpec, SubgroupLine, Element, make_group, add, neg
from .serialization import BaseModel

import logging
logger = logging.getLogger(__name__)


Entry = Tuple[Element, int]


class SeqStats(BaseModel):
    length: int
    h: int
    supp_size: int
    sigma: Tuple[int, ...]
    v0: int


class Sequence:
    """
    An immutable multiset over a group, stored as sorted (element, multiplicity) pairs.

    Parameters
    ----------
    spec : GroupSpec
        The ambient group.

    entries : iterable of (element, multiplicity)
        Duplicated elements are merged, zero multiplicities dropped.
    """
    __slots__ = ("spec", "entries", "_length")

    def __init__(self, spec: GroupSpec, entries: Iterable[Entry] = ()):
        counts: Dict[Element, int] = collections.defaultdict(int)
        for g, m in entries:
            if m < 0:
                raise ValueError(f"negative multiplicity {m} for {g}")
            counts[spec.check(g)] += m
        self.spec = spec
        self.entries: Tuple[Entry, ...] = tuple(sorted((g, m) for g, m in counts.items() if m > 0))
        self._length = sum(m for _, m in self.entries)

    @classmethod
    def from_elements(cls, spec: GroupSpec, elements: Iterable[Element]) -> "Sequence":
        return cls(spec, ((tuple(g), 1) for g in elements))

    @classmethod
    def empty(cls, spec: GroupSpec) -> "Sequence":
        return cls(spec)

    def __len__(self) -> int:
        return self._length

    def __iter__(self) -> Iterator[Element]:
        for g, m in self.entries:
            for _ in range(m):
                yield g

    def __contains__(self, g) -> bool:
        return self.multiplicity(tuple(g)) > 0

    def __eq__(self, other):
        return isinstance(other, Sequence) and self.spec == other.spec and self.entries == other.entries

    def __hash__(self):
        return hash((self.spec, self.entries))

    def __lt__(self, other: "Sequence"):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"<Sequence(p={self.spec.p}, r={self.spec.r}, {self})>"

    def __str__(self):
        if not self.entries:
            return "[]"
        parts = []
        for g, m in self.entries:
            text = "(" + ",".join(map(str, g)) + ")"
            parts.append(f"{text}^{m}" if m > 1 else text)
        return "·".join(parts)

    def sort_key(self) -> Tuple:
        """
        Lexicographic key over the expanded element list.
        """
        return tuple(self)

    @property
    def support(self) -> Tuple[Element, ...]:
        return tuple(g for g, _ in self.entries)

    @property
    def sigma(self) -> Element:
        spec = self.spec
        total = [0] * spec.r
        for g, m in self.entries:
            for i, c in enumerate(g):
                total[i] += m * c
        return tuple(c % spec.p for c in total)

    @property
    def h(self) -> int:
        return max((m for _, m in self.entries), default=0)

    def multiplicity(self, g: Element) -> int:
        for e, m in self.entries:
            if e == g:
                return m
        return 0

    def counts(self) -> Dict[Element, int]:
        return dict(self.entries)

    def stats(self) -> SeqStats:
        return SeqStats(
            length=len(self),
            h=self.h,
            supp_size=len(self.entries),
            sigma=self.sigma,
            v0=self.multiplicity(self.spec.zero),
        )

    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.entries)

    def divides(self, other: "Sequence") -> bool:
        """
        Whether ``self | other`` as multisets.
        """
        counts = other.counts()
        return self.spec == other.spec and all(counts.get(g, 0) >= m for g, m in self.entries)

    def coset_restrict(self, line: SubgroupLine, g: Element) -> "Sequence":
        if self.spec.r != 2:
            raise RankUnsupported(f"coset restriction needs rank 2, got {self.spec.r}")
        level = line.coset_index(g)
        return Sequence(self.spec, ((e, m) for e, m in self.entries if line.coset_index(e) == level))

    def max_squarefree(self) -> "Sequence":
        return Sequence(self.spec, ((g, 1) for g, _ in self.entries))

    def translate(self, g: Element) -> "Sequence":
        return Sequence(self.spec, ((add(self.spec, e, g), m) for e, m in self.entries))

    def concat(self, other: "Sequence") -> "Sequence":
        if self.spec != other.spec:
            raise DimensionMismatch(f"can't concatenate sequences over {self.spec} and {other.spec}")
        return Sequence(self.spec, self.entries + other.entries)

    __mul__ = concat

    def divide(self, other: "Sequence") -> "Sequence":
        """
        ``self · other^{-1}``; raise NotASubsequence unless ``other | self``.
        """
        if not other.divides(self):
            raise NotASubsequence(f"{other} does not divide {self}")
        counts = self.counts()
        for g, m in other.entries:
            counts[g] -= m
        return Sequence(self.spec, counts.items())

    def pad_zeros(self, k: int) -> "Sequence":
        if k < 0:
            raise ValueError(f"padding must be >= 0, got {k}")
        return Sequence(self.spec, self.entries + ((self.spec.zero, k),))

    def map(self, func: Callable[[Element], Element], spec: GroupSpec = None) -> "Sequence":
        """
        Image under an elementwise map, e.g. an automorphism or a coordinate change.
        """
        spec = spec or self.spec
        return Sequence(spec, ((func(g), m) for g, m in self.entries))

    def project(self, i: int) -> "Sequence":
        """
        The rank-1 sequence of i-th coordinates.
        """
        target = GroupSpec(self.spec.p, 1)
        return self.map(lambda g: (g[i],), target)

    def negate(self) -> "Sequence":
        return self.map(lambda g: neg(self.spec, g))

    def serialize(self) -> str:
        return serialize_sequence(self)

    def dict(self) -> dict:
        return {
            "group": [self.spec.p, self.spec.r],
            "entries": [[list(g), m] for g, m in self.entries],
        }


# module level aliases matching the operation names
def stats(seq: Sequence) -> SeqStats:
    return seq.stats()


def coset_restrict(seq: Sequence, line: SubgroupLine, g: Element) -> Sequence:
    return seq.coset_restrict(line, g)


def max_squarefree(seq: Sequence) -> Sequence:
    return seq.max_squarefree()


def translate(seq: Sequence, g: Element) -> Sequence:
    return seq.translate(g)


def concat(seq: Sequence, other: Sequence) -> Sequence:
    return seq.concat(other)


def divide(seq: Sequence, other: Sequence) -> Sequence:
    return seq.divide(other)


def pad_zeros(seq: Sequence, k: int) -> Sequence:
    return seq.pad_zeros(k)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_header(text: str, line_no: int) -> GroupSpec:
    fields = text.split()
    if len(fields) != 3 or fields[0] != "group":
        raise HeaderMissing(f"expect 'group <p> <r>', got {text!r}", line_no)
    try:
        p, r = int(fields[1]), int(fields[2])
    except ValueError:
        raise ParseError(f"group parameters must be integers: {text!r}", line_no) from None
    return make_group(p, r)


def _parse_entry(spec: GroupSpec, text: str, line_no: int) -> Entry:
    coords_text, sep, mult_text = text.partition("*")
    try:
        coords = tuple(int(c) for c in coords_text.split())
        mult = int(mult_text) if sep else 1
    except ValueError:
        raise ParseError(f"expect integers, got {text!r}", line_no) from None

    if len(coords) != spec.r:
        raise ParseError(f"expect {spec.r} coordinates, got {len(coords)}", line_no)
    if mult < 1:
        raise ParseError(f"multiplicity must be >= 1, got {mult}", line_no)
    for c in coords:
        if not 0 <= c < spec.p:
            raise CoordOutOfRange(f"line {line_no}: coordinate {c} not in [0, {spec.p - 1}]")
    return coords, mult


def parse_sequences(text: str) -> List[Sequence]:
    """
    Parse one or more ``group`` blocks, e.g. a catalog file.
    """
    blocks: List[Tuple[GroupSpec, List[Entry]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("group"):
            blocks.append((_parse_header(line, line_no), []))
        elif not blocks:
            raise HeaderMissing("sequence data before 'group <p> <r>' header", line_no)
        else:
            spec, entries = blocks[-1]
            entries.append(_parse_entry(spec, line, line_no))

    if not blocks:
        raise HeaderMissing("missing 'group <p> <r>' header")
    return [Sequence(spec, entries) for spec, entries in blocks]


def parse_sequence(text: str) -> Sequence:
    sequences = parse_sequences(text)
    if len(sequences) > 1:
        raise ParseError(f"expect one sequence, got {len(sequences)} group blocks")
    return sequences[0]


def serialize_sequence(seq: Sequence) -> str:
    lines = [f"group {seq.spec.p} {seq.spec.r}"]
    for g, m in seq.entries:
        coords = " ".join(map(str, g))
        lines.append(f"{coords} * {m}" if m > 1 else coords)
    return "\n".join(lines) + "\n"


def read_sequence_file(path: FilePathType) -> Sequence:
    logger.debug("read sequence file: %s", path)
    return parse_sequence(Path(path).read_text(encoding="utf-8"))


def write_sequence_file(seq: Sequence, path: FilePathType, comment: str = None) -> Path:
    path = Path(path)
    text = serialize_sequence(seq)
    if comment:
        text = "".join(f"# {line}\n" for line in comment.splitlines()) + text
    path.write_text(text, encoding="utf-8")
    return path
