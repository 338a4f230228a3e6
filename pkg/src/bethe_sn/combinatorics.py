"""Partitions, standard Young tableaux and their contents.

Rows are indexed by ``x`` and columns by ``y``, both starting at 1, so the
content of the box holding ``i`` is ``y - x``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import factorial
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise ValueError("partition must have at least one part")
        if any(p < 1 for p in parts):
            raise ValueError(f"partition {parts} has a non-positive part")
        if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise ValueError(f"partition {parts} is not weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse a CLI string such as ``"3,2,1"``."""
        try:
            parts = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError:
            raise ValueError(f"bad shape string {text!r}") from None
        return cls(parts)

    @property
    def N(self) -> int:
        return sum(self.parts)

    @property
    def rows(self) -> int:
        return len(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, k):
        return self.parts[k]

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return ",".join(map(str, self.parts))

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for p in self.parts if p > c) for c in range(self.parts[0])))

    def hook_length_dimension(self) -> int:
        """Number of standard tableaux, via the hook length formula (exact ints)."""
        conj = self.conjugate().parts
        hooks = 1
        for x, row in enumerate(self.parts):
            for y in range(row):
                hooks *= (row - y - 1) + (conj[y] - x - 1) + 1
        return factorial(self.N) // hooks

    def addable_rows(self) -> list[int]:
        """Rows (1-indexed) where a box can be added; ``rows + 1`` opens a new row."""
        out = [1]
        for k in range(1, len(self.parts)):
            if self.parts[k] < self.parts[k - 1]:
                out.append(k + 1)
        out.append(len(self.parts) + 1)
        return out

    def add_box(self, row: int) -> "Partition":
        parts = list(self.parts)
        if row == len(parts) + 1:
            parts.append(1)
        elif 1 <= row <= len(parts) and (row == 1 or parts[row - 1] < parts[row - 2]):
            parts[row - 1] += 1
        else:
            raise ValueError(f"cannot add a box in row {row} of {self.parts}")
        return Partition(tuple(parts))


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""

    def rec(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for p in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - p, p):
                yield (p,) + rest

    for parts in rec(n, n):
        yield Partition(parts)


@dataclass(frozen=True)
class StandardTableau:
    """A standard filling stored as row lists of entries ``1..N``."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        shape = Partition(tuple(len(r) for r in rows))
        entries = sorted(v for r in rows for v in r)
        if entries != list(range(1, shape.N + 1)):
            raise ValueError(f"tableau {rows} is not a bijection onto 1..{shape.N}")
        for x, r in enumerate(rows):
            for y, v in enumerate(r):
                if y + 1 < len(r) and r[y + 1] <= v:
                    raise ValueError(f"tableau {rows} is not increasing along row {x + 1}")
                if x + 1 < len(rows) and y < len(rows[x + 1]) and rows[x + 1][y] <= v:
                    raise ValueError(f"tableau {rows} is not increasing down column {y + 1}")

    @cached_property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def N(self) -> int:
        return self.shape.N

    @cached_property
    def _position(self) -> dict[int, tuple[int, int]]:
        return {v: (x + 1, y + 1) for x, r in enumerate(self.rows) for y, v in enumerate(r)}

    def position(self, i: int) -> tuple[int, int]:
        """(row, column) of entry ``i``, 1-indexed."""
        if not 1 <= i <= self.N:
            raise ValueError(f"entry {i} out of range 1..{self.N}")
        return self._position[i]

    def row(self, i: int) -> int:
        return self.position(i)[0]

    def column(self, i: int) -> int:
        return self.position(i)[1]

    def content(self, i: int) -> int:
        x, y = self.position(i)
        return y - x

    def content_vector(self) -> tuple[int, ...]:
        return tuple(self.content(i) for i in range(1, self.N + 1))

    def restrict(self, i: int) -> "StandardTableau":
        if not 1 <= i <= self.N:
            raise ValueError(f"cannot restrict to {i} entries of a size-{self.N} tableau")
        rows = tuple(tuple(v for v in r if v <= i) for r in self.rows)
        return StandardTableau(tuple(r for r in rows if r))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "StandardTableau":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(r) for r in data))

    def __str__(self):
        return "/".join(",".join(map(str, r)) for r in self.rows)


def content(T: StandardTableau, i: int) -> int:
    return T.content(i)


def restrict(T: StandardTableau, i: int) -> StandardTableau:
    return T.restrict(i)


def enumerate_standard_tableaux(shape: Partition | Sequence[int]) -> list[StandardTableau]:
    """All standard tableaux of ``shape``, ordered lexicographically by content vector."""
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    out = []

    def rec(rows, filled, i):
        if i > shape.N:
            out.append(StandardTableau(tuple(tuple(r) for r in rows)))
            return
        for k in range(shape.rows):
            if filled[k] < shape[k] and (k == 0 or filled[k] < filled[k - 1]):
                rows[k].append(i)
                filled[k] += 1
                rec(rows, filled, i + 1)
                filled[k] -= 1
                rows[k].pop()

    rec([[] for _ in range(shape.rows)], [0] * shape.rows, 1)
    out.sort(key=lambda T: T.content_vector())
    return out


@dataclass(frozen=True)
class WeightData:
    """Number of t-coordinates per level: ``m[i-1] = sum(shape[j] for j > i)``."""

    N: int
    m: tuple[int, ...]

    @property
    def L(self) -> int:
        return len(self.m)

    @property
    def total(self) -> int:
        return sum(self.m)


def weight_data(shape: Partition | Sequence[int]) -> WeightData:
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    m = tuple(sum(shape.parts[i:]) for i in range(1, shape.rows))
    return WeightData(shape.N, m)
