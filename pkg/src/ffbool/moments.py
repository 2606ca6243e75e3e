"""Letters, words and moment functionals, plus the JSON table format.

A letter is one generator of one face of one triple.  A word is a tuple of
letters; its face sequence is the face map of the word and its index
sequence determines which positions belong to the same triple.

Table files look like::

    {"letters": [{"index": "1", "face": "l", "tag": "x"}, ...],
     "moments": [{"word": [0, 2, 1], "value": "3/2"}, ...]}

Words are lists of positions in ``letters`` and values are exact rationals
written as ``p/q`` strings.  Cumulant tables use the key ``"cumulants"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from .chi import ChiMap
from .errors import MissingMomentError

Word = tuple  # tuple of Letter


@dataclass(frozen=True, order=True)
class Letter:
    index: str
    face: str
    tag: str = "x"

    def __post_init__(self):
        face = str(self.face).upper()
        if face not in ("L", "R", "C"):
            raise ValueError(f"invalid face {self.face!r}")
        object.__setattr__(self, "face", face)
        object.__setattr__(self, "index", str(self.index))
        object.__setattr__(self, "tag", str(self.tag))

    def __str__(self):
        return f"{self.tag}[{self.index}{self.face.lower()}]"

    def to_json(self) -> dict:
        return {"index": self.index, "face": self.face.lower(), "tag": self.tag}


def word_str(word: Sequence[Letter]) -> str:
    return " ".join(map(str, word))


def word_chi(word: Sequence[Letter]) -> ChiMap:
    return ChiMap(tuple(l.face for l in word))


def word_omega(word: Sequence[Letter]) -> tuple[str, ...]:
    return tuple(l.index for l in word)


def subword(word: Sequence[Letter], positions: Iterable[int]) -> tuple:
    """Letters at the given 1-based positions, in natural order."""
    return tuple(word[k - 1] for k in sorted(positions))


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational {text!r}") from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def all_words(letters: Sequence[Letter], max_len: int, min_len: int = 1) -> Iterator[tuple]:
    for k in range(min_len, max_len + 1):
        yield from product(letters, repeat=k)


class MomentFunctional:
    """Exact rational value for every nonempty word up to ``max_len``.

    Subclasses implement :meth:`moment`.  Queries on the empty word or past
    ``max_len`` raise :class:`~ffbool.errors.MissingMomentError`.
    """

    def __init__(self, letters: Sequence[Letter] = (), max_len: int = 6):
        self.letters = tuple(letters)
        self.max_len = max_len

    def moment(self, word: tuple) -> Fraction:
        raise NotImplementedError

    def __call__(self, word: Sequence[Letter]) -> Fraction:
        word = tuple(word)
        if not word or len(word) > self.max_len:
            raise MissingMomentError(word_str(word) or "<empty>")
        return self.moment(word)

    def words(self, max_len: int | None = None):
        return all_words(self.letters, self.max_len if max_len is None else max_len)


class TableMoments(MomentFunctional):
    """Moments read from an explicit table."""

    def __init__(self, letters: Sequence[Letter], values: dict, max_len: int | None = None):
        values = {tuple(w): Fraction(v) for w, v in values.items()}
        if max_len is None:
            max_len = max((len(w) for w in values), default=0)
        super().__init__(letters, max_len)
        self.values = values

    def moment(self, word):
        try:
            return self.values[word]
        except KeyError:
            raise MissingMomentError(word_str(word)) from None


class FunctionMoments(MomentFunctional):
    """Moments from a callable, memoized."""

    def __init__(self, fn: Callable[[tuple], Fraction], letters=(), max_len: int = 6):
        super().__init__(letters, max_len)
        self.fn = fn
        self._memo: dict[tuple, Fraction] = {}

    def moment(self, word):
        v = self._memo.get(word)
        if v is None:
            v = self._memo[word] = Fraction(self.fn(word))
        return v


def tabulate(phi: MomentFunctional, max_len: int | None = None, letters=None) -> TableMoments:
    """Materialize every word up to ``max_len`` into a table."""
    letters = tuple(phi.letters if letters is None else letters)
    n = phi.max_len if max_len is None else max_len
    return TableMoments(letters, {w: phi(w) for w in all_words(letters, n)}, n)


# -- JSON table files ----------------------------------------------------


def table_to_json(letters: Sequence[Letter], values: dict, key: str = "moments") -> str:
    pos = {l: i for i, l in enumerate(letters)}
    rows = sorted(([pos[l] for l in w], v) for w, v in values.items())
    rows.sort(key=lambda r: (len(r[0]), r[0]))
    # one compact row per line keeps large tables diffable
    def block(items):
        return ",\n".join("  " + json.dumps(x) for x in items)

    lets = block(l.to_json() for l in letters)
    vals = block({"word": w, "value": format_rational(v)} for w, v in rows)
    return f'{{\n "letters": [\n{lets}\n ],\n "{key}": [\n{vals}\n ]\n}}\n'


def table_from_json(text: str) -> tuple[tuple[Letter, ...], dict, str]:
    """Parse a table file; returns ``(letters, values, key)``."""
    doc = json.loads(text)
    letters = tuple(Letter(d["index"], d["face"], d.get("tag", "x")) for d in doc["letters"])
    key = "moments" if "moments" in doc else "cumulants"
    if key not in doc:
        raise ValueError("table has neither 'moments' nor 'cumulants'")
    values = {}
    for row in doc[key]:
        try:
            w = tuple(letters[i] for i in row["word"])
        except (IndexError, TypeError):
            raise ValueError(f"bad word {row.get('word')!r}") from None
        if not w:
            raise ValueError("the empty word is not a valid table entry")
        values[w] = parse_rational(row["value"])
    return letters, values, key


def read_table(path) -> tuple[tuple[Letter, ...], dict, str]:
    return table_from_json(Path(path).read_text())
