"""Free-group words, cyclic words and rational chains.

Letters are nonzero integers: generator ``k`` (0-based) is ``k + 1`` and its
inverse is ``-(k + 1)``.  Text uses lowercase for generators and uppercase
for inverses, so ``"abAB"`` is the commutator of ``a`` and ``b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class WordError(ValueError):
    pass


class UnknownSymbol(WordError):
    pass


class EmptyWord(WordError):
    pass


class TrivialWord(WordError):
    pass


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __init__(self, names: Iterable[str] | str):
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",") if n.strip()]
        names = tuple(names)
        if not names:
            raise WordError("an alphabet needs at least one generator")
        for n in names:
            if len(n) != 1 or not n.islower():
                raise WordError(f"generator names must be single lowercase letters, got {n!r}")
        if len(set(names)) != len(names):
            raise WordError(f"repeated generator in {names}")
        object.__setattr__(self, "names", names)

    @classmethod
    def of_rank(cls, rank: int) -> "Alphabet":
        return cls([chr(ord("a") + k) for k in range(rank)])

    @property
    def rank(self) -> int:
        return len(self.names)

    def letter(self, symbol: str) -> int:
        try:
            if symbol.islower():
                return self.names.index(symbol) + 1
            return -(self.names.index(symbol.lower()) + 1)
        except ValueError:
            raise UnknownSymbol(symbol) from None

    def symbol(self, letter: int) -> str:
        s = self.names[abs(letter) - 1]
        return s if letter > 0 else s.upper()

    def render(self, letters: Sequence[int]) -> str:
        return "".join(self.symbol(x) for x in letters)

    def __str__(self):
        return "<" + ",".join(self.names) + ">"


def letter_key(x: int) -> tuple[int, int]:
    """Sort key: generator order first, and ``x < x^-1``."""
    return (abs(x), 0 if x > 0 else 1)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word(tuple):
    """A freely reduced word."""

    def __new__(cls, letters: Iterable[int] = ()):
        return super().__new__(cls, free_reduce(letters))

    def __mul__(self, other):
        return Word(tuple(self) + tuple(other))

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self))

    def __repr__(self):
        return f"Word({list(self)})"


def parse_word(text: str, alphabet: Alphabet) -> Word:
    return Word(alphabet.letter(ch) for ch in text.strip())


def _min_rotation(letters: tuple[int, ...]) -> tuple[int, ...]:
    keyed = [letter_key(x) for x in letters]
    n = len(letters)
    best = min(range(n), key=lambda k: keyed[k:] + keyed[:k])
    return letters[best:] + letters[:best]


class CyclicWord(tuple):
    """A cyclically reduced word stored in its lexicographically least rotation."""

    def __new__(cls, letters: Iterable[int]):
        letters = tuple(letters)
        if not letters:
            raise EmptyWord("cyclic words are nonempty")
        n = len(letters)
        for k in range(n):
            if letters[k] == -letters[(k + 1) % n]:
                raise WordError(f"{letters} is not cyclically reduced")
        return super().__new__(cls, _min_rotation(letters))

    def inverse(self) -> "CyclicWord":
        return CyclicWord(-x for x in reversed(self))

    def root(self) -> tuple["CyclicWord", int]:
        """Return ``(r, k)`` with ``self = r^k`` and ``r`` not a proper power."""
        n = len(self)
        doubled = tuple(self) + tuple(self)
        for p in range(1, n + 1):
            if n % p == 0 and doubled[p:p + n] == tuple(self):
                return CyclicWord(self[:p]), n // p
        raise AssertionError("unreachable")

    def __repr__(self):
        return f"CyclicWord({list(self)})"


def cyclic_reduce(w: Sequence[int]) -> tuple[CyclicWord, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced.

    The returned core is rotated to canonical form and the conjugator is
    adjusted so the identity still holds in the free group.
    """
    w = free_reduce(w)
    if not w:
        raise EmptyWord("the word reduces to the identity")
    k = 0
    while k < len(w) - 1 - k and w[k] == -w[-1 - k]:
        k += 1
    conj = Word(w[:k])
    core = w[k:len(w) - k]
    canon = CyclicWord(core)
    # core = s * t and canon = t * s, so core = s * canon * s^-1
    n = len(core)
    for shift in range(n):
        if core[shift:] + core[:shift] == tuple(canon):
            break
    return canon, conj * Word(core[:shift])


def word_power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return Word(Word(w).inverse() * (-k))
    return Word(tuple(w) * k)


def abelianize(w: Sequence[int], rank: int) -> list[int]:
    v = [0] * rank
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


class Chain:
    """A rational chain over cyclic words, reduced modulo conjugation and powers.

    Keys are canonical cyclic words that are not proper powers, and a word
    and its inverse never both appear; coefficients are nonzero Fractions
    and may be negative until :func:`chain_inverse_normalize` is applied.
    """

    __slots__ = ("alphabet", "_terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[CyclicWord, Fraction] | None = None):
        self.alphabet = alphabet
        self._terms = dict(sorted(
            ((w, Fraction(c)) for w, c in (terms or {}).items() if c != 0),
            key=lambda kv: (len(kv[0]), [letter_key(x) for x in kv[0]]),
        ))

    @property
    def terms(self) -> dict[CyclicWord, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __getitem__(self, w):
        return self._terms[w]

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.alphabet == other.alphabet and self._terms == other._terms

    def __hash__(self):
        return hash((self.alphabet, tuple(self._terms.items())))

    def __add__(self, other: "Chain") -> "Chain":
        if self.alphabet != other.alphabet:
            raise WordError("chains over different alphabets")
        return canonicalize_terms(
            list(self._terms.items()) + list(other._terms.items()), self.alphabet)

    def __rmul__(self, k) -> "Chain":
        k = Fraction(k)
        return Chain(self.alphabet, {w: k * c for w, c in self._terms.items()})

    def __neg__(self) -> "Chain":
        return -1 * self

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def inverse(self) -> "Chain":
        """Invert every word (not the coefficients)."""
        return canonicalize_terms([(w.inverse(), c) for w, c in self._terms.items()], self.alphabet)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = self.alphabet.render(w) if mag == 1 else f"{mag}*{self.alphabet.render(w)}"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Chain({self.render()!r})"


def canonicalize_terms(raw: Iterable[tuple[Sequence[int], Fraction | int]], alphabet: Alphabet) -> Chain:
    acc: dict[CyclicWord, Fraction] = {}
    for letters, coeff in raw:
        try:
            cw, _ = cyclic_reduce(letters)
        except EmptyWord:
            raise TrivialWord(alphabet.render(free_reduce(letters)) or "1") from None
        r, k = cw.root()
        coeff = Fraction(coeff) * k
        inv = r.inverse()
        if [letter_key(x) for x in inv] < [letter_key(x) for x in r]:
            r, coeff = inv, -coeff
        acc[r] = acc.get(r, Fraction(0)) + coeff
    return Chain(alphabet, acc)


def canonicalize_chain(raw: Iterable[tuple[str, Fraction | int | str]], alphabet: Alphabet) -> Chain:
    """Build the canonical chain of ``sum coeff * word`` modulo conjugation and powers."""
    return canonicalize_terms(
        ((parse_word(text, alphabet), Fraction(c)) for text, c in raw), alphabet)


def chain_inverse_normalize(c: Chain) -> Chain:
    """Make every coefficient positive by trading ``-t*w`` for ``t*w^-1``."""
    return Chain(c.alphabet, {(w if t > 0 else w.inverse()): abs(t) for w, t in c.items()})


def is_null_homologous(c: Chain) -> bool:
    total = [Fraction(0)] * c.alphabet.rank
    for w, t in c.items():
        for k, e in enumerate(abelianize(w, c.alphabet.rank)):
            total[k] += t * e
    return not any(total)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\s*\*\s*)?([A-Za-z]+)$")


def parse_chain(text: str, alphabet: Alphabet) -> Chain:
    """Parse ``term (+|- term)*`` where ``term = [coeff '*'] word``."""
    src = text.strip()
    if not src:
        raise WordError("empty chain expression")
    tokens = re.split(r"\s*([+-])\s*", src)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise WordError(f"malformed chain expression {text!r}")
    raw = []
    for sign, term in zip(tokens[::2], tokens[1::2]):
        m = _TERM.match(term)
        if sign not in "+-" or not m:
            raise WordError(f"malformed term {term!r} in {text!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        raw.append((m.group(2), -coeff if sign == "-" else coeff))
    return canonicalize_chain(raw, alphabet)
