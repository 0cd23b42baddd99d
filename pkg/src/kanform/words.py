"""Free group words over named generators.

Words are stored freely reduced at all times; reduction is performed by the
constructor.  The text syntax is bit-exact: generators joined by ``*``,
inverses marked ``^-1``, and ``1`` for the empty word, e.g.
``x1*y1*x1^-1*y1^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


_FORBIDDEN = set('*^') | set(' \t\n\r')


class WordError(ValueError):
    """Malformed word data or unknown generator."""


@dataclass(frozen=True, order=True)
class Generator:
    """A named free generator carrying the simplicial degree it was born in."""

    name: str
    degree_tag: int = 0

    def __post_init__(self):
        if not self.name or not self.name.isascii():
            raise WordError("generator name must be nonempty ASCII: %r" % (self.name,))
        if _FORBIDDEN & set(self.name):
            raise WordError("generator name may not contain '*', '^' or whitespace: %r"
                            % (self.name,))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Word:
    """A freely reduced word: a tuple of (generator, exponent) letters.

    Exponents are +1 or -1; runs like x^3 are stored as repeated letters so
    that reduction and face maps stay letter-local.
    """

    letters: tuple = ()

    @staticmethod
    def reduce(letters: Iterable) -> "Word":
        """Freely reduce a raw letter sequence into a Word (idempotent)."""
        stack = []
        for gen, exp in letters:
            if not isinstance(gen, Generator):
                raise WordError("letter is not a Generator: %r" % (gen,))
            if exp not in (1, -1):
                raise WordError("letter exponent must be +1 or -1, got %r" % (exp,))
            if stack and stack[-1][0] == gen and stack[-1][1] == -exp:
                stack.pop()
            else:
                stack.append((gen, exp))
        return Word(tuple(stack))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word.reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        w = identity()
        for _ in range(n):
            w = w * self
        return w

    def exponent_sums(self) -> dict:
        """Image in the free abelian group: generator -> exponent sum."""
        sums: dict = {}
        for g, e in self.letters:
            sums[g] = sums.get(g, 0) + e
            if sums[g] == 0:
                del sums[g]
        return sums

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def __str__(self):
        if not self.letters:
            return "1"
        return "*".join(g.name if e == 1 else g.name + "^-1" for g, e in self.letters)

    def __repr__(self):
        return "Word(%s)" % self


def identity() -> Word:
    return Word()


def gen_word(g: Generator, exp: int = 1) -> Word:
    return Word.reduce([(g, 1 if exp > 0 else -1)] * abs(exp))


def multiply(a: Word, b: Word) -> Word:
    return a * b


def invert(a: Word) -> Word:
    return a.inverse()


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


@dataclass
class Alphabet:
    """A finite generator universe, used to parse and validate words."""

    gens: dict = field(default_factory=dict)

    @staticmethod
    def of(generators: Iterable[Generator]) -> "Alphabet":
        a = Alphabet()
        for g in generators:
            a.add(g)
        return a

    def add(self, g: Generator) -> Generator:
        if g.name in self.gens:
            if self.gens[g.name] != g:
                raise WordError("duplicate generator name %r" % (g.name,))
            return self.gens[g.name]
        self.gens[g.name] = g
        return g

    def __contains__(self, name: str) -> bool:
        return name in self.gens

    def __getitem__(self, name: str) -> Generator:
        try:
            return self.gens[name]
        except KeyError:
            raise WordError("unknown generator %r" % (name,)) from None

    def __iter__(self):
        return iter(self.gens.values())

    def __len__(self):
        return len(self.gens)

    def parse(self, text: str) -> Word:
        """Parse the bit-exact word syntax, e.g. ``x1*y1*x1^-1*y1^-1`` or ``1``."""
        text = text.strip()
        if text == "1" or text == "":
            return identity()
        letters = []
        for tok in text.split("*"):
            if tok.endswith("^-1"):
                name, exp = tok[:-3], -1
            elif "^" in tok:
                raise WordError("bad token %r: only ^-1 is allowed" % (tok,))
            else:
                name, exp = tok, 1
            if not name:
                raise WordError("empty generator token in %r" % (text,))
            letters.append((self[name], exp))
        return Word.reduce(letters)

    def contains_word(self, w: Word) -> bool:
        return all(g.name in self.gens and self.gens[g.name] == g for g, _ in w)
