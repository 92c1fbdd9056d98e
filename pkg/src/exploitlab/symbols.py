"""Finite alphabets of opaque symbol tokens, and words over them.

Tokens are whole text labels, not characters; declaration order fixes the
enumeration index used by the tokenizer.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import DuplicateToken, EmptyAlphabet, EmptyToken, UnknownSymbol

# A word is an ordered sequence of symbol tokens.
Word = tuple[str, ...]


class Alphabet:
    """Finite ordered set of distinct non-empty tokens."""

    __slots__ = ("tokens", "_index")

    def __init__(self, tokens: Iterable[str]):
        toks = tuple(tokens)
        if not toks:
            raise EmptyAlphabet("alphabet needs at least one token")
        index: dict[str, int] = {}
        for i, tok in enumerate(toks):
            if not isinstance(tok, str) or tok == "":
                raise EmptyToken(f"token #{i} is empty or not text")
            if tok in index:
                raise DuplicateToken(tok)
            index[tok] = i
        self.tokens = toks
        self._index = index

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownSymbol(token) from None

    def __contains__(self, token: object) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Alphabet):
            return NotImplemented
        return self.tokens == other.tokens

    def __hash__(self) -> int:
        return hash(self.tokens)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.tokens)!r})"


def make_alphabet(tokens: Iterable[str]) -> Alphabet:
    return Alphabet(tokens)


def symbol_index(alpha: Alphabet, token: str) -> int:
    """Zero-based declaration index of ``token``; raises UnknownSymbol."""
    return alpha.index(token)


def word(symbols: Iterable[str]) -> Word:
    return tuple(symbols)


def validate_word(alpha: Alphabet, w: Sequence[str]) -> None:
    """Raise UnknownSymbol (with position) unless every symbol is in ``alpha``.

    The empty word is always valid.
    """
    for i, sym in enumerate(w):
        if sym not in alpha:
            raise UnknownSymbol(sym, position=i)
