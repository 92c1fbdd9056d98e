"""Bit-exact transcript encoding and tokenization.

Two layers, each with an exact inverse:

* a tagged-symbol encoding of transcripts over the alphabet made of
  input-copies, output-copies and the two delimiters ``#`` and ``$``,
  rendered to text as ``#I{...}$O{...}`` with backslash escaping;
* an injective tokenizer that numbers symbols and emits the minimal
  binary form of each number followed by a separator, serialized as a
  string over the characters ``0``, ``1`` and ``|``.

Injectivity is witnessed executably: decode(encode(t)) == t and
detokenize(tokenize(w)) == w, for every transcript t and word w.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .engine import Transcript
from .errors import (
    EscapeError,
    IndexOutOfRange,
    MalformedGamma,
    MalformedStream,
    UnknownSymbol,
)
from .symbols import Alphabet, Word, validate_word


class GammaKind(enum.Enum):
    HASH = "#"
    DOLLAR = "$"
    IN = "I"
    OUT = "O"


@dataclass(frozen=True)
class GammaSymbol:
    kind: GammaKind
    token: str | None = None

    def __post_init__(self):
        tagged = self.kind in (GammaKind.IN, GammaKind.OUT)
        if tagged != (self.token is not None):
            raise ValueError("token is required exactly for copy symbols")


HASH = GammaSymbol(GammaKind.HASH)
DOLLAR = GammaSymbol(GammaKind.DOLLAR)


def in_copy(token: str) -> GammaSymbol:
    return GammaSymbol(GammaKind.IN, token)


def out_copy(token: str) -> GammaSymbol:
    return GammaSymbol(GammaKind.OUT, token)


GammaString = tuple[GammaSymbol, ...]

SEP = "|"
TokenStream = str  # characters "0", "1" and SEP


# -- transcript <-> gamma symbols ----------------------------------------------


def encode_transcript(transcript: Transcript) -> GammaString:
    """Per turn: ``#``, the input copied symbol-by-symbol, ``$``, the output."""
    out: list[GammaSymbol] = []
    for inp, outp in transcript:
        out.append(HASH)
        out.extend(in_copy(t) for t in inp)
        out.append(DOLLAR)
        out.extend(out_copy(t) for t in outp)
    return tuple(out)


def decode_transcript(
    gamma: Sequence[GammaSymbol], input_alphabet: Alphabet, output_alphabet: Alphabet
) -> Transcript:
    """Exact inverse of encode_transcript; rejects anything off-pattern."""
    turns: list[tuple[Word, Word]] = []
    pos = 0
    n = len(gamma)
    while pos < n:
        if gamma[pos].kind is not GammaKind.HASH:
            raise MalformedGamma(pos, "expected '#'")
        pos += 1
        inp: list[str] = []
        while pos < n and gamma[pos].kind is GammaKind.IN:
            inp.append(gamma[pos].token)
            pos += 1
        if pos >= n or gamma[pos].kind is not GammaKind.DOLLAR:
            raise MalformedGamma(pos, "expected '$'")
        pos += 1
        outp: list[str] = []
        while pos < n and gamma[pos].kind is GammaKind.OUT:
            outp.append(gamma[pos].token)
            pos += 1
        validate_word(input_alphabet, inp)
        validate_word(output_alphabet, outp)
        turns.append((tuple(inp), tuple(outp)))
    return tuple(turns)


# -- gamma symbols <-> text -----------------------------------------------------

_ESCAPABLE = set("#${}\\")


def _escape(token: str) -> str:
    return "".join("\\" + ch if ch in _ESCAPABLE else ch for ch in token)


def render_gamma(gamma: Sequence[GammaSymbol]) -> str:
    parts = []
    for sym in gamma:
        if sym.kind is GammaKind.HASH:
            parts.append("#")
        elif sym.kind is GammaKind.DOLLAR:
            parts.append("$")
        else:
            parts.append(f"{sym.kind.value}{{{_escape(sym.token)}}}")
    return "".join(parts)


def parse_gamma(
    text: str, input_alphabet: Alphabet, output_alphabet: Alphabet
) -> GammaString:
    out: list[GammaSymbol] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "#":
            out.append(HASH)
            pos += 1
        elif ch == "$":
            out.append(DOLLAR)
            pos += 1
        elif ch in ("I", "O"):
            if pos + 1 >= n or text[pos + 1] != "{":
                raise MalformedGamma(pos, f"{ch} must be followed by '{{'")
            token, pos_after = _read_token(text, pos + 2)
            alpha = input_alphabet if ch == "I" else output_alphabet
            if token not in alpha:
                raise UnknownSymbol(token)
            out.append(in_copy(token) if ch == "I" else out_copy(token))
            pos = pos_after
        else:
            raise MalformedGamma(pos, f"unexpected character {ch!r}")
    return tuple(out)


def _read_token(text: str, pos: int) -> tuple[str, int]:
    chars: list[str] = []
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\\":
            if pos + 1 >= n:
                raise EscapeError(pos, "dangling backslash")
            nxt = text[pos + 1]
            if nxt not in _ESCAPABLE:
                raise EscapeError(pos, f"cannot escape {nxt!r}")
            chars.append(nxt)
            pos += 2
        elif ch == "}":
            return "".join(chars), pos + 1
        elif ch in "#${":
            raise EscapeError(pos, f"{ch!r} must be escaped inside a token")
        else:
            chars.append(ch)
            pos += 1
    raise MalformedGamma(pos, "unterminated token")


# -- words <-> token streams ----------------------------------------------------


def _encode_block(index: int) -> str:
    return format(index, "b") + SEP


def tokenize_word(alpha: Alphabet, w: Sequence[str]) -> TokenStream:
    """Minimal binary of each symbol's declaration index, ``|``-terminated."""
    validate_word(alpha, w)
    return "".join(_encode_block(alpha.index(sym)) for sym in w)


def _split_blocks(stream: TokenStream) -> list[int]:
    for ch in stream:
        if ch not in "01" + SEP:
            raise MalformedStream(f"stray character {ch!r}")
    if stream == "":
        return []
    if not stream.endswith(SEP):
        raise MalformedStream("missing trailing separator")
    codes = []
    for block in stream[:-1].split(SEP):
        if block == "":
            raise MalformedStream("empty binary block")
        if block[0] == "0" and len(block) > 1:
            raise MalformedStream(f"leading zero in block {block!r}")
        codes.append(int(block, 2))
    return codes


def detokenize_word(alpha: Alphabet, stream: TokenStream) -> Word:
    syms = []
    for code in _split_blocks(stream):
        if code >= len(alpha):
            raise IndexOutOfRange(code, len(alpha))
        syms.append(alpha.tokens[code])
    return tuple(syms)


# -- transcripts <-> token streams ----------------------------------------------
#
# Gamma symbols are numbered: '#' is 0, '$' is 1, then input copies in
# declaration order, then output copies in declaration order.


def _gamma_code(sym: GammaSymbol, input_alphabet: Alphabet, output_alphabet: Alphabet) -> int:
    if sym.kind is GammaKind.HASH:
        return 0
    if sym.kind is GammaKind.DOLLAR:
        return 1
    if sym.kind is GammaKind.IN:
        return 2 + input_alphabet.index(sym.token)
    return 2 + len(input_alphabet) + output_alphabet.index(sym.token)


def _gamma_from_code(code: int, input_alphabet: Alphabet, output_alphabet: Alphabet) -> GammaSymbol:
    if code == 0:
        return HASH
    if code == 1:
        return DOLLAR
    rest = code - 2
    if rest < len(input_alphabet):
        return in_copy(input_alphabet.tokens[rest])
    rest -= len(input_alphabet)
    if rest < len(output_alphabet):
        return out_copy(output_alphabet.tokens[rest])
    raise IndexOutOfRange(code, 2 + len(input_alphabet) + len(output_alphabet))


def tokenize_transcript(
    transcript: Transcript, input_alphabet: Alphabet, output_alphabet: Alphabet
) -> TokenStream:
    gamma = encode_transcript(transcript)
    return "".join(
        _encode_block(_gamma_code(sym, input_alphabet, output_alphabet)) for sym in gamma
    )


def detokenize_transcript(
    stream: TokenStream, input_alphabet: Alphabet, output_alphabet: Alphabet
) -> Transcript:
    size = 2 + len(input_alphabet) + len(output_alphabet)
    gamma = []
    for code in _split_blocks(stream):
        if code >= size:
            raise IndexOutOfRange(code, size)
        gamma.append(_gamma_from_code(code, input_alphabet, output_alphabet))
    return decode_transcript(tuple(gamma), input_alphabet, output_alphabet)
