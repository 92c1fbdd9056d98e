"""Target systems as explicit transition systems with goal states.

A system couples an input and an output alphabet with a possibly-partial,
possibly-nondeterministic transition table.  Each table entry maps a
(state, input-symbol) pair to an ordered list of alternatives; a missing
entry means the single-symbol transition is undefined there.  Folding the
single-symbol step over a word gives the whole-word behaviour, with the
per-step output words concatenated.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    NoInitial,
    NondeterministicChoice,
    ParseError,
    UnknownFixture,
    UnknownState,
    UnknownSymbol,
)
from .symbols import Alphabet, Word, validate_word


@dataclass(frozen=True)
class Alternative:
    """One possible effect of a step: target state plus emitted output word."""

    to: str
    out: Word


class ChoiceResolver:
    """Picks one alternative whenever a step is nondeterministic.

    Seeded resolvers draw a reproducible uniform choice sequence.  Exhaustive
    resolvers are for callers that explore every branch themselves (search,
    membership); they refuse to linearize a genuine choice.
    """

    __slots__ = ("mode", "seed", "_rng")

    def __init__(self, mode: str, seed: int = 0):
        if mode not in ("exhaustive", "seeded"):
            raise ValueError(f"bad resolver mode {mode!r}")
        self.mode = mode
        self.seed = seed
        self._rng = random.Random(seed) if mode == "seeded" else None

    @classmethod
    def seeded(cls, seed: int) -> "ChoiceResolver":
        return cls("seeded", seed)

    @classmethod
    def exhaustive(cls) -> "ChoiceResolver":
        return cls("exhaustive")

    def choose(self, n: int) -> int:
        if n == 1:
            return 0
        if self._rng is None:
            raise NondeterministicChoice(
                f"exhaustive resolver cannot pick one of {n} alternatives"
            )
        return self._rng.randrange(n)


class TransitionSystem:
    """Validated immutable transition system; share freely once built."""

    __slots__ = (
        "name",
        "states",
        "initial",
        "goals",
        "input_alphabet",
        "output_alphabet",
        "transitions",
    )

    def __init__(
        self,
        name: str,
        states: Sequence[str],
        initial: str,
        goals: Sequence[str],
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        transitions: Mapping[tuple[str, str], Sequence[Alternative]],
    ):
        state_set = set()
        for s in states:
            if s in state_set:
                raise ParseError(f"duplicate state {s!r}")
            state_set.add(s)
        if not states:
            raise ParseError("no states declared")
        if not initial:
            raise NoInitial("no initial state")
        if initial not in state_set:
            raise UnknownState(initial)
        for g in goals:
            if g not in state_set:
                raise UnknownState(g)
        table: dict[tuple[str, str], tuple[Alternative, ...]] = {}
        for (src, sym), alts in transitions.items():
            if src not in state_set:
                raise UnknownState(src)
            if sym not in input_alphabet:
                raise UnknownSymbol(sym)
            if not alts:
                raise ParseError(f"empty alternatives for ({src!r}, {sym!r})")
            for alt in alts:
                if alt.to not in state_set:
                    raise UnknownState(alt.to)
                validate_word(output_alphabet, alt.out)
            table[(src, sym)] = tuple(alts)
        self.name = name
        self.states = tuple(states)
        self.initial = initial
        self.goals = frozenset(goals)
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.transitions = table

    @property
    def deterministic(self) -> bool:
        return all(len(alts) == 1 for alts in self.transitions.values())

    def alternatives(self, state: str, sym: str) -> tuple[Alternative, ...] | None:
        """Table entry for (state, sym), or None where the step is undefined."""
        if state not in self.states:
            raise UnknownState(state)
        if sym not in self.input_alphabet:
            raise UnknownSymbol(sym)
        return self.transitions.get((state, sym))


def step(
    sys: TransitionSystem, state: str, sym: str, r: ChoiceResolver
) -> tuple[str, Word] | None:
    """One transition; returns (next state, output word) or None if undefined.

    Undefined is a value, not a fault: the table simply has no entry.
    """
    alts = sys.alternatives(state, sym)
    if alts is None:
        return None
    alt = alts[r.choose(len(alts))]
    return alt.to, alt.out


def run_word(
    sys: TransitionSystem, state: str, w: Sequence[str], r: ChoiceResolver
) -> tuple[str, Word] | None:
    """Left-to-right fold of ``step`` over ``w``, concatenating outputs.

    Returns None as soon as any single step is undefined.
    """
    validate_word(sys.input_alphabet, w)
    out: list[str] = []
    for sym in w:
        res = step(sys, state, sym, r)
        if res is None:
            return None
        state, emitted = res
        out.extend(emitted)
    return state, tuple(out)


def is_goal(sys: TransitionSystem, state: str) -> bool:
    if state not in sys.states:
        raise UnknownState(state)
    return state in sys.goals


# -- loading ------------------------------------------------------------------

_DOC_KEYS = {
    "name",
    "input_alphabet",
    "output_alphabet",
    "states",
    "initial",
    "goals",
    "transitions",
}


def load_system(doc: Mapping) -> TransitionSystem:
    """Build a validated TransitionSystem from a parsed spec document."""
    if not isinstance(doc, Mapping):
        raise ParseError("document must be an object")
    missing = _DOC_KEYS - set(doc)
    if "initial" in missing:
        raise NoInitial("document has no initial state")
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    try:
        input_alphabet = Alphabet(_str_list(doc["input_alphabet"], "input_alphabet"))
        output_alphabet = Alphabet(_str_list(doc["output_alphabet"], "output_alphabet"))
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None
    states = _str_list(doc["states"], "states")
    initial = doc["initial"]
    if not isinstance(initial, str) or not initial:
        raise NoInitial("initial state must be a non-empty state id")
    goals = _str_list(doc["goals"], "goals")
    raw = doc["transitions"]
    if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
        raise ParseError("transitions must be a list")
    table: dict[tuple[str, str], list[Alternative]] = {}
    for i, entry in enumerate(raw):
        if not isinstance(entry, Mapping) or {"from", "on", "alternatives"} - set(entry):
            raise ParseError(f"transition #{i} needs from/on/alternatives")
        key = (entry["from"], entry["on"])
        if key in table:
            raise ParseError(f"duplicate transition for {key!r}")
        alts = entry["alternatives"]
        if not isinstance(alts, Sequence) or not alts:
            raise ParseError(f"transition #{i} needs a non-empty alternatives list")
        parsed = []
        for alt in alts:
            if not isinstance(alt, Mapping) or {"to", "out"} - set(alt):
                raise ParseError(f"transition #{i} alternative needs to/out")
            parsed.append(Alternative(alt["to"], tuple(_str_list(alt["out"], "out"))))
        table[key] = parsed
    name = doc["name"]
    if not isinstance(name, str):
        raise ParseError("name must be text")
    return TransitionSystem(
        name, states, initial, goals, input_alphabet, output_alphabet, table
    )


def load_system_text(text: str) -> TransitionSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    return load_system(doc)


def load_system_file(path: str) -> TransitionSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return load_system_text(fh.read())


def _str_list(value, label: str) -> list[str]:
    if not isinstance(value, Sequence) or isinstance(value, (str, bytes)):
        raise ParseError(f"{label} must be a list of text tokens")
    out = []
    for item in value:
        if not isinstance(item, str):
            raise ParseError(f"{label} entries must be text")
        out.append(item)
    return out


# -- builtin fixtures ---------------------------------------------------------

LOGIN_DOC = {
    "name": "login",
    "input_alphabet": ["admin", "guest", "pw1", "pw2", "pw3", "letmein", "logout"],
    "output_alphabet": ["PASS?", "WARN", "WELCOME", "BYE"],
    "states": ["WAIT_FOR_USERNAME", "WAIT_FOR_PASSWORD", "LOGGED_IN", "LOGGED_OUT"],
    "initial": "WAIT_FOR_USERNAME",
    "goals": ["LOGGED_IN"],
    "transitions": [
        {
            "from": "WAIT_FOR_USERNAME",
            "on": "admin",
            "alternatives": [{"to": "WAIT_FOR_PASSWORD", "out": ["PASS?"]}],
        },
        {
            "from": "WAIT_FOR_PASSWORD",
            "on": "letmein",
            "alternatives": [{"to": "LOGGED_IN", "out": ["WELCOME"]}],
        },
        {
            "from": "WAIT_FOR_PASSWORD",
            "on": "pw1",
            "alternatives": [{"to": "WAIT_FOR_PASSWORD", "out": ["WARN"]}],
        },
        {
            "from": "WAIT_FOR_PASSWORD",
            "on": "pw2",
            "alternatives": [{"to": "WAIT_FOR_PASSWORD", "out": ["WARN"]}],
        },
        {
            "from": "WAIT_FOR_PASSWORD",
            "on": "pw3",
            "alternatives": [{"to": "WAIT_FOR_PASSWORD", "out": ["WARN"]}],
        },
        {
            "from": "WAIT_FOR_PASSWORD",
            "on": "admin",
            "alternatives": [{"to": "WAIT_FOR_PASSWORD", "out": ["WARN"]}],
        },
        {
            "from": "LOGGED_IN",
            "on": "logout",
            "alternatives": [{"to": "LOGGED_OUT", "out": ["BYE"]}],
        },
    ],
}

# 3-digit code lock: the code is 3-1-4; any wrong digit resets progress.
_LOCKPAD_CODE = ("3", "1", "4")


def _lockpad_doc() -> dict:
    digits = [str(d) for d in range(10)]
    stages = ["S0", "S1", "S2", "OPEN"]
    transitions = []
    for i, good in enumerate(_LOCKPAD_CODE):
        src = stages[i]
        for d in digits:
            if d == good:
                dst = stages[i + 1]
                out = ["OPEN"] if dst == "OPEN" else ["CLICK"]
            else:
                dst, out = "S0", ["NO"]
            transitions.append(
                {"from": src, "on": d, "alternatives": [{"to": dst, "out": out}]}
            )
    return {
        "name": "lockpad",
        "input_alphabet": digits,
        "output_alphabet": ["CLICK", "NO", "OPEN"],
        "states": stages,
        "initial": "S0",
        "goals": ["OPEN"],
        "transitions": transitions,
    }


def _echo_doc() -> dict:
    tokens = ["a", "b", "c"]
    return {
        "name": "echo",
        "input_alphabet": tokens,
        "output_alphabet": tokens,
        "states": ["ECHO"],
        "initial": "ECHO",
        "goals": [],
        "transitions": [
            {"from": "ECHO", "on": t, "alternatives": [{"to": "ECHO", "out": [t]}]}
            for t in tokens
        ],
    }


_BUILTIN_DOCS = {
    "login": lambda: LOGIN_DOC,
    "lockpad": _lockpad_doc,
    "echo": _echo_doc,
}

BUILTIN_NAMES = tuple(sorted(_BUILTIN_DOCS))


def builtin(name: str) -> TransitionSystem:
    """Load one of the bundled fixture systems: login, lockpad, echo."""
    try:
        doc = _BUILTIN_DOCS[name]()
    except KeyError:
        raise UnknownFixture(name) from None
    return load_system(doc)
