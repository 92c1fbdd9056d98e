"""Composes a target system with an attacker policy and records the turns.

A turn is one whole input word answered by one whole output word.  Goal
checking happens after each completed turn; an undefined step aborts the
turn and discards its partial output so every recorded turn stays a
complete pair.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import AlphabetMismatch, OutputMismatch, ParseError, UndefinedInput
from .policy import Policy, Send, Stop
from .symbols import Word, validate_word
from .system import ChoiceResolver, TransitionSystem, is_goal, run_word

Turn = tuple[Word, Word]
Transcript = tuple[Turn, ...]


class Outcome(enum.Enum):
    GOAL_REACHED = "GoalReached"
    POLICY_STOPPED = "PolicyStopped"
    STEP_LIMIT = "StepLimit"
    UNDEFINED_INPUT = "UndefinedInput"


@dataclass(frozen=True)
class SessionLimits:
    max_turns: int = 64
    max_total_symbols: int = 4096
    stop_on_goal: bool = True

    def __post_init__(self):
        if self.max_turns < 1 or self.max_total_symbols < 1:
            raise ValueError("session limits must be positive")


@dataclass
class SessionResult:
    transcript: Transcript
    final_state: str
    outcome: Outcome
    turns_used: int
    undefined_turn: int | None = None

    @property
    def outcome_text(self) -> str:
        if self.outcome is Outcome.UNDEFINED_INPUT:
            return f"{self.outcome.value}:{self.undefined_turn}"
        return self.outcome.value


def run_session(
    sys: TransitionSystem,
    policy: Policy,
    limits: SessionLimits | None = None,
    seed: int = 0,
) -> SessionResult:
    """Drive the policy/system loop until goal, stop, limit or undefined input."""
    limits = limits or SessionLimits()
    alphabets = getattr(policy, "alphabets", None)
    if alphabets is not None and alphabets != (sys.input_alphabet, sys.output_alphabet):
        raise AlphabetMismatch(
            f"policy alphabets do not match system {sys.name!r}"
        )
    policy.begin_session(sys)
    resolver = ChoiceResolver.seeded(seed)
    state = sys.initial
    turns: list[Turn] = []
    total_symbols = 0
    result: SessionResult | None = None

    if limits.stop_on_goal and is_goal(sys, state):
        result = SessionResult((), state, Outcome.GOAL_REACHED, 0)
    while result is None:
        if len(turns) >= limits.max_turns:
            result = SessionResult(tuple(turns), state, Outcome.STEP_LIMIT, len(turns))
            break
        decision = policy.next_input(tuple(turns))
        if isinstance(decision, Stop):
            result = SessionResult(
                tuple(turns), state, Outcome.POLICY_STOPPED, len(turns)
            )
            break
        if not isinstance(decision, Send):
            raise TypeError(f"policy returned {decision!r}")
        word = decision.word
        validate_word(sys.input_alphabet, word)
        if total_symbols + len(word) > limits.max_total_symbols:
            result = SessionResult(tuple(turns), state, Outcome.STEP_LIMIT, len(turns))
            break
        stepped = run_word(sys, state, word, resolver)
        if stepped is None:
            result = SessionResult(
                tuple(turns),
                state,
                Outcome.UNDEFINED_INPUT,
                len(turns),
                undefined_turn=len(turns),
            )
            break
        state, output = stepped
        turns.append((word, output))
        total_symbols += len(word) + len(output)
        if limits.stop_on_goal and is_goal(sys, state):
            result = SessionResult(
                tuple(turns), state, Outcome.GOAL_REACHED, len(turns)
            )
            break
    policy.end_session(result.outcome_text, is_goal(sys, result.final_state))
    return result


def replay(sys: TransitionSystem, transcript: Sequence[Turn], seed: int = 0) -> SessionResult:
    """Re-drive the system with recorded inputs, checking recorded outputs.

    Raises OutputMismatch or UndefinedInput with the failing turn index;
    on a nondeterministic system a different seed may legitimately mismatch.
    """
    resolver = ChoiceResolver.seeded(seed)
    state = sys.initial
    for k, (word, expected) in enumerate(transcript):
        stepped = run_word(sys, state, word, resolver)
        if stepped is None:
            raise UndefinedInput(k)
        state, output = stepped
        if output != tuple(expected):
            raise OutputMismatch(k)
    outcome = Outcome.GOAL_REACHED if is_goal(sys, state) else Outcome.POLICY_STOPPED
    turns = tuple((tuple(i), tuple(o)) for i, o in transcript)
    return SessionResult(turns, state, outcome, len(turns))


# -- transcript files ---------------------------------------------------------

_OUTCOME_RE = re.compile(r"^(GoalReached|PolicyStopped|StepLimit|UndefinedInput:\d+)$")


def transcript_document(sys: TransitionSystem, result: SessionResult, seed: int) -> dict:
    return {
        "system": sys.name,
        "turns": [[list(i), list(o)] for i, o in result.transcript],
        "outcome": result.outcome_text,
        "final_state": result.final_state,
        "seed": seed,
    }


def render_transcript_document(doc: Mapping) -> str:
    """Stable single-line JSON rendering; equal documents render identically."""
    return json.dumps(doc, ensure_ascii=False) + "\n"


def parse_transcript_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("transcript document must be an object")
    missing = {"system", "turns", "outcome", "final_state", "seed"} - set(doc)
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    if not _OUTCOME_RE.match(str(doc["outcome"])):
        raise ParseError(f"bad outcome {doc['outcome']!r}")
    return doc


def transcript_from_document(doc: Mapping) -> Transcript:
    turns = doc["turns"]
    if not isinstance(turns, Sequence):
        raise ParseError("turns must be a list")
    out: list[Turn] = []
    for k, turn in enumerate(turns):
        if (
            not isinstance(turn, Sequence)
            or isinstance(turn, (str, bytes))
            or len(turn) != 2
        ):
            raise ParseError(f"turn #{k} must be an [input, output] pair")
        i, o = turn
        for side in (i, o):
            if not isinstance(side, Sequence) or isinstance(side, (str, bytes)):
                raise ParseError(f"turn #{k} words must be token lists")
            if not all(isinstance(tok, str) for tok in side):
                raise ParseError(f"turn #{k} tokens must be text")
        out.append((tuple(i), tuple(o)))
    return tuple(out)


def write_transcript_file(path: str, doc: Mapping) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_transcript_document(doc))


def read_transcript_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_transcript_document(fh.read())
