"""Behavior datasets: (history, next input) samples of a policy's decisions.

Each session turn yields one record pairing the tokenized transcript
prefix with the tokenized decision; a policy's Stop is the empty token
stream.  A lookup table fit on such a dataset is the degenerate
conditional model: it shows the deterministic history-to-input mapping is
representable, nothing more.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .codec import TokenStream, tokenize_transcript, tokenize_word
from .engine import SessionLimits, run_session
from .errors import ParseError
from .policy import History, Policy, PolicyDecision, Send
from .system import TransitionSystem


@dataclass(frozen=True)
class BehaviorRecord:
    episode: int
    turn: int
    history_tokens: TokenStream
    next_tokens: TokenStream  # empty stream encodes Stop


@dataclass
class Dataset:
    header: dict
    records: list[BehaviorRecord] = field(default_factory=list)

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header, ensure_ascii=False)]
        lines.extend(
            json.dumps(
                {
                    "episode": r.episode,
                    "turn": r.turn,
                    "history": r.history_tokens,
                    "next": r.next_tokens,
                },
                ensure_ascii=False,
            )
            for r in self.records
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Dataset":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ParseError("dataset needs a header line")
        try:
            header = json.loads(lines[0])
            rows = [json.loads(line) for line in lines[1:]]
        except json.JSONDecodeError as exc:
            raise ParseError(f"not valid JSON: {exc}") from None
        records = []
        for row in rows:
            try:
                records.append(
                    BehaviorRecord(row["episode"], row["turn"], row["history"], row["next"])
                )
            except (KeyError, TypeError) as exc:
                raise ParseError(f"bad record {row!r}: {exc}") from None
        return cls(header, records)


class _RecordingPolicy(Policy):
    """Wraps a policy and logs every (history, decision) it makes."""

    def __init__(self, inner: Policy):
        self.inner = inner
        self.log: list[tuple[History, PolicyDecision]] = []
        self.name = getattr(inner, "name", "policy")
        self.deterministic = getattr(inner, "deterministic", False)
        self.alphabets = getattr(inner, "alphabets", None)

    def begin_session(self, system) -> None:
        self.inner.begin_session(system)

    def next_input(self, history: History) -> PolicyDecision:
        decision = self.inner.next_input(history)
        self.log.append((history, decision))
        return decision

    def end_session(self, outcome: str, final_goal: bool) -> None:
        self.inner.end_session(outcome, final_goal)


def export_behavior_dataset(
    sys: TransitionSystem,
    policy: Policy,
    episodes: int,
    limits: SessionLimits | None = None,
    base_seed: int = 0,
) -> Dataset:
    """Run sessions with seeds base_seed..base_seed+episodes-1, log decisions."""
    header = {
        "system": sys.name,
        "policy": getattr(policy, "name", "policy"),
        "input_alphabet": list(sys.input_alphabet.tokens),
        "output_alphabet": list(sys.output_alphabet.tokens),
        "base_seed": base_seed,
        "deterministic": bool(getattr(policy, "deterministic", False)),
    }
    dataset = Dataset(header)
    for episode in range(episodes):
        recorder = _RecordingPolicy(policy)
        run_session(sys, recorder, limits, seed=base_seed + episode)
        for history, decision in recorder.log:
            next_tokens = (
                tokenize_word(sys.input_alphabet, decision.word)
                if isinstance(decision, Send)
                else ""
            )
            dataset.records.append(
                BehaviorRecord(
                    episode=episode,
                    turn=len(history),
                    history_tokens=tokenize_transcript(
                        history, sys.input_alphabet, sys.output_alphabet
                    ),
                    next_tokens=next_tokens,
                )
            )
    return dataset


@dataclass
class LookupPredictor:
    """Exact-match memory of a dataset; anything unseen is an abstention."""

    table: dict[TokenStream, TokenStream]
    conflicts: int = 0

    @property
    def coverage(self) -> int:
        return len(self.table)

    def predict(self, history_tokens: TokenStream) -> TokenStream | None:
        return self.table.get(history_tokens)


def fit_lookup(dataset: Dataset) -> LookupPredictor:
    """Map each distinct history to its last-seen next; count disagreements."""
    table: dict[TokenStream, TokenStream] = {}
    conflicts = 0
    for record in dataset.records:
        prior = table.get(record.history_tokens)
        if prior is not None and prior != record.next_tokens:
            conflicts += 1
        table[record.history_tokens] = record.next_tokens
    return LookupPredictor(table, conflicts)


@dataclass(frozen=True)
class EvalReport:
    records: int
    matches: int
    abstains: int

    @property
    def rate(self) -> float:
        if self.records == 0:
            return 1.0  # vacuous
        return self.matches / self.records


def eval_exact_match(pred: LookupPredictor, dataset: Dataset) -> EvalReport:
    matches = 0
    abstains = 0
    for record in dataset.records:
        guess = pred.predict(record.history_tokens)
        if guess is None:
            abstains += 1
        elif guess == record.next_tokens:
            matches += 1
    return EvalReport(len(dataset.records), matches, abstains)
