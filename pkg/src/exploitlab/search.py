"""Goal-reaching input words: reachability, shortest witnesses, enumeration.

Witness search is existential: a word counts when at least one branch of
its run tree ends in a goal state.  Membership checking reports the
universal reading too.  Goal states may have outgoing transitions, so no
prefix closure is assumed anywhere.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded
from .symbols import Word, validate_word
from .system import TransitionSystem

DEFAULT_BUDGET = 10**6


class Membership(enum.Enum):
    SURELY = "Surely"
    POSSIBLY = "Possibly"
    NEVER = "Never"


@dataclass(frozen=True)
class WitnessResult:
    word: Word | None
    length: int
    visited_states: int


def reachable_states(sys: TransitionSystem) -> frozenset[str]:
    """Least set containing the initial state and closed under all alternatives."""
    seen = {sys.initial}
    frontier = deque([sys.initial])
    while frontier:
        state = frontier.popleft()
        for sym in sys.input_alphabet:
            for alt in sys.transitions.get((state, sym), ()):
                if alt.to not in seen:
                    seen.add(alt.to)
                    frontier.append(alt.to)
    return frozenset(seen)


def shortest_witness(
    sys: TransitionSystem, max_len: int, budget: int = DEFAULT_BUDGET
) -> WitnessResult:
    """Shortest (then lexicographically least) goal-reaching word, if any.

    Breadth-first over system states with input symbols as edge labels.
    Each layer groups the states first discovered by the same word;
    walking groups in word order and symbols in declaration order makes
    candidate words come out lexicographically, so the first goal hit is
    the tie-break winner.  (Per-state queues would get this wrong on
    nondeterministic systems, where one word discovers several states.)
    """
    if sys.initial in sys.goals:
        return WitnessResult((), 0, 1)
    visited = {sys.initial}
    layer: list[tuple[Word, list[str]]] = [((), [sys.initial])]
    expansions = 0
    for _ in range(max_len):
        nxt: list[tuple[Word, list[str]]] = []
        for word, states in layer:
            for sym in sys.input_alphabet:
                expansions += len(states)
                if expansions > budget:
                    raise BudgetExceeded(f"witness search frontier beyond {budget}")
                discovered: list[str] = []
                for state in states:
                    for alt in sys.transitions.get((state, sym), ()):
                        if alt.to not in visited:
                            visited.add(alt.to)
                            discovered.append(alt.to)
                if not discovered:
                    continue
                extended = word + (sym,)
                if any(s in sys.goals for s in discovered):
                    return WitnessResult(extended, len(extended), len(visited))
                nxt.append((extended, discovered))
        layer = nxt
    return WitnessResult(None, 0, len(visited))


def enumerate_exploits(
    sys: TransitionSystem, max_len: int, budget: int = DEFAULT_BUDGET
) -> list[Word]:
    """All goal-reaching words up to max_len, shortest first, then lexicographic.

    Tracks the set of states reachable by complete runs of each candidate
    prefix; prefixes with no surviving run cannot be extended into members.
    """
    if len(sys.input_alphabet) ** max_len > budget:
        raise BudgetExceeded(
            f"{len(sys.input_alphabet)}^{max_len} candidate words exceed {budget}"
        )
    results: list[Word] = []
    if sys.initial in sys.goals:
        results.append(())
    level: list[tuple[Word, frozenset[str]]] = [((), frozenset([sys.initial]))]
    expansions = 0
    for _ in range(max_len):
        nxt: list[tuple[Word, frozenset[str]]] = []
        for word, frontier in level:
            for sym in sys.input_alphabet:
                expansions += 1
                if expansions > budget:
                    raise BudgetExceeded(f"enumeration frontier beyond {budget}")
                targets = frozenset(
                    alt.to
                    for state in frontier
                    for alt in sys.transitions.get((state, sym), ())
                )
                if not targets:
                    continue
                extended = word + (sym,)
                if targets & sys.goals:
                    results.append(extended)
                nxt.append((extended, targets))
        level = nxt
    return results


def check_membership(
    sys: TransitionSystem, w: Sequence[str], budget: int = DEFAULT_BUDGET
) -> Membership:
    """Classify a word by its run tree.

    Surely: every branch survives the whole word and ends in a goal.
    Possibly: some branch ends in a goal, others die or end elsewhere.
    Never: no branch ends in a goal (undefined steps count as non-goal).
    """
    validate_word(sys.input_alphabet, w)
    frontier: frozenset[str] = frozenset([sys.initial])
    any_dead = False
    nodes = 1
    for sym in w:
        targets = set()
        for state in frontier:
            alts = sys.transitions.get((state, sym))
            if alts is None:
                any_dead = True
            else:
                targets.update(alt.to for alt in alts)
        nodes += len(targets)
        if nodes > budget:
            raise BudgetExceeded(f"run tree beyond {budget} nodes")
        frontier = frozenset(targets)
        if not frontier:
            return Membership.NEVER
    if not frontier & sys.goals:
        return Membership.NEVER
    if any_dead or frontier - sys.goals:
        return Membership.POSSIBLY
    return Membership.SURELY


def witness_document(result: WitnessResult) -> dict:
    return {
        "witness": None if result.word is None else list(result.word),
        "length": result.length,
        "visited": result.visited_states,
    }


def enumeration_document(max_len: int, exploits: Sequence[Word]) -> dict:
    return {"max_len": max_len, "exploits": [list(w) for w in exploits]}
