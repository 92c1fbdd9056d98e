"""Command-line surface for batch experiments.

Exit codes follow one contract everywhere: 0 when a goal was reached (or
the command simply succeeded), 1 when a session or search ended without a
goal, 2 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

from . import codec, engine, learnability, search
from .errors import ExploitLabError
from .policy import (
    BUILTIN_POLICY_TEXTS,
    History,
    Policy,
    PolicyDecision,
    RandomPolicy,
    Send,
    Stop,
    builtin_policy,
    parse_policy,
    spawn_external,
)
from .system import BUILTIN_NAMES, TransitionSystem, builtin, load_system_file


class UsageError(Exception):
    pass


def _resolve_system(source: str) -> TransitionSystem:
    if source in BUILTIN_NAMES:
        return builtin(source)
    if source.endswith(".json"):
        return load_system_file(source)
    raise UsageError(
        f"unknown system {source!r}: expected one of {', '.join(BUILTIN_NAMES)} "
        "or a .sys.json path"
    )


class HumanPolicy(Policy):
    """Terminal-driven policy: the user types one input word per turn."""

    name = "human"
    deterministic = False

    def __init__(self, system: TransitionSystem, out=None, input_fn=None):
        self.system = system
        self.out = out
        self.input_fn = input_fn

    def _read(self, prompt: str) -> str:
        if self.input_fn is not None:
            return self.input_fn(prompt)
        return input(prompt)

    def next_input(self, history: History) -> PolicyDecision:
        out = self.out if self.out is not None else _sys.stdout
        if history:
            print(f"output: {' '.join(history[-1][1])}", file=out)
        else:
            print(f"session start against {self.system.name!r}", file=out)
        while True:
            try:
                line = self._read("> ")
            except EOFError:
                return Stop()
            if line.strip() == ":quit":
                return Stop()
            word = tuple(line.split())
            if not word:
                print("type one whitespace-separated word, or :quit", file=out)
                continue
            bad = [s for s in word if s not in self.system.input_alphabet]
            if bad:
                tokens = " ".join(self.system.input_alphabet.tokens)
                print(f"unknown symbol {bad[0]!r}; alphabet: {tokens}", file=out)
                continue
            return Send(word)


def _resolve_policy(source: str, system: TransitionSystem, timeout: float) -> Policy:
    if source == "human":
        return HumanPolicy(system)
    if source.startswith("random:"):
        try:
            seed = int(source.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad random policy seed in {source!r}") from None
        return RandomPolicy(seed)
    if source.startswith("external:"):
        command = source.split(":", 1)[1]
        return spawn_external(
            command, (system.input_alphabet, system.output_alphabet), timeout=timeout
        )
    if source in BUILTIN_POLICY_TEXTS:
        return builtin_policy(source)
    try:
        with open(source, "r", encoding="utf-8") as fh:
            return parse_policy(fh.read())
    except FileNotFoundError:
        raise UsageError(
            f"unknown policy {source!r}: expected a DSL path, a builtin "
            f"({', '.join(sorted(BUILTIN_POLICY_TEXTS))}), random:<seed>, "
            "external:<command>, or human"
        ) from None


def _limits(args) -> engine.SessionLimits:
    return engine.SessionLimits(
        max_turns=args.max_turns,
        max_total_symbols=args.max_symbols,
        stop_on_goal=not args.no_stop_on_goal,
    )


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def cmd_simulate(args) -> int:
    system = _resolve_system(args.system)
    policy = _resolve_policy(args.policy, system, args.timeout)
    try:
        result = engine.run_session(system, policy, _limits(args), seed=args.seed)
    finally:
        _close_policy(policy)
    doc = engine.transcript_document(system, result, args.seed)
    _emit(engine.render_transcript_document(doc), args.out)
    return 0 if result.outcome is engine.Outcome.GOAL_REACHED else 1


def _close_policy(policy) -> None:
    close = getattr(policy, "close", None)
    if close is not None:
        close()


def cmd_play(args) -> int:
    system = _resolve_system(args.system)
    policy = HumanPolicy(system)
    result = engine.run_session(system, policy, _limits(args), seed=args.seed)
    if result.outcome is engine.Outcome.GOAL_REACHED:
        print(f"*** GOAL REACHED: {result.final_state} ***")
    else:
        print(f"session over: {result.outcome_text} in state {result.final_state}")
    if args.out:
        doc = engine.transcript_document(system, result, args.seed)
        _emit(engine.render_transcript_document(doc), args.out)
    return 0 if result.outcome is engine.Outcome.GOAL_REACHED else 1


def cmd_search(args) -> int:
    system = _resolve_system(args.system)
    if args.enumerate:
        exploits = search.enumerate_exploits(system, args.max_len, budget=args.budget)
        doc = search.enumeration_document(args.max_len, exploits)
        _emit(_json_line(doc), args.out)
        return 0
    result = search.shortest_witness(system, args.max_len, budget=args.budget)
    _emit(_json_line(search.witness_document(result)), args.out)
    return 0 if result.word is not None else 1


def cmd_encode(args) -> int:
    doc = engine.read_transcript_file(args.transcript)
    transcript = engine.transcript_from_document(doc)
    if args.mode == "gamma":
        text = codec.render_gamma(codec.encode_transcript(transcript))
    else:
        # token streams number symbols, so this mode needs the alphabets
        system = _resolve_system(args.system if args.system else doc["system"])
        text = codec.tokenize_transcript(
            transcript, system.input_alphabet, system.output_alphabet
        )
    _emit(text + "\n", args.out)
    return 0


def cmd_decode(args) -> int:
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = _sys.stdin.read()
    if text.endswith("\n"):
        text = text[:-1]  # the single newline cmd_encode appends
    system = _resolve_system(args.system)
    if args.mode == "gamma":
        gamma = codec.parse_gamma(text, system.input_alphabet, system.output_alphabet)
        transcript = codec.decode_transcript(
            gamma, system.input_alphabet, system.output_alphabet
        )
    else:
        transcript = codec.detokenize_transcript(
            text, system.input_alphabet, system.output_alphabet
        )
    if args.final_state and args.outcome:
        final_state, outcome = args.final_state, args.outcome
    else:
        replayed = engine.replay(system, transcript, seed=args.seed)
        final_state = args.final_state or replayed.final_state
        outcome = args.outcome or replayed.outcome_text
    doc = {
        "system": system.name,
        "turns": [[list(i), list(o)] for i, o in transcript],
        "outcome": outcome,
        "final_state": final_state,
        "seed": args.seed,
    }
    text = engine.render_transcript_document(doc)
    engine.parse_transcript_document(text)  # outputs must re-parse as inputs
    _emit(text, args.out)
    return 0


def cmd_export(args) -> int:
    system = _resolve_system(args.system)
    policy = _resolve_policy(args.policy, system, args.timeout)
    try:
        dataset = learnability.export_behavior_dataset(
            system, policy, args.episodes, _limits(args), base_seed=args.seed
        )
    finally:
        _close_policy(policy)
    _emit(dataset.to_jsonl(), args.out)
    return 0


def cmd_eval(args) -> int:
    with open(args.dataset, "r", encoding="utf-8") as fh:
        dataset = learnability.Dataset.from_jsonl(fh.read())
    predictor = learnability.fit_lookup(dataset)
    report = learnability.eval_exact_match(predictor, dataset)
    doc = {
        "records": report.records,
        "matches": report.matches,
        "abstains": report.abstains,
        "conflicts": predictor.conflicts,
        "coverage": predictor.coverage,
        "rate": report.rate,
    }
    _emit(_json_line(doc), args.out)
    return 0


def _json_line(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False) + "\n"


def _add_session_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-turns", type=int, default=64)
    p.add_argument("--max-symbols", type=int, default=4096)
    p.add_argument("--no-stop-on-goal", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=10.0,
                   help="per-exchange timeout for external policies (seconds)")
    p.add_argument("--out", help="write the output document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exploitlab",
        description="Simulate attacker policies against toy transition systems, "
        "encode the transcripts, and search for goal-reaching input words.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one policy/system session")
    p.add_argument("--system", required=True)
    p.add_argument("--policy", required=True)
    _add_session_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("play", help="interactive session; you are the policy")
    p.add_argument("--system", required=True)
    _add_session_flags(p)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("search", help="shortest witness or exploit enumeration")
    p.add_argument("--system", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--budget", type=int, default=search.DEFAULT_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("encode", help="render a transcript file as gamma or tokens")
    p.add_argument("--transcript", required=True)
    p.add_argument("--mode", choices=["gamma", "tokens"], default="gamma")
    p.add_argument("--system", help="override the system named in the file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="rebuild a transcript file from encoded text")
    p.add_argument("--system", required=True)
    p.add_argument("--mode", choices=["gamma", "tokens"], default="gamma")
    p.add_argument("--in", dest="infile", help="encoded text file (default stdin)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outcome", help="outcome text for the rebuilt document")
    p.add_argument("--final-state", help="final state for the rebuilt document")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("export", help="export a (history, next input) dataset")
    p.add_argument("--system", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--episodes", type=int, default=1)
    _add_session_flags(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("eval", help="fit the lookup baseline and score a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ExploitLabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
