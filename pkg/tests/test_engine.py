import random

import pytest

from exploitlab import (
    Outcome,
    SessionLimits,
    builtin_policy,
    parse_policy,
    parse_transcript_document,
    render_transcript_document,
    replay,
    run_session,
    transcript_document,
    transcript_from_document,
)
from exploitlab.errors import OutputMismatch, UndefinedInput, UnknownSymbol
from exploitlab.system import ChoiceResolver, run_word

from generators import rand_defined_word, rand_system

EXPECTED_LOGIN_TRANSCRIPT = (
    (("admin",), ("PASS?",)),
    (("pw1",), ("WARN",)),
    (("pw2",), ("WARN",)),
    (("letmein",), ("WELCOME",)),
)


class TestRunSession:
    def test_guesser_breaks_into_login(self, login):
        result = run_session(login, builtin_policy("pw_guesser"), seed=17)
        assert result.outcome is Outcome.GOAL_REACHED
        assert result.transcript == EXPECTED_LOGIN_TRANSCRIPT
        assert result.final_state == "LOGGED_IN"
        assert result.turns_used == 4

    def test_immediate_stop(self, echo):
        result = run_session(echo, builtin_policy("stopper"), seed=0)
        assert result.outcome is Outcome.POLICY_STOPPED
        assert result.transcript == ()
        assert result.turns_used == 0

    def test_undefined_input_on_first_turn(self, login):
        policy = parse_policy("policy eager\nrule when always do send [letmein]\n")
        result = run_session(login, policy, seed=0)
        assert result.outcome is Outcome.UNDEFINED_INPUT
        assert result.undefined_turn == 0
        assert result.transcript == ()
        assert result.final_state == "WAIT_FOR_USERNAME"
        assert result.outcome_text == "UndefinedInput:0"

    def test_turn_limit(self, echo):
        policy = parse_policy("policy chatter\nrule when always do send [a]\n")
        result = run_session(echo, policy, SessionLimits(max_turns=3), seed=0)
        assert result.outcome is Outcome.STEP_LIMIT
        assert result.turns_used == 3

    def test_symbol_budget(self, echo):
        policy = parse_policy("policy chatter\nrule when always do send [a b c]\n")
        limits = SessionLimits(max_turns=64, max_total_symbols=13)
        result = run_session(echo, policy, limits, seed=0)
        # each turn costs 6 symbols; a third turn would cross 13
        assert result.turns_used == 2
        assert result.outcome is Outcome.STEP_LIMIT
        total = sum(len(i) + len(o) for i, o in result.transcript)
        assert total <= limits.max_total_symbols

    def test_policy_symbol_outside_alphabet(self, login):
        policy = parse_policy("policy wild\nrule when always do send [sudo]\n")
        with pytest.raises(UnknownSymbol):
            run_session(login, policy, seed=0)

    def test_goal_checked_after_whole_turn(self, login):
        policy = parse_policy(
            "policy overshooter\nrule when turn == 0 do send [admin letmein logout]\n"
            "rule when always do stop\n"
        )
        result = run_session(login, policy, seed=0)
        # the turn passes through the goal mid-word and leaves it again
        assert result.outcome is Outcome.POLICY_STOPPED
        assert result.final_state == "LOGGED_OUT"

    def test_stop_on_goal_false_keeps_going(self, login):
        policy = parse_policy(
            "policy through\nrule when turn == 0 do send [admin letmein]\n"
            "rule when turn == 1 do send [logout]\nrule when always do stop\n"
        )
        limits = SessionLimits(stop_on_goal=False)
        result = run_session(login, policy, limits, seed=0)
        assert result.final_state == "LOGGED_OUT"
        assert result.turns_used == 2

    def test_no_turns_recorded_after_first_goal_entry(self, echo):
        import copy

        from exploitlab.system import load_system
        from exploitlab.system import _echo_doc

        doc = copy.deepcopy(_echo_doc())
        doc["states"].append("DONE")
        doc["goals"] = ["DONE"]
        doc["transitions"][0]["alternatives"][0]["to"] = "DONE"  # 'a' wins at once
        sys = load_system(doc)
        policy = parse_policy("policy chatter\nrule when always do send [a]\n")
        result = run_session(sys, policy, seed=0)
        assert result.outcome is Outcome.GOAL_REACHED
        assert result.turns_used == 1

    def test_goal_at_initial_state(self, login):
        import copy

        from exploitlab.system import LOGIN_DOC, load_system

        doc = copy.deepcopy(LOGIN_DOC)
        doc["goals"] = ["WAIT_FOR_USERNAME"]
        sys = load_system(doc)
        result = run_session(sys, builtin_policy("pw_guesser"), seed=0)
        assert result.outcome is Outcome.GOAL_REACHED
        assert result.turns_used == 0

    def test_nondeterministic_session_reproducible_per_seed(self, coin):
        from exploitlab import RandomPolicy

        runs = []
        for _ in range(2):
            policy = RandomPolicy(seed=5, max_word_len=1)
            result = run_session(coin, policy, SessionLimits(max_turns=6), seed=21)
            runs.append((result.transcript, result.final_state, result.outcome))
        assert runs[0] == runs[1]

    def test_reproducible_documents(self, login):
        docs = []
        for _ in range(2):
            policy = builtin_policy("pw_guesser")
            result = run_session(login, policy, SessionLimits(), seed=5)
            doc = transcript_document(login, result, 5)
            docs.append(render_transcript_document(doc))
        assert docs[0] == docs[1]

    def test_transcript_agrees_with_run_word_fold(self):
        rng = random.Random(88)
        for _ in range(30):
            sys = rand_system(rng, deterministic=True)
            w, _ = rand_defined_word(rng, sys, sys.initial, max_len=3)
            if not w:
                continue
            text = "policy walk\nrule when turn == 0 do send [%s]\nrule when always do stop\n" % " ".join(w)
            result = run_session(sys, parse_policy(text), SessionLimits(stop_on_goal=False), seed=0)
            folded = run_word(sys, sys.initial, w, ChoiceResolver.seeded(0))
            assert folded is not None
            assert result.final_state == folded[0]
            outputs = tuple(s for _, o in result.transcript for s in o)
            assert outputs == folded[1]


class TestReplay:
    def test_replay_of_recorded_session(self, login):
        recorded = run_session(login, builtin_policy("pw_guesser"), seed=3)
        replayed = replay(login, recorded.transcript, seed=3)
        assert replayed.final_state == recorded.final_state
        assert replayed.transcript == recorded.transcript

    def test_altered_output_mismatches(self, login):
        recorded = run_session(login, builtin_policy("pw_guesser"), seed=3)
        tampered = list(recorded.transcript)
        tampered[1] = (tampered[1][0], ("WELCOME",))
        with pytest.raises(OutputMismatch) as err:
            replay(login, tampered, seed=3)
        assert err.value.turn == 1

    def test_replay_undefined_input(self, login):
        with pytest.raises(UndefinedInput) as err:
            replay(login, ((("letmein",), ()),), seed=0)
        assert err.value.turn == 0

    def test_nondeterministic_replay_can_mismatch(self, coin):
        transcript = ((("flip",), ("heads",)),)
        hits = []
        for seed in range(30):
            try:
                replay(coin, transcript, seed=seed)
                hits.append(seed)
            except OutputMismatch:
                pass
        assert hits and len(hits) < 30  # some seeds agree, some do not


class TestTranscriptDocuments:
    def test_document_round_trip(self, login):
        result = run_session(login, builtin_policy("pw_guesser"), seed=11)
        doc = transcript_document(login, result, 11)
        text = render_transcript_document(doc)
        parsed = parse_transcript_document(text)
        assert parsed == doc
        assert transcript_from_document(parsed) == result.transcript

    def test_bad_outcome_text_rejected(self):
        from exploitlab.errors import ParseError

        with pytest.raises(ParseError):
            parse_transcript_document(
                '{"system":"x","turns":[],"outcome":"Meh","final_state":"s","seed":0}'
            )
