import copy
import random

import pytest

from exploitlab import ChoiceResolver, builtin, is_goal, load_system, run_word, step
from exploitlab.errors import (
    NoInitial,
    NondeterministicChoice,
    ParseError,
    UnknownFixture,
    UnknownState,
    UnknownSymbol,
)
from exploitlab.system import LOGIN_DOC

from generators import rand_defined_word, rand_system


def res(seed=0):
    return ChoiceResolver.seeded(seed)


class TestLoadSystem:
    def test_login_document_loads(self):
        sys = load_system(LOGIN_DOC)
        assert len(sys.states) == 4
        assert sys.initial == "WAIT_FOR_USERNAME"
        assert sys.goals == {"LOGGED_IN"}

    def test_transition_to_undeclared_state(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["transitions"][0]["alternatives"][0]["to"] = "BACKDOOR"
        with pytest.raises(UnknownState):
            load_system(doc)

    def test_empty_goals_is_valid(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["goals"] = []
        sys = load_system(doc)
        assert not sys.goals

    def test_duplicate_from_on_pair(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["transitions"].append(copy.deepcopy(doc["transitions"][0]))
        with pytest.raises(ParseError):
            load_system(doc)

    def test_missing_initial(self):
        doc = {k: v for k, v in LOGIN_DOC.items() if k != "initial"}
        with pytest.raises(NoInitial):
            load_system(doc)

    def test_initial_not_a_state(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["initial"] = "NOWHERE"
        with pytest.raises(UnknownState):
            load_system(doc)

    def test_unknown_input_symbol_in_table(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["transitions"][0]["on"] = "sudo"
        with pytest.raises(UnknownSymbol):
            load_system(doc)

    def test_unknown_output_symbol_in_table(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["transitions"][0]["alternatives"][0]["out"] = ["KABOOM"]
        with pytest.raises(UnknownSymbol):
            load_system(doc)

    def test_empty_alternatives_rejected(self):
        doc = copy.deepcopy(LOGIN_DOC)
        doc["transitions"][0]["alternatives"] = []
        with pytest.raises(ParseError):
            load_system(doc)


class TestStep:
    def test_username_moves_to_password(self, login):
        assert step(login, "WAIT_FOR_USERNAME", "admin", res()) == (
            "WAIT_FOR_PASSWORD",
            ("PASS?",),
        )

    def test_correct_password_logs_in(self, login):
        assert step(login, "WAIT_FOR_PASSWORD", "letmein", res()) == (
            "LOGGED_IN",
            ("WELCOME",),
        )

    def test_undefined_entry_is_a_value(self, login):
        # (LOGGED_IN, admin) has no table entry: scan confirms only logout leaves it
        entries = [sym for (s, sym) in login.transitions if s == "LOGGED_IN"]
        assert entries == ["logout"]
        assert step(login, "LOGGED_IN", "admin", res()) is None

    def test_precondition_violations_raise(self, login):
        with pytest.raises(UnknownSymbol):
            step(login, "WAIT_FOR_USERNAME", "hunter2", res())
        with pytest.raises(UnknownState):
            step(login, "LIMBO", "admin", res())


class TestRunWord:
    def test_composed_example(self, login):
        assert run_word(login, "WAIT_FOR_USERNAME", ("admin", "letmein"), res()) == (
            "LOGGED_IN",
            ("PASS?", "WELCOME"),
        )

    def test_empty_word_is_identity(self, login):
        for state in login.states:
            assert run_word(login, state, (), res()) == (state, ())

    def test_wrong_password_warns(self, login):
        assert run_word(login, "WAIT_FOR_USERNAME", ("admin", "pw1"), res()) == (
            "WAIT_FOR_PASSWORD",
            ("PASS?", "WARN"),
        )

    def test_undefined_step_poisons_whole_word(self, login):
        assert run_word(login, "WAIT_FOR_USERNAME", ("letmein", "admin"), res()) is None

    def test_fold_consistency_on_random_systems(self):
        rng = random.Random(1234)
        for _ in range(50):
            sys = rand_system(rng, deterministic=True)
            u, mid = rand_defined_word(rng, sys, sys.initial)
            v, _ = rand_defined_word(rng, sys, mid)
            whole = run_word(sys, sys.initial, u + v, res())
            first = run_word(sys, sys.initial, u, res())
            second = run_word(sys, mid, v, res())
            assert first is not None and second is not None and whole is not None
            assert whole[0] == second[0]
            assert whole[1] == first[1] + second[1]

    def test_deterministic_results_ignore_seed(self):
        rng = random.Random(99)
        for _ in range(20):
            sys = rand_system(rng, deterministic=True)
            w, _ = rand_defined_word(rng, sys, sys.initial)
            assert run_word(sys, sys.initial, w, res(0)) == run_word(
                sys, sys.initial, w, res(424242)
            )


class TestGoalsAndFixtures:
    def test_goal_membership(self, login):
        assert is_goal(login, "LOGGED_IN")
        assert not is_goal(login, "WAIT_FOR_PASSWORD")

    def test_no_goals_means_never_goal(self, echo):
        assert not any(is_goal(echo, s) for s in echo.states)

    def test_echo_echoes_every_symbol(self, echo):
        for sym in echo.input_alphabet:
            assert step(echo, "ECHO", sym, res()) == ("ECHO", (sym,))

    def test_lockpad_requires_its_code(self, lockpad):
        end, out = run_word(lockpad, "S0", ("3", "1", "4"), res())
        assert end == "OPEN" and out[-1] == "OPEN"
        wrong, _ = run_word(lockpad, "S0", ("3", "9", "4"), res())
        assert wrong != "OPEN"

    def test_unknown_fixture(self):
        with pytest.raises(UnknownFixture):
            builtin("mainframe")

    def test_determinism_flag(self, login, lockpad, echo, coin):
        assert login.deterministic
        assert lockpad.deterministic
        assert echo.deterministic
        assert not coin.deterministic


class TestResolver:
    def test_seeded_choice_sequence_is_reproducible(self, coin):
        seqs = []
        for _ in range(2):
            r = res(7)
            seqs.append([step(coin, "START", "flip", r)[0] for _ in range(20)])
        assert seqs[0] == seqs[1]
        assert {"LUCKY", "UNLUCKY"} == set(seqs[0])

    def test_exhaustive_resolver_refuses_real_choice(self, coin):
        with pytest.raises(NondeterministicChoice):
            step(coin, "START", "flip", ChoiceResolver.exhaustive())

    def test_exhaustive_resolver_fine_when_deterministic(self, login):
        assert step(
            login, "WAIT_FOR_USERNAME", "admin", ChoiceResolver.exhaustive()
        ) == ("WAIT_FOR_PASSWORD", ("PASS?",))
