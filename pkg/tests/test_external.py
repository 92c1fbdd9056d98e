import sys
from pathlib import Path

import pytest

from exploitlab import (
    Send,
    Stop,
    builtin,
    builtin_policy,
    render_transcript_document,
    run_session,
    spawn_external,
    transcript_document,
)
from exploitlab.errors import (
    AlphabetMismatch,
    LaunchFailure,
    ProtocolViolation,
    UnknownSymbol,
    VersionMismatch,
)

MOCK = Path(__file__).parent / "helpers" / "mock_client.py"


def mock_command(mode: str = "scripted") -> str:
    return f"{sys.executable} {MOCK} {mode}"


def alphabets(system):
    return (system.input_alphabet, system.output_alphabet)


@pytest.fixture
def login_sys():
    return builtin("login")


class TestHandshake:
    def test_ready_path(self, login_sys):
        policy = spawn_external(mock_command(), alphabets(login_sys))
        assert policy.name == "mock"
        policy.end_session("PolicyStopped", False)

    def test_wrong_protocol_version(self, login_sys):
        with pytest.raises(VersionMismatch):
            spawn_external(mock_command("bad-version"), alphabets(login_sys))

    def test_garbage_ready(self, login_sys):
        with pytest.raises(ProtocolViolation):
            spawn_external(mock_command("garbage-ready"), alphabets(login_sys))

    def test_out_of_order_ready(self, login_sys):
        with pytest.raises(ProtocolViolation):
            spawn_external(mock_command("wrong-type-ready"), alphabets(login_sys))

    def test_handshake_timeout(self, login_sys):
        from exploitlab.errors import HandshakeTimeout

        with pytest.raises(HandshakeTimeout):
            spawn_external(mock_command("silent"), alphabets(login_sys), timeout=0.3)

    def test_unlaunchable_command(self, login_sys):
        with pytest.raises(LaunchFailure):
            spawn_external("/does/not/exist/client", alphabets(login_sys))


class TestExchanges:
    def test_decisions_match_scripted_behavior(self, login_sys):
        policy = spawn_external(mock_command(), alphabets(login_sys))
        try:
            assert policy.next_input(()) == Send(("admin",))
            history = ((("admin",), ("PASS?",)),)
            assert policy.next_input(history) == Send(("pw1",))
            assert policy.next_input(history + ((("pw1",), ("WARN",)),)) == Send(("pw2",))
        finally:
            policy.end_session("PolicyStopped", False)

    def test_stop_decision(self, login_sys):
        policy = spawn_external(mock_command(), alphabets(login_sys))
        try:
            odd_history = ((("admin",), ("WELCOME",)),)  # no prompt: mock stops
            assert policy.next_input(odd_history) == Stop()
        finally:
            policy.end_session("PolicyStopped", False)

    def test_symbol_outside_alphabet(self, login_sys):
        policy = spawn_external(mock_command("bad-symbol"), alphabets(login_sys))
        try:
            with pytest.raises(UnknownSymbol):
                policy.next_input(())
        finally:
            policy.close()

    def test_empty_word_is_violation(self, login_sys):
        policy = spawn_external(mock_command("empty-word"), alphabets(login_sys))
        try:
            with pytest.raises(ProtocolViolation):
                policy.next_input(())
        finally:
            policy.close()

    def test_garbage_reply_is_violation(self, login_sys):
        policy = spawn_external(mock_command("garbage-observe"), alphabets(login_sys))
        try:
            with pytest.raises(ProtocolViolation):
                policy.next_input(())
        finally:
            policy.close()

    def test_out_of_order_reply_is_violation(self, login_sys):
        policy = spawn_external(mock_command("wrong-type-observe"), alphabets(login_sys))
        try:
            with pytest.raises(ProtocolViolation):
                policy.next_input(())
        finally:
            policy.close()


class TestFullSessions:
    def test_mock_transcript_equals_in_process_policy(self, login_sys):
        external = spawn_external(mock_command(), alphabets(login_sys))
        ext_result = run_session(login_sys, external, seed=0)
        dsl_result = run_session(login_sys, builtin_policy("pw_guesser"), seed=0)
        ext_doc = render_transcript_document(
            transcript_document(login_sys, ext_result, 0)
        )
        dsl_doc = render_transcript_document(
            transcript_document(login_sys, dsl_result, 0)
        )
        assert ext_doc == dsl_doc

    def test_alphabet_mismatch_at_session_start(self, login_sys):
        echo = builtin("echo")
        policy = spawn_external(mock_command(), alphabets(login_sys))
        try:
            with pytest.raises(AlphabetMismatch):
                run_session(echo, policy, seed=0)
        finally:
            policy.close()

    def test_client_exits_cleanly_after_end(self, login_sys):
        policy = spawn_external(mock_command(), alphabets(login_sys))
        run_session(login_sys, policy, seed=0)
        assert policy.proc.wait(timeout=5) == 0
