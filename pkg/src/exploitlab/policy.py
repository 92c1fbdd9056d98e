"""Attacker policies: procedures from interaction history to the next input.

Three families ship here.  Scripted policies are parsed from a small rule
DSL whose text form is the policy's canonical finite encoding; random
policies draw reproducible words from a seed; external policies host an
outside process speaking a line-delimited JSON protocol over stdio.

DSL, one declaration or rule per line, ``#`` starts a comment:

    policy <name>
    list <name> = <sym> <sym> ...
    rule when <cond> do <action>

    cond   := always | turn == <n> | last_output contains <sym>
            | last_output is [<sym> ...] | exhausted <list>
    action := send [<sym> ...] | send next <list> | stop

Rules are tried top-down each turn and the first rule whose condition
holds fires.  ``send next`` emits the named list's cursor element and
advances the cursor; when the list is exhausted the rule falls through
and scanning continues with the next rule.  If no rule fires the policy
stops.  Symbols and names are whitespace-free and must not contain
``#``, ``[`` or ``]``.
"""

from __future__ import annotations

import json
import queue
import random
import re
import shlex
import subprocess
import threading
from dataclasses import dataclass, field
from typing import Union

from .errors import (
    AlphabetMismatch,
    EmptyRuleSet,
    HandshakeTimeout,
    LaunchFailure,
    PolicySyntaxError,
    ProtocolViolation,
    UnknownList,
    VersionMismatch,
)
from .symbols import Alphabet, Word, validate_word

# History handed to a policy: the transcript prefix as (input, output) turns.
History = tuple[tuple[Word, Word], ...]

PROTOCOL_VERSION = 1


@dataclass(frozen=True)
class Send:
    word: Word

    def __post_init__(self):
        if not self.word:
            raise ValueError("Send word must be non-empty")


@dataclass(frozen=True)
class Stop:
    pass


PolicyDecision = Union[Send, Stop]


class Policy:
    """Base interface; subclasses supply next_input, a name, and whether
    their decisions are deterministic."""

    def begin_session(self, system) -> None:
        """Hook called once before a session starts; resets mutable state."""

    def next_input(self, history: History) -> PolicyDecision:
        raise NotImplementedError

    def end_session(self, outcome: str, final_goal: bool) -> None:
        """Hook called once after the session ends."""


# -- scripted DSL policies ----------------------------------------------------

@dataclass(frozen=True)
class Always:
    def holds(self, history: History, cursors) -> bool:
        return True


@dataclass(frozen=True)
class TurnEquals:
    n: int

    def holds(self, history: History, cursors) -> bool:
        return len(history) == self.n


@dataclass(frozen=True)
class LastOutputContains:
    sym: str

    def holds(self, history: History, cursors) -> bool:
        return bool(history) and self.sym in history[-1][1]


@dataclass(frozen=True)
class LastOutputIs:
    word: Word

    def holds(self, history: History, cursors) -> bool:
        return bool(history) and history[-1][1] == self.word


@dataclass(frozen=True)
class Exhausted:
    list_name: str

    def holds(self, history: History, cursors) -> bool:
        return cursors.exhausted(self.list_name)


@dataclass(frozen=True)
class SendWord:
    word: Word


@dataclass(frozen=True)
class SendNext:
    list_name: str


@dataclass(frozen=True)
class StopAction:
    pass


Condition = Union[Always, TurnEquals, LastOutputContains, LastOutputIs, Exhausted]
Action = Union[SendWord, SendNext, StopAction]


@dataclass(frozen=True)
class Rule:
    condition: Condition
    action: Action


class _Cursors:
    """Per-list read positions; the only mutable part of a scripted policy."""

    def __init__(self, lists: dict[str, Word]):
        self._lists = lists
        self.positions = {name: 0 for name in lists}

    def exhausted(self, name: str) -> bool:
        return self.positions[name] >= len(self._lists[name])

    def take(self, name: str) -> str | None:
        pos = self.positions[name]
        items = self._lists[name]
        if pos >= len(items):
            return None
        self.positions[name] = pos + 1
        return items[pos]


@dataclass(eq=True)
class ScriptedPolicy(Policy):
    """Rule-list policy; structurally equal iff name, lists and rules agree."""

    name: str
    lists: tuple[tuple[str, Word], ...]
    rules: tuple[Rule, ...]
    source_text: str = field(compare=False, default="")
    deterministic = True

    def __post_init__(self):
        self._list_map = dict(self.lists)
        self.cursors = _Cursors(self._list_map)
        if not self.source_text:
            self.source_text = serialize_policy(self)

    def begin_session(self, system) -> None:
        self.cursors = _Cursors(self._list_map)

    def next_input(self, history: History) -> PolicyDecision:
        for rule in self.rules:
            if not rule.condition.holds(history, self.cursors):
                continue
            act = rule.action
            if isinstance(act, StopAction):
                return Stop()
            if isinstance(act, SendWord):
                return Send(act.word)
            item = self.cursors.take(act.list_name)
            if item is None:
                continue  # exhausted list: fall through to later rules
            return Send((item,))
        return Stop()


_NAME_RE = re.compile(r"[^\s#\[\]]+")


def _check_lexeme(text: str, what: str, line_no: int) -> str:
    if not _NAME_RE.fullmatch(text):
        raise PolicySyntaxError(f"bad {what} {text!r}", line_no)
    return text


def _split_symbols(text: str, line_no: int) -> Word:
    return tuple(_check_lexeme(tok, "symbol", line_no) for tok in text.split())


class _LineParser:
    """Tokenizes one rule line, keeping [bracketed] groups intact."""

    def __init__(self, line: str, line_no: int):
        self.tokens: list[tuple[str, str]] = []  # (kind, text); kind word|group
        self.line_no = line_no
        i, n = 0, len(line)
        while i < n:
            ch = line[i]
            if ch.isspace():
                i += 1
            elif ch == "[":
                end = line.find("]", i + 1)
                if end < 0:
                    raise PolicySyntaxError("unterminated '['", line_no)
                self.tokens.append(("group", line[i + 1 : end]))
                i = end + 1
            elif ch == "]":
                raise PolicySyntaxError("unmatched ']'", line_no)
            else:
                j = i
                while j < n and not line[j].isspace() and line[j] not in "[]":
                    j += 1
                self.tokens.append(("word", line[i:j]))
                i = j
        self.pos = 0

    def next(self, expect_kind: str | None = None) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            raise PolicySyntaxError("unexpected end of line", self.line_no)
        kind, text = self.tokens[self.pos]
        if expect_kind and kind != expect_kind:
            raise PolicySyntaxError(f"expected {expect_kind}, got {text!r}", self.line_no)
        self.pos += 1
        return kind, text

    def keyword(self, *options: str) -> str:
        _, text = self.next("word")
        if text not in options:
            raise PolicySyntaxError(
                f"expected {' or '.join(options)}, got {text!r}", self.line_no
            )
        return text

    def done(self) -> None:
        if self.pos != len(self.tokens):
            raise PolicySyntaxError(
                f"trailing tokens after {self.tokens[self.pos][1]!r}", self.line_no
            )


def _parse_condition(lp: _LineParser) -> Condition:
    _, head = lp.next("word")
    if head == "always":
        return Always()
    if head == "turn":
        lp.keyword("==")
        _, num = lp.next("word")
        if not num.isdigit():
            raise PolicySyntaxError(f"turn needs a number, got {num!r}", lp.line_no)
        return TurnEquals(int(num))
    if head == "last_output":
        op = lp.keyword("contains", "is")
        if op == "contains":
            _, sym = lp.next("word")
            return LastOutputContains(_check_lexeme(sym, "symbol", lp.line_no))
        _, group = lp.next("group")
        return LastOutputIs(_split_symbols(group, lp.line_no))
    if head == "exhausted":
        _, name = lp.next("word")
        return Exhausted(_check_lexeme(name, "list name", lp.line_no))
    raise PolicySyntaxError(f"unknown condition {head!r}", lp.line_no)


def _parse_action(lp: _LineParser) -> Action:
    _, head = lp.next("word")
    if head == "stop":
        return StopAction()
    if head == "send":
        kind, text = lp.next()
        if kind == "group":
            syms = _split_symbols(text, lp.line_no)
            if not syms:
                raise PolicySyntaxError("send needs a non-empty word", lp.line_no)
            return SendWord(syms)
        if text == "next":
            _, name = lp.next("word")
            return SendNext(_check_lexeme(name, "list name", lp.line_no))
        raise PolicySyntaxError(f"expected [word] or next, got {text!r}", lp.line_no)
    raise PolicySyntaxError(f"unknown action {head!r}", lp.line_no)


def parse_policy(text: str) -> ScriptedPolicy:
    """Parse DSL text into a ScriptedPolicy with canonical source_text."""
    name: str | None = None
    lists: list[tuple[str, Word]] = []
    list_names: set[str] = set()
    rules: list[tuple[Rule, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "policy":
            parts = line.split()
            if len(parts) != 2:
                raise PolicySyntaxError("policy line needs exactly one name", line_no)
            if name is not None:
                raise PolicySyntaxError("duplicate policy line", line_no)
            name = _check_lexeme(parts[1], "policy name", line_no)
        elif head == "list":
            parts = line.split(None, 2)
            if len(parts) < 2:
                raise PolicySyntaxError("list line needs a name", line_no)
            list_name = _check_lexeme(parts[1], "list name", line_no)
            if list_name in list_names:
                raise PolicySyntaxError(f"duplicate list {list_name!r}", line_no)
            rest = parts[2] if len(parts) == 3 else ""
            if not rest.startswith("="):
                raise PolicySyntaxError("list line needs '='", line_no)
            items = _split_symbols(rest[1:], line_no)
            list_names.add(list_name)
            lists.append((list_name, items))
        elif head == "rule":
            lp = _LineParser(line, line_no)
            lp.keyword("rule")
            lp.keyword("when")
            cond = _parse_condition(lp)
            lp.keyword("do")
            action = _parse_action(lp)
            lp.done()
            rules.append((Rule(cond, action), line_no))
        else:
            raise PolicySyntaxError(f"unknown declaration {head!r}", line_no)
    if not rules:
        raise EmptyRuleSet("policy text declares no rules")
    if name is None:
        raise PolicySyntaxError("missing 'policy <name>' line", 1)
    for rule, line_no in rules:
        for ref in _list_refs(rule):
            if ref not in list_names:
                raise UnknownList(ref, line_no)
    return ScriptedPolicy(name=name, lists=tuple(lists), rules=tuple(r for r, _ in rules))


def _list_refs(rule: Rule):
    if isinstance(rule.condition, Exhausted):
        yield rule.condition.list_name
    if isinstance(rule.action, SendNext):
        yield rule.action.list_name


def serialize_policy(p: ScriptedPolicy) -> str:
    """Canonical text form; parse(serialize(p)) is structurally p."""
    lines = [f"policy {p.name}"]
    for list_name, items in p.lists:
        body = " ".join(items)
        lines.append(f"list {list_name} ={' ' + body if body else ''}")
    for rule in p.rules:
        lines.append(f"rule when {_fmt_cond(rule.condition)} do {_fmt_action(rule.action)}")
    return "\n".join(lines) + "\n"


def _fmt_cond(c: Condition) -> str:
    if isinstance(c, Always):
        return "always"
    if isinstance(c, TurnEquals):
        return f"turn == {c.n}"
    if isinstance(c, LastOutputContains):
        return f"last_output contains {c.sym}"
    if isinstance(c, LastOutputIs):
        return f"last_output is [{' '.join(c.word)}]"
    return f"exhausted {c.list_name}"


def _fmt_action(a: Action) -> str:
    if isinstance(a, StopAction):
        return "stop"
    if isinstance(a, SendWord):
        return f"send [{' '.join(a.word)}]"
    return f"send next {a.list_name}"


# The bundled password-list attacker.  It reacts to both the password
# prompt and the wrong-password warning, so it keeps guessing until its
# list runs out.
PW_GUESSER_TEXT = """\
policy pw_guesser
list pw = pw1 pw2 letmein
rule when turn == 0 do send [admin]
rule when last_output contains PASS? do send next pw
rule when last_output contains WARN do send next pw
rule when always do stop
"""

STOPPER_TEXT = """\
policy stopper
rule when always do stop
"""

BUILTIN_POLICY_TEXTS = {"pw_guesser": PW_GUESSER_TEXT, "stopper": STOPPER_TEXT}


def builtin_policy(name: str) -> ScriptedPolicy:
    try:
        return parse_policy(BUILTIN_POLICY_TEXTS[name])
    except KeyError:
        raise KeyError(f"unknown builtin policy {name!r}") from None


# -- seeded random policies ---------------------------------------------------

class RandomPolicy(Policy):
    """Uniform random words over the session's input alphabet; never stops."""

    deterministic = False

    def __init__(self, seed: int, max_word_len: int = 3):
        if max_word_len < 1:
            raise ValueError("max_word_len must be positive")
        self.seed = seed
        self.max_word_len = max_word_len
        self.name = f"random:{seed}"
        self._rng = random.Random(seed)
        self._tokens: tuple[str, ...] = ()

    def begin_session(self, system) -> None:
        self._rng = random.Random(self.seed)
        self._tokens = system.input_alphabet.tokens

    def next_input(self, history: History) -> PolicyDecision:
        if not self._tokens:
            raise RuntimeError("random policy used outside a session")
        length = self._rng.randint(1, self.max_word_len)
        return Send(tuple(self._rng.choice(self._tokens) for _ in range(length)))


# -- external process policies ------------------------------------------------

class _LineReader:
    """Background reader so exchanges can time out without blocking forever."""

    def __init__(self, stream):
        self._queue: queue.Queue[str | None] = queue.Queue()
        self._thread = threading.Thread(target=self._pump, args=(stream,), daemon=True)
        self._thread.start()

    def _pump(self, stream):
        for line in stream:
            self._queue.put(line)
        self._queue.put(None)

    def readline(self, timeout: float) -> str | None:
        try:
            return self._queue.get(timeout=timeout)
        except queue.Empty:
            raise TimeoutError from None


class ExternalPolicy(Policy):
    """Hosts a subprocess as the attacker over the stdio wire protocol.

    One observe/response exchange is outstanding at a time; any message
    that is not valid JSON of the expected type is a ProtocolViolation.
    """

    deterministic = False

    def __init__(self, command: str, proc, reader, name: str, alphabets, timeout: float):
        self.command = command
        self.proc = proc
        self._reader = reader
        self.name = name
        self.alphabets = alphabets  # (input Alphabet, output Alphabet)
        self.timeout = timeout
        self.protocol = PROTOCOL_VERSION
        self._ended = False

    def begin_session(self, system) -> None:
        if (system.input_alphabet, system.output_alphabet) != self.alphabets:
            raise AlphabetMismatch(
                "external policy was spawned for different alphabets"
            )

    def next_input(self, history: History) -> PolicyDecision:
        last_output = list(history[-1][1]) if history else []
        self._write(
            {
                "type": "observe",
                "turn": len(history),
                "last_output": last_output,
                "transcript": [[list(i), list(o)] for i, o in history],
            }
        )
        msg = self._read_message()
        kind = msg.get("type")
        if kind == "stop":
            return Stop()
        if kind != "send":
            raise ProtocolViolation(f"expected send or stop, got {kind!r}")
        word = msg.get("word")
        if not isinstance(word, list) or not word or not all(isinstance(s, str) for s in word):
            raise ProtocolViolation("send message needs a non-empty word of tokens")
        validate_word(self.alphabets[0], word)
        return Send(tuple(word))

    def end_session(self, outcome: str, final_goal: bool) -> None:
        if self._ended:
            return
        self._ended = True
        try:
            self._write({"type": "end", "outcome": outcome, "final_goal": final_goal})
        except ProtocolViolation:
            pass
        self.close()

    def close(self) -> None:
        if self.proc.poll() is None:
            try:
                self.proc.stdin.close()
            except OSError:
                pass
            try:
                self.proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()

    def _write(self, obj: dict) -> None:
        try:
            self.proc.stdin.write(json.dumps(obj) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, ValueError, OSError):
            raise ProtocolViolation("client closed its input") from None

    def _read_message(self) -> dict:
        try:
            line = self._reader.readline(self.timeout)
        except TimeoutError:
            raise ProtocolViolation(
                f"client sent nothing within {self.timeout}s"
            ) from None
        if line is None:
            raise ProtocolViolation("client closed its output")
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolViolation(f"not a JSON message: {line.strip()!r}") from None
        if not isinstance(msg, dict):
            raise ProtocolViolation("message must be a JSON object")
        return msg


def spawn_external(
    command: str, alphabets: tuple[Alphabet, Alphabet], timeout: float = 10.0
) -> ExternalPolicy:
    """Launch a client process and complete the hello/ready handshake."""
    argv = shlex.split(command)
    if not argv:
        raise LaunchFailure("empty command")
    try:
        proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
    except OSError as exc:
        raise LaunchFailure(f"cannot launch {command!r}: {exc}") from None
    reader = _LineReader(proc.stdout)
    policy = ExternalPolicy(command, proc, reader, name="external", alphabets=alphabets,
                            timeout=timeout)
    try:
        policy._write(
            {
                "type": "hello",
                "protocol": PROTOCOL_VERSION,
                "input_alphabet": list(alphabets[0].tokens),
                "output_alphabet": list(alphabets[1].tokens),
            }
        )
        try:
            line = reader.readline(timeout)
        except TimeoutError:
            raise HandshakeTimeout(f"no ready within {timeout}s") from None
        if line is None:
            raise ProtocolViolation("client exited before ready")
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolViolation(f"not a JSON message: {line.strip()!r}") from None
        if not isinstance(msg, dict) or msg.get("type") != "ready":
            raise ProtocolViolation("first client message must be ready")
        if "protocol" in msg and msg["protocol"] != PROTOCOL_VERSION:
            raise VersionMismatch(
                f"client speaks protocol {msg['protocol']!r}, host speaks {PROTOCOL_VERSION}"
            )
        policy.name = str(msg.get("name", "external"))
    except Exception:
        proc.kill()
        proc.wait()
        raise
    return policy
