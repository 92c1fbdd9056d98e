"""Toy offensive-security lab: transition systems, attacker policies,
transcript codecs, and goal-word search, all over finite symbol alphabets.
"""

from . import errors
from .codec import (
    DOLLAR,
    HASH,
    GammaKind,
    GammaString,
    GammaSymbol,
    TokenStream,
    decode_transcript,
    detokenize_transcript,
    detokenize_word,
    encode_transcript,
    in_copy,
    out_copy,
    parse_gamma,
    render_gamma,
    tokenize_transcript,
    tokenize_word,
)
from .engine import (
    Outcome,
    SessionLimits,
    SessionResult,
    Transcript,
    Turn,
    parse_transcript_document,
    read_transcript_file,
    render_transcript_document,
    replay,
    run_session,
    transcript_document,
    transcript_from_document,
    write_transcript_file,
)
from .learnability import (
    BehaviorRecord,
    Dataset,
    EvalReport,
    LookupPredictor,
    eval_exact_match,
    export_behavior_dataset,
    fit_lookup,
)
from .policy import (
    PROTOCOL_VERSION,
    PW_GUESSER_TEXT,
    ExternalPolicy,
    Policy,
    PolicyDecision,
    RandomPolicy,
    ScriptedPolicy,
    Send,
    Stop,
    builtin_policy,
    parse_policy,
    serialize_policy,
    spawn_external,
)
from .search import (
    Membership,
    WitnessResult,
    check_membership,
    enumerate_exploits,
    reachable_states,
    shortest_witness,
)
from .symbols import Alphabet, Word, make_alphabet, symbol_index, validate_word
from .system import (
    Alternative,
    BUILTIN_NAMES,
    ChoiceResolver,
    TransitionSystem,
    builtin,
    is_goal,
    load_system,
    load_system_file,
    load_system_text,
    run_word,
    step,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
