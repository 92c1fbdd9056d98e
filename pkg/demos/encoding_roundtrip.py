"""Show a session flattened to delimiter text and to a 0/1/| token stream,
then recovered exactly from both forms."""

from exploitlab import (
    builtin,
    builtin_policy,
    decode_transcript,
    detokenize_transcript,
    encode_transcript,
    parse_gamma,
    render_gamma,
    run_session,
    tokenize_transcript,
)

login = builtin("login")
result = run_session(login, builtin_policy("pw_guesser"), seed=0)
transcript = result.transcript
ina, outa = login.input_alphabet, login.output_alphabet

gamma = encode_transcript(transcript)
text = render_gamma(gamma)
print("delimiter form:")
print(" ", text)
assert parse_gamma(text, ina, outa) == gamma
assert decode_transcript(gamma, ina, outa) == transcript

stream = tokenize_transcript(transcript, ina, outa)
print("token stream:")
print(" ", stream)
assert detokenize_transcript(stream, ina, outa) == transcript

n = len(transcript)
symbols = sum(len(i) + len(o) for i, o in transcript)
print(f"\n{n} turns, {symbols} word symbols, {len(gamma)} encoded symbols "
      f"(= 2*{n} + {symbols}), {len(stream)} token characters")
print("both forms decode back to the original transcript, bit for bit")
