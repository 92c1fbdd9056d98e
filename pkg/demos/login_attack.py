"""Walk the bundled password guesser through the login target, turn by turn."""

from exploitlab import Outcome, builtin, builtin_policy, run_session

login = builtin("login")
print(f"target: {login.name}")
print(f"  states: {', '.join(login.states)}")
print(f"  inputs: {', '.join(login.input_alphabet.tokens)}")
print(f"  goal:   {', '.join(sorted(login.goals))}")
print()

policy = builtin_policy("pw_guesser")
print("attacker script:")
print(policy.source_text)

result = run_session(login, policy, seed=0)
for k, (sent, got) in enumerate(result.transcript):
    print(f"turn {k}: sent {' '.join(sent):10s} got {' '.join(got)}")
print()
print(f"outcome: {result.outcome_text} in state {result.final_state}")
assert result.outcome is Outcome.GOAL_REACHED
