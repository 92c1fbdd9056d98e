"""Export a policy's (history -> next input) behavior and memorize it.

The lookup table is the zero-generalization baseline: on a deterministic
policy it reproduces every decision exactly, which is all a conditional
model needs to be able to represent.
"""

from exploitlab import (
    builtin,
    builtin_policy,
    eval_exact_match,
    export_behavior_dataset,
    fit_lookup,
)

login = builtin("login")
dataset = export_behavior_dataset(login, builtin_policy("pw_guesser"), episodes=5)
print(f"exported {len(dataset.records)} records over 5 episodes")
print("sample record (history tokens -> next tokens):")
sample = dataset.records[1]
print(f"  {sample.history_tokens!r} -> {sample.next_tokens!r}")

predictor = fit_lookup(dataset)
report = eval_exact_match(predictor, dataset)
print(f"\ndistinct histories: {predictor.coverage}")
print(f"conflicting duplicates: {predictor.conflicts}")
print(f"exact-match rate: {report.rate:.3f} ({report.matches}/{report.records}, "
      f"{report.abstains} abstentions)")
assert report.rate == 1.0 and predictor.conflicts == 0
