"""Hunt for goal-reaching input words on each bundled target."""

from exploitlab import (
    builtin,
    check_membership,
    enumerate_exploits,
    reachable_states,
    shortest_witness,
)

for name in ("login", "lockpad", "echo"):
    sys = builtin(name)
    print(f"== {name}")
    print(f"   reachable states: {len(reachable_states(sys))} of {len(sys.states)}")
    witness = shortest_witness(sys, max_len=4)
    if witness.word is None:
        print(f"   no witness up to length 4 ({witness.visited_states} states visited)")
    else:
        print(f"   shortest witness: {' '.join(witness.word)}  (length {witness.length})")
        print(f"   membership: {check_membership(sys, witness.word).value}")
    exploits = enumerate_exploits(sys, max_len=3)
    print(f"   goal words up to length 3: {len(exploits)}")
    for w in exploits[:5]:
        print(f"     {' '.join(w)}")
    print()

login = builtin("login")
through = ("admin", "letmein", "logout")
print("goal states are not traps: extending a winning word can lose again")
print(f"  {' '.join(through[:2])!s}        -> {check_membership(login, through[:2]).value}")
print(f"  {' '.join(through)!s} -> {check_membership(login, through).value}")
