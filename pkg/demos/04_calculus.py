"""Indexed names, structural congruence and the transition relation, up close.

Run: python3 demos/04_calculus.py
"""

from bpmnpc.calculus import Name, alpha_canonical, congruent, normalize, parse_process, print_term, subst
from bpmnpc.semantics import step

# Substituting b for a under a binder named b: the free b is lifted to b~1
# so the binder cannot capture it.
p = parse_process("(new b:T)x!<a>.b!<b>.0")
print(print_term(p), "  [b/a] =", print_term(subst(p, Name("a"), Name("b"))))

# Binder names do not matter; canonical forms agree.
q1, q2 = parse_process("(new k:T)k!<y>.0"), parse_process("(new z:T)z!<y>.0")
print(print_term(alpha_canonical(q1)), "==", print_term(alpha_canonical(q2)))

# Parallel composition is commutative, choice is idempotent and 0 is a unit.
r1 = parse_process("(a!<v>.0 + a!<v>.0) | 0 | b!<v>.0")
r2 = parse_process("b!<v>.0 | a!<v>.0")
print(print_term(r1), "~", print_term(r2), "->", congruent(r1, r2))
print("normal form:", print_term(normalize(r1)))

# A restricted name sent over a public channel is extruded to the receiver.
# States are shown in canonical form, so binders print as _0, _1, ...
s = parse_process("(new n:T)x!<n>.0 | x(m:T).m!<m>.0")
for tr in step(s):
    print(tr)
