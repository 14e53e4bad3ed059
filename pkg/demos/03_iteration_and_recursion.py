"""Loops without guardedness conditions, and recursion as events.

``iterate`` repeats a body that answers continue-or-stop, costing one
silent step per repeat.  ``mrec`` runs a recursive definition whose calls
are ordinary events, splicing the handler back in front of the remaining
tree, so deep recursion never touches the host stack.
"""

from itrees import (
    EQ,
    KTree,
    inl,
    inr,
    iterate,
    kt_case,
    kt_cat,
    kt_id,
    ktree_equiv,
    mrec,
    nat,
    ret,
    run_to_head,
    unit,
)
from itrees.samples import ackermann_event, ackermann_handler, even_odd_handler, EVEN_ODD_E
from itrees.events import event
from itrees.values import render_value

# A countdown: Left(n-1) keeps looping, Right(()) stops.
countdown = KTree(
    lambda v: ret(inr(unit())) if v.payload == 0 else ret(inl(nat(v.payload - 1)))
)
ob, steps = run_to_head(iterate(countdown)(nat(4)), 100)
print(f"countdown from 4: {render_value(ob.value)} after {steps} silent steps")

# The fixed-point law, checked by the bounded weak checker.
law = ktree_equiv(
    EQ,
    iterate(countdown),
    kt_cat(countdown, kt_case(iterate(countdown), kt_id())),
    inputs=[nat(i) for i in range(5)],
)
print("fixed-point law on the countdown body:", law)

# Ackermann via recursive call events.
rh = ackermann_handler()
for m, n in [(0, 5), (1, 1), (2, 3), (3, 3)]:
    ob, steps = run_to_head(mrec(rh, ackermann_event(m, n)), 2_000_000)
    print(f"ackermann({m},{n}) = {render_value(ob.value)}  ({steps} steps)")

# Mutual recursion: even/odd calling each other through events.
parity = even_odd_handler()
for n in (9, 10):
    ob, _ = run_to_head(mrec(parity, event(EVEN_ODD_E, "Even", nat(n))), 10_000)
    print(f"even({n}) = {render_value(ob.value)}")
