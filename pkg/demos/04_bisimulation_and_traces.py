"""Comparing trees: exact shapes, equivalence up to silent steps, traces.

The checkers are bounded and three-valued: Proven, Refuted with a
replayable counterexample, or Unknown when a budget ran out.  Trace sets
give an alternative view of the same equivalence: silent steps are
invisible, and two finite trees are weakly bisimilar exactly when their
trace sets match.
"""

from itrees import (
    EQ,
    bind,
    enumerate_traces,
    eutt,
    nat,
    render_trace,
    replay_witness,
    ret,
    spin,
    strong_bisim,
    tau,
    trace_equiv,
    trace_refines,
    trigger,
)
from itrees.samples import input_ev, kill9

one = ret(nat(1))

print("strong: ret 1 vs ret 1        ->", strong_bisim(one, ret(nat(1)), 10))
print("strong: tau(ret 1) vs ret 1   ->", strong_bisim(tau(one), one, 10))
print("weak:   tau(ret 1) vs ret 1   ->", eutt(EQ, tau(one), one, 5, 10))
print("weak:   spin vs ret 1         ->", eutt(EQ, spin(), one, 5, 10))
print("strong: spin vs spin          ->", strong_bisim(spin(), spin(), 10))

# A refutation carries a path you can replay against both trees.
left = bind(trigger(input_ev()), lambda x: ret(nat(x.payload + 1)))
right = bind(trigger(input_ev()), lambda x: ret(nat(x.payload * 2)))
verdict = eutt(EQ, left, right, 5, 20)
print("off-by-one vs double:", verdict)
print("  witness replays:", replay_witness(EQ, left, right, verdict.witness))

# Traces of kill9, probing the environment with 0 or 9.
for tr in sorted(render_trace(t) for t in enumerate_traces(kill9(), 2, 10, nat_probes=(0, 9))):
    print("  kill9 trace:", tr)

# Silent divergence refines everything; equivalence needs both directions.
print("spin refines ret 1:", trace_refines(spin(), one, 3, 10))
print("ret 1 refines spin:", trace_refines(one, spin(), 3, 10))
print("tau(ret 1) trace-equivalent to ret 1:", trace_equiv(tau(one), one, 3, 10))
