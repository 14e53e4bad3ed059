"""The whole pipeline: parse, denote, compile, run both sides, check.

Imp statements denote trees over variable events; compiled units denote
trees over register/memory events.  After interpreting both into their
stores, the bounded weak checker compares final stores from matching
initial states.  Seeded compiler bugs show what a refutation looks like.
"""

from itrees import label, run_to_head, umap
from itrees.asm import den_asm, interp_asm, print_asm
from itrees.compiler import SimConfig, check_equivalent, compile_stmt, gen_program
from itrees.imp import env_of, parse_imp, run_imp
from itrees.values import render_value

src = "n := 5; total := 0; while n do total := total + n; n := n - 1 end"
prog = parse_imp(src)
print("source:", src)

run = run_imp(prog, env_of(), 100_000)
print("imp run:", render_value(run.env), f"({run.steps} steps)")

unit = compile_stmt(prog)
print("\ncompiled unit:")
print(print_asm(unit))

tree = interp_asm(den_asm(unit)(label(0, 1)), umap(), umap())
ob, steps = run_to_head(tree, 1_000_000)
mem = ob.value.payload[0]
print("asm memory:", render_value(mem), f"({steps} steps)")

print("\nequivalence check:", check_equivalent(prog))

# Break the compiler on purpose and watch the checker catch it.
for name in ("drop-store", "swap-branch"):
    verdict = check_equivalent(parse_imp("x := 1; if x then y := 1 else y := 2 end"),
                               SimConfig(fuel=5000), mutation=name)
    print(f"mutant {name}: {verdict.status.value}")

# Random bounded programs all check out.
cfg = SimConfig(fuel=20_000)
oks = sum(check_equivalent(gen_program(12, "bounded", s), cfg, seed=s).proven
          for s in range(20))
print(f"\nrandom bounded programs proven: {oks}/20")
