"""Run each optimiser once on a shifted, rotated sphere and compare.

    python3 demos/01_single_runs.py
"""

from hide_de import (
    DEParams,
    HIDEParams,
    JADEParams,
    PSODEParams,
    Termination,
    get_function,
    run_de,
    run_hide,
    run_jade,
    run_psode,
)

# f1 of the shipped suite: sphere, shifted into [-80, 80]^d, rotated, bias 100.
f = get_function("f1", 10)
print(f"{f.id}: {f.description}, optimum value {f.optimum[1]}")

term = Termination(max_generations=300)
runs = {
    "DE": run_de(f.space, DEParams(), f, term, seed=0),
    "JADE": run_jade(f.space, JADEParams(), f, term, seed=0),
    "PSO-DE": run_psode(f.space, PSODEParams(), f, term, seed=0),
    "HIDE": run_hide(f.space, HIDEParams(), f, term, seed=0),
    "HIDE (hierarchical crossover)": run_hide(f.space, HIDEParams(crossover="hierarchical"), f, term, seed=0),
}

# Every trace starts at generation 0 and is non-increasing.
print(f"\n{'algorithm':32s}{'G=0':>12s}{'G=50':>12s}{'G=300':>12s}{'evals':>8s}")
for name, res in runs.items():
    t = res.trace - f.optimum[1]
    print(f"{name:32s}{t[0]:12.3e}{t[50]:12.3e}{t[-1]:12.3e}{res.evaluations_used:8d}")
