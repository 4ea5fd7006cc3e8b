"""Forward dynamics on a random graph: a few agents absorb everything.

Simulates 30 agents on an Erdos-Renyi graph, prints the conserved total,
the monotone entropy, and the final winner/loser split.
"""

import numpy as np

from wta import (
    IntegratorOptions,
    classify_equilibrium,
    random_graph,
    simulate,
)

g = random_graph(30, 0.3, "unit", seed=7)
x0 = np.random.default_rng(8).uniform(0.1, 1.0, g.n)

opts = IntegratorOptions(dt=1e-2, t_end=200.0, record_stride=50,
                         stop_on_equilibrium=True, equilibrium_tol=1e-10)
traj, audit = simulate(g, x0, opts)

print(f"agents: {g.n}, edges: {g.num_edges}")
print(f"initial mass {audit.initial_mass:.6f}, "
      f"max drift {audit.max_abs_drift:.3e} (conserved)")
print(f"entropy start {traj.entropy[0]:.4f} -> end {traj.entropy[-1]:.4f} "
      "(nondecreasing)")
print(f"stopped at equilibrium: {traj.metadata['stopped_at_equilibrium']} "
      f"at t = {traj.metadata['final_time']:.2f}")

report = classify_equilibrium(g, traj.final_state, zero_tol=1e-6)
print(f"class {report.klass}: {len(report.winners)} winners, "
      f"{len(report.losers)} losers")
for i in report.winners:
    print(f"  winner {i}: started {x0[i]:.3f}, ended {traj.final_state[i]:.3f}")
