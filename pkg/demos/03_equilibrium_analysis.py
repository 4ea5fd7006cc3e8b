"""Stable vs. unstable equilibria: spectra and escape.

Two adjacent winners at equal value form an equilibrium, but it is
unstable: the linearization has positive eigenvalues, and an arbitrarily
small perturbation sends the system to a single-winner outcome.
"""

import numpy as np

from wta import (
    classify_equilibrium,
    linearize_at,
    new_graph,
    perturb_and_escape,
)

triangle = new_graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
x_eq = np.ones(3)

report = classify_equilibrium(triangle, x_eq)
print(f"state {x_eq.tolist()} on a triangle: class {report.klass}")

spectrum = linearize_at(triangle, report)
print(f"linearized eigenvalues: {np.round(spectrum.eigenvalues, 10).tolist()}")
print(f"verdict: {spectrum.verdict} "
      "(one zero mode along the conserved total, the rest positive)")

escape = perturb_and_escape(triangle, x_eq, seed=5)
print(f"\nperturbation size {escape.delta:.1e} "
      f"-> max deviation {escape.max_deviation:.3f} "
      f"({'escaped' if escape.escaped else 'stayed'})")
print(f"landed in class {escape.final_class}: "
      f"{np.round(escape.final_state, 6).tolist()}")

# contrast: an independent winner set is the stable configuration
path = new_graph(3, [(0, 1, 1.0), (1, 2, 1.0)])
stable = classify_equilibrium(path, [1.5, 0.0, 1.5])
print(f"\npath graph with winners at the two ends: class {stable.klass} "
      f"(winners {stable.winners} form an independent set)")
