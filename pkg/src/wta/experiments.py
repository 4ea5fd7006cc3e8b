"""Named desk-scale experiment manifests.

Each manifest regenerates an analogue of one of the published figures from
its own seed: bar charts of initial/final states, the forward/reverse
trajectory fan, the entropy profile, the nine-agent topology-beats-initial-
value run, and the opponent-sweep scatter. Re-running a manifest with the
same seed and parameters reproduces byte-identical data files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import classify_equilibrium
from .errors import ConfigError
from .graph import (
    Graph,
    connected_components,
    dump_graph,
    is_independent_set,
    new_graph,
    random_graph,
)
from .integrate import IntegratorOptions, simulate, simulate_reverse
from .optimize import OptimizeProblem, evaluate_choice, mask_to_bits, sweep_initial_value
from . import svg

__all__ = ["EXPERIMENTS", "run_experiment"]


def _canonical_hash(obj) -> str:
    return hashlib.sha256(
        json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _connected_random_graph(n: int, p: float, seed: int) -> Graph:
    """First connected G(n, p) draw from the seeded sequence seed, seed+1000, ..."""
    for attempt in range(200):
        g = random_graph(n, p, "unit", seed + 1000 * attempt)
        if len(connected_components(g)) == 1:
            return g
    raise ConfigError(f"no connected graph found for n={n}, p={p}, seed={seed}")


def _hundred_agent_instance(params: dict, seed: int):
    g = random_graph(params["agents"], params["edge_prob"], "unit", seed)
    rng = np.random.default_rng(seed + 1)
    x0 = rng.uniform(0.0, 1.0, g.n)
    return g, x0


def _nine_agent_instance(params: dict, seed: int):
    g = _connected_random_graph(params["agents"], params["edge_prob"], seed)
    rng = np.random.default_rng(seed + 1)
    x0 = rng.uniform(0.0, 1.0, g.n)
    return g, x0


def _manifest(name, seed, params) -> dict:
    return {
        "experiment": name,
        "seed": seed,
        "parameters": params,
        "tool_version": __version__,
        "config_hash": _canonical_hash({"experiment": name, "seed": seed, **params}),
    }


def _run_fig1(out: Path, seed: int, params: dict, want_svg: bool) -> dict:
    g, x0 = _hundred_agent_instance(params, seed)
    opts = IntegratorOptions(
        dt=params["dt"], t_end=params["t_end"], record_stride=10**9
    )
    traj, audit = simulate(g, x0, opts, seed=seed)
    final = traj.final_state
    report = classify_equilibrium(g, final)
    with open(out / "fig1_states.csv", "w") as fh:
        fh.write("agent,initial,final\n")
        for i in range(g.n):
            fh.write(f"{i},{x0[i]:.17g},{final[i]:.17g}\n")
    dump_graph(g, out / "fig1_graph.json")
    summary = {
        "winner_count": len(report.winners),
        "class": report.klass,
        "winners_independent": is_independent_set(g, report.winners),
        "audit": audit.to_json_dict(),
        "graph_hash": g.hash_hex,
    }
    if want_svg:
        svg.bar_chart(x0, out / "fig1_initial.svg", title="Initial states",
                      y_label="state")
        svg.bar_chart(final, out / "fig1_final.svg", title="Final states",
                      y_label="state")
    return summary


def _fig2_runs(params: dict, seed: int):
    g, x0 = _hundred_agent_instance(params, seed)
    steps = int(round(params["t_end"] / params["dt"]))
    stride = max(1, steps // 200)
    opts = IntegratorOptions(
        dt=params["dt"], t_end=params["t_end"], record_stride=stride
    )
    fwd, fwd_audit = simulate(g, x0, opts, seed=seed)
    rev, rev_audit = simulate_reverse(g, x0, opts, seed=seed)
    return g, x0, fwd, fwd_audit, rev, rev_audit


def _run_fig2(out: Path, seed: int, params: dict, want_svg: bool) -> dict:
    g, _x0, fwd, fwd_audit, rev, rev_audit = _fig2_runs(params, seed)
    fwd.write_csv(out / "fig2_forward.csv")
    rev.write_csv(out / "fig2_reverse.csv")
    if want_svg:
        series = []
        # reverse branch plotted at negative time, forward at positive
        for i in range(g.n):
            series.append((-rev.times[::-1], rev.states[::-1, i]))
        for i in range(g.n):
            series.append((fwd.times, fwd.states[:, i]))
        svg.line_chart(series, out / "fig2_trajectories.svg",
                       title="Agent trajectories (negative and positive time)",
                       x_label="t", y_label="state")
    return {
        "forward_audit": fwd_audit.to_json_dict(),
        "reverse_audit": rev_audit.to_json_dict(),
        "graph_hash": g.hash_hex,
    }


def _run_fig3(out: Path, seed: int, params: dict, want_svg: bool) -> dict:
    g, _x0, fwd, _fa, rev, _ra = _fig2_runs(params, seed)
    with open(out / "fig3_entropy.csv", "w") as fh:
        fh.write("branch,t,entropy\n")
        for t, h in zip(rev.times, rev.entropy):
            fh.write(f"reverse,{-t + 0.0:.17g},{h:.17g}\n")
        for t, h in zip(fwd.times, fwd.entropy):
            fh.write(f"forward,{t:.17g},{h:.17g}\n")
    if want_svg:
        svg.line_chart([(fwd.times, fwd.entropy)], out / "fig3_entropy_forward.svg",
                       title="Entropy, positive time", x_label="t", y_label="H")
        svg.line_chart([(rev.times, rev.entropy)], out / "fig3_entropy_reverse.svg",
                       title="Entropy, negative time (log scale)", x_label="tau",
                       y_label="log10 H", log_y=True)
    return {
        "forward_entropy_final": float(fwd.entropy[-1]),
        "forward_entropy_nondecreasing": bool(
            np.all(np.diff(fwd.entropy) >= -1e-9)
        ),
        "reverse_entropy_final": float(rev.entropy[-1]),
        "graph_hash": g.hash_hex,
    }


def _run_fig4(out: Path, seed: int, params: dict, want_svg: bool) -> dict:
    g, x0 = _nine_agent_instance(params, seed)
    steps = int(round(params["t_end"] / params["dt"]))
    opts = IntegratorOptions(
        dt=params["dt"], t_end=params["t_end"],
        record_stride=max(1, steps // 400),
        stop_on_equilibrium=True, equilibrium_tol=1e-10,
    )
    traj, audit = simulate(g, x0, opts, seed=seed)
    traj.write_csv(out / "fig4_trajectories.csv")
    dump_graph(g, out / "fig4_graph.json")
    final = traj.final_state
    report = classify_equilibrium(g, final)
    max_agent = int(np.argmax(x0))
    min_agent = int(np.argmin(x0))
    if want_svg:
        svg.line_chart([(traj.times, traj.states[:, i]) for i in range(g.n)],
                       out / "fig4_trajectories.svg",
                       title="Nine-agent trajectories", x_label="t", y_label="state")
    return {
        "class": report.klass,
        "winners": list(report.winners),
        "max_initial_agent": max_agent,
        "max_initial_agent_lost": max_agent in report.losers,
        "min_initial_agent": min_agent,
        "min_initial_agent_won": min_agent in report.winners,
        "initial": [float(v) for v in x0],
        "final": [float(v) for v in final],
        "audit": audit.to_json_dict(),
        "graph_hash": g.hash_hex,
    }


def _run_fig5(out: Path, seed: int, params: dict, want_svg: bool) -> dict:
    g, x0 = _nine_agent_instance(params, seed)
    alpha = int(np.argmin(x0))
    base_edges = [(i, j, w) for i, j, w in g.edges() if alpha not in (i, j)]
    base = new_graph(g.n, base_edges)
    others = tuple(float(x0[j]) for j in range(g.n) if j != alpha)
    problem = OptimizeProblem(
        base_graph=base,
        alpha=alpha,
        x_alpha0=float(x0[alpha]),
        x0_others=others,
        horizon=params["horizon"],
        options=IntegratorOptions(
            dt=params["dt"], stop_on_equilibrium=True, equilibrium_tol=1e-9
        ),
    )
    grid = np.linspace(0.0, params["grid_max"], params["grid_count"])
    sweep = sweep_initial_value(problem, grid)
    sweep.write_csv(out / "fig5_sweep.csv")

    # the original topology's mask, marked like the paper's * point
    candidates = problem.candidates
    orig_mask = sum(
        1 << k for k, j in enumerate(candidates) if g.weights[alpha, j] > 0.0
    )
    star_value = evaluate_choice(problem, orig_mask)
    values_by_grid = {}
    for gx, _mask, v in sweep.rows:
        values_by_grid.setdefault(gx, []).append(v)
    extremes = {
        f"{gx:.6g}": {"min": min(vs), "max": max(vs)}
        for gx, vs in values_by_grid.items()
    }
    if want_svg:
        svg.scatter_chart(
            [(gx, v) for gx, _mask, v in sweep.rows],
            out / "fig5_sweep.svg",
            title="Final vs. initial value over all opponent masks",
            x_label="initial value", y_label="final value",
            ref_lines=[(1.0, sweep.others_mass), (1.0, 0.0)],
            star=(problem.x_alpha0, star_value),
        )
    return {
        "alpha": alpha,
        "original_mask": mask_to_bits(orig_mask, len(candidates)),
        "original_point": [problem.x_alpha0, star_value],
        "others_mass": sweep.others_mass,
        "per_grid_extremes": extremes,
        "graph_hash": g.hash_hex,
    }


EXPERIMENTS = {
    "fig1_bars": (
        _run_fig1,
        {"agents": 100, "edge_prob": 0.8, "t_end": 1.0, "dt": 1e-3},
    ),
    "fig2_trajectories": (
        _run_fig2,
        {"agents": 100, "edge_prob": 0.8, "t_end": 1.0, "dt": 1e-3},
    ),
    "fig3_entropy": (
        _run_fig3,
        {"agents": 100, "edge_prob": 0.8, "t_end": 1.0, "dt": 1e-3},
    ),
    "fig4_nine_agents": (
        _run_fig4,
        {"agents": 9, "edge_prob": 0.35, "t_end": 5.0, "dt": 1e-3},
    ),
    "fig5_sweep": (
        _run_fig5,
        {
            "agents": 9,
            "edge_prob": 0.35,
            "horizon": 4.0,
            "dt": 2e-2,
            "grid_count": 31,
            "grid_max": 1.5,
        },
    ),
}


def run_experiment(
    name: str,
    out_dir,
    seed: int = 0,
    overrides: dict | None = None,
    want_svg: bool = False,
) -> dict:
    """Run a named manifest into out_dir; returns the manifest dict.

    Writes manifest.json and report.json next to the data files. Unknown
    override keys are rejected so a manifest stays self-describing.
    """
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}"
        )
    runner, defaults = EXPERIMENTS[name]
    params = dict(defaults)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ConfigError(f"unknown override {key!r} for {name}")
        params[key] = type(defaults[key])(value)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(name, seed, params)
    summary = runner(out, seed, params, want_svg)
    _write_json(out / "manifest.json", manifest)
    _write_json(out / "report.json", {"manifest": manifest, "summary": summary})
    return manifest
