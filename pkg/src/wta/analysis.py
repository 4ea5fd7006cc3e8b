"""Equilibrium detection, classification, and stability analysis.

An equilibrium has losers at zero and winners positive, with equal values
across any edge joining two winners. Equilibria whose winner set is an
independent set are the stable class ("E_s"); those with at least one edge
between equal-valued winners are unstable ("E_u"), which the linearization
at the equilibrium and a perturbation run both witness.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import prepare_state, vector_field
from .errors import (
    ComponentTooSmallError,
    EmptyStateError,
    NotEuError,
    NotSymmetricError,
)
from .graph import Graph, connected_components, induced_subgraph
from .integrate import IntegratorOptions, simulate

__all__ = [
    "entropy",
    "EquilibriumReport",
    "classify_equilibrium",
    "SpectrumReport",
    "linearize_at",
    "symmetric_eigenvalues",
    "EscapeReport",
    "perturb_and_escape",
]


def entropy(x) -> float:
    """Population variance of the state: (1/n) sum_i (x_i - mean)^2.

    Two-pass computation: mean first, then squared deviations.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise EmptyStateError(f"entropy needs a nonempty 1-d vector, got shape {arr.shape}")
    n = arr.size
    mean = arr.sum() / n
    dev = arr - mean
    return float((dev * dev).sum() / n)


@dataclass(frozen=True)
class EquilibriumReport:
    winners: tuple[int, ...]
    losers: tuple[int, ...]
    klass: str  # "E_s" | "E_u" | "not_equilibrium"
    residual: float
    winner_components: tuple[tuple[tuple[int, ...], float], ...]
    zero_tol: float
    equal_tol: float

    def to_json_dict(self) -> dict:
        return {
            "winners": list(self.winners),
            "losers": list(self.losers),
            "class": self.klass,
            "residual": self.residual,
            "winner_components": [
                {"nodes": list(nodes), "value": value}
                for nodes, value in self.winner_components
            ],
            "zero_tol": self.zero_tol,
            "equal_tol": self.equal_tol,
        }


def classify_equilibrium(
    g: Graph,
    x,
    zero_tol: float = 1e-8,
    equal_tol: float = 1e-6,
) -> EquilibriumReport:
    """Partition agents into winners/losers at the given state and decide
    whether it is an equilibrium and of which class.

    Losers are components below zero_tol; the state is not an equilibrium
    when the field residual is large or when adjacent winners disagree in
    value beyond equal_tol.
    """
    x = prepare_state(x, g.n)
    losers = tuple(int(i) for i in np.nonzero(x < zero_tol)[0])
    winners = tuple(int(i) for i in np.nonzero(x >= zero_tol)[0])
    residual = float(np.abs(vector_field(g, x)).max())

    components: list[tuple[tuple[int, ...], float]] = []
    equal_ok = True
    winner_edge = False
    if winners:
        sub, mapping = induced_subgraph(g, winners)
        winner_edge = sub.num_edges > 0
        for comp in connected_components(sub):
            nodes = tuple(mapping[i] for i in comp)
            values = x[list(nodes)]
            c = float(values.mean())
            if np.abs(values - c).max() > equal_tol * max(1.0, c):
                equal_ok = False
            components.append((nodes, c))

    if residual >= 1e-6 * (1.0 + float(x.max())):
        klass = "not_equilibrium"
    elif not equal_ok:
        klass = "not_equilibrium"
    elif winner_edge:
        klass = "E_u"
    else:
        klass = "E_s"

    return EquilibriumReport(
        winners=winners,
        losers=losers,
        klass=klass,
        residual=residual,
        winner_components=tuple(components),
        zero_tol=zero_tol,
        equal_tol=equal_tol,
    )


def symmetric_eigenvalues(m, tol_scale: float = 1e-12) -> np.ndarray:
    """All eigenvalues of a symmetric real matrix, sorted ascending.

    Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
    below 1e-12 times the matrix Frobenius norm. Dependency-free by design;
    numpy's eigensolver is used only as an independent oracle in the tests.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"matrix must be square, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.T).max()) > 1e-12 * scale:
        raise NotSymmetricError("matrix is not symmetric within 1e-12 relative")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    if n == 1:
        return a[0, :1].copy()
    fro = float(np.sqrt((a * a).sum()))
    if fro == 0.0:
        return np.zeros(n)
    target = tol_scale * fro
    for _sweep in range(100):
        off = a - np.diag(np.diag(a))
        if float(np.sqrt((off * off).sum())) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-2 * target / n:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # two-sided rotation on rows/columns p and q
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a))


@dataclass(frozen=True)
class SpectrumReport:
    subgraph: tuple[int, ...]
    common_value: float
    eigenvalues: tuple[float, ...]
    verdict: str  # "unstable" | "inconclusive"

    def to_json_dict(self) -> dict:
        return {
            "subgraph": list(self.subgraph),
            "common_value": self.common_value,
            "eigenvalues": list(self.eigenvalues),
            "verdict": self.verdict,
        }


def linearize_at(
    g: Graph,
    report: EquilibriumReport,
    component_index: int = 0,
) -> SpectrumReport:
    """Spectrum of the linearized dynamics restricted to one connected
    winner component at an unstable-class equilibrium.

    The linearized system matrix is c^2 times the standard graph Laplacian
    of the induced winner subgraph; for a connected component of size >= 2
    it has one zero eigenvalue and the rest positive, hence instability.
    """
    if report.klass != "E_u":
        raise NotEuError(f"linearization requires class E_u, got {report.klass!r}")
    try:
        nodes, c = report.winner_components[component_index]
    except IndexError:
        raise ComponentTooSmallError(
            f"no winner component at index {component_index}"
        ) from None
    if len(nodes) < 2:
        raise ComponentTooSmallError(
            f"winner component {nodes} has fewer than 2 nodes"
        )
    sub, _mapping = induced_subgraph(g, nodes)
    lap = np.diag(sub.weights.sum(axis=1)) - sub.weights
    eigs = symmetric_eigenvalues((c * c) * lap)
    verdict = "unstable" if len(eigs) >= 2 and eigs[1] > 1e-10 else "inconclusive"
    return SpectrumReport(
        subgraph=nodes,
        common_value=c,
        eigenvalues=tuple(float(v) for v in eigs),
        verdict=verdict,
    )


@dataclass(frozen=True)
class EscapeReport:
    escaped: bool
    delta: float
    max_deviation: float
    final_class: str
    final_state: tuple[float, ...]
    seed: int

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self) | {"final_state": list(self.final_state)}


def perturb_and_escape(
    g: Graph,
    x_eq,
    magnitude: Optional[float] = None,
    seed: int = 0,
    t_end: float = 50.0,
    options: Optional[IntegratorOptions] = None,
) -> EscapeReport:
    """Dynamic instability witness for an E_u equilibrium.

    Applies a small zero-sum random perturbation to the winner nodes (so
    escape cannot be blamed on a mass change), simulates forward, and
    reports whether the trajectory left a 100*delta neighborhood.
    """
    x_eq = prepare_state(x_eq, g.n)
    report = classify_equilibrium(g, x_eq)
    if report.klass != "E_u":
        raise NotEuError(f"perturb_and_escape requires class E_u, got {report.klass!r}")
    delta = float(magnitude) if magnitude is not None else 1e-4 * float(x_eq.max())
    if delta < 0.0:
        raise ValueError("perturbation magnitude must be nonnegative")

    perturbed = x_eq.copy()
    if delta > 0.0:
        rng = np.random.default_rng(seed)
        widx = np.array(report.winners)
        v = rng.standard_normal(len(widx))
        v -= v.mean()
        if np.abs(v).max() == 0.0:  # measure-zero draw; any zero-sum pattern works
            v = np.zeros(len(widx))
            v[0], v[1] = 1.0, -1.0
            v -= v.mean()
        v *= delta / np.abs(v).max()
        perturbed[widx] = np.maximum(perturbed[widx] + v, 0.0)

    opts = options or IntegratorOptions(
        dt=1e-3,
        t_end=t_end,
        record_stride=10,
        stop_on_equilibrium=True,
        equilibrium_tol=1e-10,
    )
    traj, _audit = simulate(g, perturbed, opts)
    dev = float(np.abs(traj.states - x_eq[None, :]).max())
    final = traj.final_state
    final_report = classify_equilibrium(g, final)
    return EscapeReport(
        escaped=dev > 100.0 * delta,
        delta=delta,
        max_deviation=dev,
        final_class=final_report.klass,
        final_state=tuple(float(v) for v in final),
        seed=seed,
    )
