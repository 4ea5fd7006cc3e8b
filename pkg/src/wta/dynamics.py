"""Vector fields of the winners-take-all dynamics.

Forward model: dx_i = sum_j a_ij (x_i - x_j) x_i x_j over neighbors j.
The reverse-time form is the exact negation and equals -L(y) y for a
state-dependent Laplacian with off-diagonal entries -a_ij y_i y_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, EmptyStateError, NegativeStateError
from .graph import Graph

__all__ = [
    "CLAMP",
    "prepare_state",
    "vector_field",
    "reverse_vector_field",
    "laplacian",
    "InteractionSpec",
    "default_interaction",
    "interaction_from_names",
    "generalized_vector_field",
    "check_interactions",
    "InteractionCheck",
    "BUILTIN_F",
    "BUILTIN_G",
]

# Round-off absorption window: components in [-CLAMP, 0) are treated as 0,
# anything below -CLAMP is a genuine violation of the nonnegative orthant.
CLAMP = 1e-12


def prepare_state(x, n: int) -> np.ndarray:
    """Validate a state vector against a graph of size n.

    Returns a float array with tiny negative round-off clamped to zero.
    Raises DimensionMismatchError / NegativeStateError / EmptyStateError.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise EmptyStateError(f"state must be a nonempty 1-d vector, got shape {arr.shape}")
    if arr.shape[0] != n:
        raise DimensionMismatchError(f"state has length {arr.shape[0]}, graph has n={n}")
    lo = arr.min()
    if lo < -CLAMP:
        raise NegativeStateError(f"state component {lo} below -{CLAMP}")
    if lo < 0.0:
        arr = np.where(arr < 0.0, 0.0, arr)
    return arr


def _edge_field(g: Graph, x: np.ndarray, f=None, gfun=None) -> np.ndarray:
    """Accumulate per-edge terms w * f(x_i - x_j) * g(x_i, x_j) into dx_i.

    Each undirected edge contributes twice, once per endpoint, keeping the
    per-agent sum literal. The default f/g path and the generalized path
    run the identical arithmetic, so identity/product specs are bit-equal
    to the plain field.
    """
    xs = x[g.edge_src]
    xd = x[g.edge_dst]
    fd = (xs - xd) if f is None else f(xs - xd)
    gv = (xs * xd) if gfun is None else gfun(xs, xd)
    terms = (g.edge_w * fd) * gv
    return np.bincount(g.edge_src, weights=terms, minlength=g.n)


def vector_field(g: Graph, x) -> np.ndarray:
    """dx_i = sum_j a_ij (x_i - x_j) x_i x_j; zero-sum up to rounding."""
    return _edge_field(g, prepare_state(x, g.n))


def reverse_vector_field(g: Graph, y) -> np.ndarray:
    """Reverse-time (consensus) field: exact entrywise negation of the
    forward field, so dy = -dx holds bit-for-bit."""
    return -vector_field(g, y)


def laplacian(g: Graph, y) -> np.ndarray:
    """State-dependent Laplacian L with l_ij = -a_ij y_i y_j (i != j) and
    l_ii = -sum_j l_ij; every row sums to zero exactly and
    reverse_vector_field(g, y) == -L @ y up to rounding."""
    y = prepare_state(y, g.n)
    L = -(g.weights * np.outer(y, y))
    np.fill_diagonal(L, 0.0)
    np.fill_diagonal(L, -L.sum(axis=1))
    return L


# --- generalized f/g interactions ---


def _identity(a):
    return a


def _cubic(a):
    return a**3


def _product(u, v):
    return u * v


def _scaled_product(u, v):
    return 0.5 * (u * v)


BUILTIN_F: dict[str, Callable] = {
    "identity": _identity,
    "cubic": _cubic,
    "tanh": np.tanh,
}

BUILTIN_G: dict[str, Callable] = {
    "product": _product,
    "scaled_product": _scaled_product,
}


@dataclass(frozen=True)
class InteractionSpec:
    """Pluggable interaction: f acts on the state difference (odd, positive
    on positives), g on the state pair (symmetric, vanishing at the
    boundary). Names are carried for provenance in outputs."""

    f: Callable
    g: Callable
    f_name: str = "custom"
    g_name: str = "custom"

    @property
    def is_default(self) -> bool:
        return self.f is _identity and self.g is _product


def default_interaction() -> InteractionSpec:
    return InteractionSpec(_identity, _product, "identity", "product")


def interaction_from_names(f: str = "identity", g: str = "product") -> InteractionSpec:
    if f not in BUILTIN_F:
        raise KeyError(f"unknown interaction f {f!r}; choose from {sorted(BUILTIN_F)}")
    if g not in BUILTIN_G:
        raise KeyError(f"unknown interaction g {g!r}; choose from {sorted(BUILTIN_G)}")
    return InteractionSpec(BUILTIN_F[f], BUILTIN_G[g], f, g)


def generalized_vector_field(g: Graph, x, spec: InteractionSpec) -> np.ndarray:
    """dx_i = sum_j a_ij f(x_i - x_j) g(x_i, x_j)."""
    return _edge_field(g, prepare_state(x, g.n), spec.f, spec.g)


@dataclass(frozen=True)
class InteractionCheck:
    passed: bool
    violations: tuple[str, ...]
    samples: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": list(self.violations),
            "samples": self.samples,
            "seed": self.seed,
        }


def check_interactions(
    spec: InteractionSpec,
    samples: int = 256,
    sample_range: tuple[float, float] = (0.0, 10.0),
    seed: int = 0,
) -> InteractionCheck:
    """Sampled validation of the interaction hypotheses.

    Checks f odd and positive on positives, g symmetric and vanishing when
    either argument is zero. Violations are report content, not exceptions.
    """
    lo, hi = float(sample_range[0]), float(sample_range[1])
    if lo < 0.0 or hi <= lo:
        raise ValueError(f"sample range must satisfy 0 <= lo < hi, got {sample_range}")
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    tol = 1e-12
    violations: list[str] = []
    for _ in range(samples):
        a = rng.uniform(lo, hi)
        u = rng.uniform(lo, hi)
        v = rng.uniform(lo, hi)
        fa = float(spec.f(a))
        fneg = float(spec.f(-a))
        if abs(fa + fneg) > tol * max(1.0, abs(fa)):
            violations.append(f"f not odd at a={a}: f(a)+f(-a)={fa + fneg}")
            break
        if a > 0.0 and not fa > 0.0:
            violations.append(f"f({a})={fa} not positive")
            break
        guv = float(spec.g(u, v))
        gvu = float(spec.g(v, u))
        if abs(guv - gvu) > tol * max(1.0, abs(guv)):
            violations.append(f"g not symmetric at ({u},{v}): {guv} vs {gvu}")
            break
        if abs(float(spec.g(0.0, a))) > tol or abs(float(spec.g(a, 0.0))) > tol:
            violations.append(f"g does not vanish at the boundary for a={a}")
            break
    return InteractionCheck(
        passed=not violations,
        violations=tuple(violations),
        samples=samples,
        seed=seed,
    )
