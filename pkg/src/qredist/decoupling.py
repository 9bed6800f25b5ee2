"""Haar-random decoupling: defects, admissibility bounds, unitary search.

Applying a random unitary to a register and discarding part of it
leaves the kept piece nearly maximally mixed and nearly uncorrelated
from the reference whenever the kept dimension respects

    log|A1| <= 1/2 log|A| + 1/2 H_min(A|R) - log(1/eps),

in which case the Haar-average trace-norm defect is at most ``eps``.
The two-state search looks for a single unitary that decouples two
states sharing the same register simultaneously; a Markov/union-bound
argument puts the per-sample success probability at 1/3 or better, so a
short seeded scan finds one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .entropies import Partition, hmin_cond
from .registers import (
    IsometryMap,
    LayoutError,
    QuantumState,
    SystemLayout,
    haar_unitary,
    maximally_mixed,
    partial_trace,
    tensor_product,
    trace_norm_distance,
)
from .sdp import SolverConfig
from .seeding import derive_seed

__all__ = [
    "Split",
    "DecouplingReport",
    "DecouplingSearchError",
    "decoupling_defect",
    "decoupling_dim_bound",
    "sample_decoupling",
    "bidecoupling_search",
]


class DecouplingSearchError(RuntimeError):
    """Search budget exhausted; carries the best defects seen."""

    def __init__(self, message, tries, best_defects):
        super().__init__(message)
        self.tries = tries
        self.best_defects = best_defects


@dataclass(frozen=True)
class Split:
    """Factorization of one register into named children."""

    parent: str
    children: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "children",
                           tuple((str(l), int(d)) for l, d in self.children))
        labels = [l for l, _ in self.children]
        if len(set(labels)) != len(labels) or self.parent in labels:
            raise LayoutError("split child labels must be distinct from each other "
                              "and from the parent")

    @property
    def dim(self) -> int:
        return int(np.prod([d for _, d in self.children], dtype=np.int64))

    def child_layout(self) -> SystemLayout:
        return SystemLayout(self.children)

    def validate_against(self, state: QuantumState):
        if self.dim != state.layout.dim_of(self.parent):
            raise LayoutError(
                f"split dims {[d for _, d in self.children]} do not multiply to "
                f"|{self.parent}| = {state.layout.dim_of(self.parent)}"
            )


@dataclass
class DecouplingReport:
    """Per-sample defects of a seeded Haar scan plus the admissibility check."""

    parent: str
    kept: str
    dims: tuple[int, ...]
    seed: int
    sample_seeds: tuple[int, ...]
    defects: tuple[float, ...]
    mean_defect: float
    stderr: float
    eps_admissible: float
    bound_satisfied: bool

    def to_json_dict(self) -> dict:
        return {
            "parent": self.parent,
            "kept": self.kept,
            "dims": list(self.dims),
            "seed": self.seed,
            "mean_defect": self.mean_defect,
            "stderr": self.stderr,
            "eps_admissible": self.eps_admissible,
            "bound_satisfied": self.bound_satisfied,
            "samples": [{"seed": s, "defect": d}
                        for s, d in zip(self.sample_seeds, self.defects)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def to_csv(self) -> str:
        lines = ["sample_seed,defect"]
        lines += [f"{s},{d!r}" for s, d in zip(self.sample_seeds, self.defects)]
        return "\n".join(lines) + "\n"


def _with_split_layouts(u: IsometryMap, state: QuantumState, split: Split
                        ) -> IsometryMap:
    d = state.layout.dim_of(split.parent)
    if u.matrix.shape != (d, d):
        raise LayoutError(f"unitary side {u.matrix.shape[0]} does not match "
                          f"|{split.parent}| = {d}")
    if u.kind != "unitary":
        raise LayoutError("decoupling requires a unitary map")
    return u.with_layouts(SystemLayout.of((split.parent, d)), split.child_layout())


def decoupling_defect(rho: QuantumState, u: IsometryMap, split: Split,
                      keep: int = 0) -> float:
    """``|| Tr_rest[U rho U†] - pi_kept ⊗ rho_ref ||_1`` for one unitary.

    ``keep`` selects which child register survives; all other children
    are traced out and every non-parent register of ``rho`` counts as
    the reference.
    """
    split.validate_against(rho)
    u = _with_split_layouts(u, rho, split)
    kept_label, kept_dim = split.children[keep]
    from .registers import apply_isometry

    rotated = apply_isometry(u, rho)
    discard = [l for l, _ in split.children if l != kept_label]
    red = partial_trace(rotated, discard)
    # the reference marginal carries the input trace, so sub-normalized
    # inputs compare against a target of the same trace
    target = tensor_product(maximally_mixed(kept_label, kept_dim),
                            partial_trace(rho, [split.parent]))
    return trace_norm_distance(red, target)


def decoupling_dim_bound(rho: QuantumState, eps: float, parent: str = "A",
                         config: SolverConfig | None = None) -> float:
    """Largest admissible ``log2|A1|``: ``1/2 log|A| + 1/2 H_min(A|R) - log(1/eps)``.

    May be negative, in which case no nontrivial split is admissible at
    this ``eps``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    refs = tuple(l for l in rho.layout.labels if l != parent)
    hmin = hmin_cond(rho, Partition((parent,), refs), config).value
    d = rho.layout.dim_of(parent)
    return 0.5 * math.log2(d) + 0.5 * hmin - math.log2(1.0 / eps)


def _admissible_eps(rho: QuantumState, split: Split, keep: int,
                    config: SolverConfig | None = None) -> float:
    """Smallest ``eps`` for which the kept child satisfies the dimension bound."""
    refs = tuple(l for l in rho.layout.labels if l != split.parent)
    hmin = hmin_cond(rho, Partition((split.parent,), refs), config).value
    d = rho.layout.dim_of(split.parent)
    log_kept = math.log2(split.children[keep][1])
    return 2.0 ** (log_kept - 0.5 * math.log2(d) - 0.5 * hmin)


def sample_decoupling(rho: QuantumState, split: Split, n_samples: int, seed: int,
                      keep: int = 0, config: SolverConfig | None = None
                      ) -> DecouplingReport:
    """Monte Carlo mean defect over seeded Haar unitaries.

    ``bound_satisfied`` checks the theorem at the tightest admissible
    ``eps`` for this split, with three standard errors of slack.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    split.validate_against(rho)
    d = rho.layout.dim_of(split.parent)
    sample_seeds = tuple(derive_seed(seed, k) for k in range(n_samples))
    defects = tuple(
        decoupling_defect(rho, haar_unitary(s, d), split, keep=keep)
        for s in sample_seeds
    )
    arr = np.array(defects)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    eps_star = _admissible_eps(rho, split, keep, config)
    threshold = min(eps_star, 2.0)
    return DecouplingReport(
        parent=split.parent,
        kept=split.children[keep][0],
        dims=tuple(dd for _, dd in split.children),
        seed=seed,
        sample_seeds=sample_seeds,
        defects=defects,
        mean_defect=mean,
        stderr=stderr,
        eps_admissible=eps_star,
        bound_satisfied=bool(mean <= threshold + 3.0 * stderr),
    )


def bidecoupling_search(rho1: QuantumState, rho2: QuantumState, split: Split,
                        eps3: float, eps4: float, max_tries: int = 64,
                        seed: int = 0, config: SolverConfig | None = None
                        ) -> IsometryMap:
    """Find one unitary decoupling both states at thresholds ``3*eps``.

    ``rho1`` keeps the first child of the split, ``rho2`` the second.
    The dimension conditions are checked against the conditional
    min-entropies before any sampling; a trivial (dimension-1) child is
    always admissible since its defect vanishes identically.  Raises
    :class:`DecouplingSearchError` when ``max_tries`` seeded samples all
    fail, reporting the best defects found.
    """
    if eps3 <= 0 or eps4 <= 0:
        raise ValueError("eps3 and eps4 must be positive")
    if len(split.children) != 3:
        raise LayoutError("bi-decoupling expects a three-child split")
    split.validate_against(rho1)
    split.validate_against(rho2)
    if rho1.layout.dim_of(split.parent) != rho2.layout.dim_of(split.parent):
        raise LayoutError("states disagree on the split register dimension")
    for state, keep, eps in ((rho1, 0, eps3), (rho2, 1, eps4)):
        label, dim = split.children[keep]
        if dim == 1:
            continue  # full trace leaves the reference exactly; always admissible
        bound = decoupling_dim_bound(state, eps, parent=split.parent, config=config)
        if math.log2(dim) > bound + 1e-9:
            raise ValueError(
                f"dimension condition violated for {label!r}: log2|{label}| = "
                f"{math.log2(dim):.4f} > {bound:.4f}"
            )
    d = rho1.layout.dim_of(split.parent)
    best = (math.inf, math.inf)
    for k in range(max_tries):
        u = haar_unitary(derive_seed(seed, k), d)
        d1 = decoupling_defect(rho1, u, split, keep=0)
        d2 = decoupling_defect(rho2, u, split, keep=1)
        if d1 + d2 < sum(best):
            best = (d1, d2)
        if d1 <= 3.0 * eps3 and d2 <= 3.0 * eps4:
            return _with_split_layouts(u, rho1, split)
    raise DecouplingSearchError(
        f"no unitary found in {max_tries} tries "
        f"(best defects {best[0]:.4f}, {best[1]:.4f}; "
        f"thresholds {3 * eps3:.4f}, {3 * eps4:.4f})",
        tries=max_tries,
        best_defects=best,
    )
