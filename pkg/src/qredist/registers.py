"""Dense linear algebra over labeled multipartite quantum registers.

States live on a :class:`SystemLayout`, an ordered list of named tensor
factors.  All operations are pure functions: they return new objects and
never mutate their inputs, so values can be shared freely across threads.

Conventions used throughout the package:

* states are sub-normalized positive operators (trace in ``[0, 1]``),
* logarithms are base 2 (qubit / ebit units),
* factor order is exactly the declared order; operations that need a
  different order permute explicitly instead of sorting labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "LayoutError",
    "SystemLayout",
    "QuantumState",
    "PureState",
    "IsometryMap",
    "tensor_product",
    "partial_trace",
    "permute",
    "permute_and_embed",
    "relabel",
    "purify",
    "apply_isometry",
    "trace_norm",
    "trace_norm_distance",
    "fidelity",
    "generalized_fidelity",
    "purified_distance",
    "uhlmann_partial_isometry",
    "haar_unitary",
    "random_pure_state",
    "maximally_mixed",
    "max_entangled",
    "max_entangled_pure",
    "basis_state",
    "standard_state",
    "state_to_json",
    "state_from_json",
    "isometry_to_json",
    "isometry_from_json",
]

# Eigenvalues in [-EIG_CLIP_TOL, 0) are clipped to zero at construction;
# anything more negative is rejected.  RANK_TOL is the support threshold
# shared by purification, pseudo square roots and D_max support checks.
EIG_CLIP_TOL = 1e-9
RANK_TOL = 1e-10
HERM_TOL = 1e-9
ISO_TOL = 1e-9
TRACE_TOL = 1e-9


class LayoutError(ValueError):
    """Register labels or dimensions do not line up."""


# ---------------------------------------------------------------------------
# layouts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemLayout:
    """Ordered, labeled tensor factors with their dimensions."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        factors = tuple((str(l), int(d)) for l, d in self.factors)
        object.__setattr__(self, "factors", factors)
        labels = [l for l, _ in factors]
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate labels in layout {labels}")
        for l, d in factors:
            if not l:
                raise LayoutError("empty register label")
            if d < 1:
                raise LayoutError(f"dimension of {l!r} must be >= 1, got {d}")

    @staticmethod
    def of(*factors: tuple[str, int]) -> "SystemLayout":
        return SystemLayout(tuple(factors))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.factors else 1

    def dim_of(self, label: str) -> int:
        for l, d in self.factors:
            if l == label:
                return d
        raise LayoutError(f"unknown label {label!r} in layout {self.labels}")

    def index_of(self, label: str) -> int:
        for i, (l, _) in enumerate(self.factors):
            if l == label:
                return i
        raise LayoutError(f"unknown label {label!r} in layout {self.labels}")

    def subset_dim(self, labels: Iterable[str]) -> int:
        return int(np.prod([self.dim_of(l) for l in labels], dtype=np.int64))

    def restrict(self, labels: Sequence[str]) -> "SystemLayout":
        """Sub-layout with the given labels, in this layout's order."""
        keep = set(labels)
        return SystemLayout(tuple(f for f in self.factors if f[0] in keep))

    def concat(self, other: "SystemLayout") -> "SystemLayout":
        overlap = set(self.labels) & set(other.labels)
        if overlap:
            raise LayoutError(f"label collision on {sorted(overlap)}")
        return SystemLayout(self.factors + other.factors)

    def reorder(self, labels: Sequence[str]) -> "SystemLayout":
        if set(labels) != set(self.labels) or len(labels) != len(self.labels):
            raise LayoutError(
                f"reorder {list(labels)} is not a permutation of {list(self.labels)}"
            )
        return SystemLayout(tuple((l, self.dim_of(l)) for l in labels))

    def __str__(self) -> str:
        return " ⊗ ".join(f"{l}:{d}" for l, d in self.factors) or "(scalar)"


def _as_layout(layout) -> SystemLayout:
    if isinstance(layout, SystemLayout):
        return layout
    return SystemLayout(tuple(layout))


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


class QuantumState:
    """Sub-normalized positive operator over a :class:`SystemLayout`.

    Construction hermitizes the matrix, clips eigenvalues in
    ``[-1e-9, 0)`` to zero and rejects anything more negative.  Pass
    ``validate=False`` only for matrices already known positive (used
    internally after unitary conjugations).  ``subnormalized=False``
    disables the trace check for operator-valued enlargements such as
    identity-filled embeddings.
    """

    __slots__ = ("layout", "matrix")

    def __init__(self, layout, matrix, *, validate: bool = True,
                 subnormalized: bool = True):
        layout = _as_layout(layout)
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (layout.dim, layout.dim):
            raise LayoutError(
                f"matrix shape {matrix.shape} does not match layout dim {layout.dim}"
            )
        if validate:
            if not np.allclose(matrix, matrix.conj().T, atol=HERM_TOL):
                raise ValueError("state matrix is not Hermitian within tolerance")
            matrix = 0.5 * (matrix + matrix.conj().T)
            w, v = np.linalg.eigh(matrix)
            if w.size and w[0] < -EIG_CLIP_TOL:
                raise ValueError(f"state has negative eigenvalue {w[0]:.3e}")
            if w.size and w[0] < 0.0:
                w = np.clip(w, 0.0, None)
                matrix = (v * w) @ v.conj().T
            tr = float(np.real(np.trace(matrix)))
            if subnormalized and tr > 1.0 + TRACE_TOL:
                raise ValueError(f"state trace {tr} exceeds 1")
        self.layout = layout
        self.matrix = matrix

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    @property
    def dim(self) -> int:
        return self.layout.dim

    def rank(self, tol: float = RANK_TOL) -> int:
        w = np.linalg.eigvalsh(self.matrix)
        return int(np.sum(w > tol))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def marginal(self, keep: Sequence[str]) -> "QuantumState":
        """Reduced state on ``keep``, discarding every other factor."""
        discard = [l for l in self.layout.labels if l not in set(keep)]
        return partial_trace(self, discard)

    def __repr__(self) -> str:
        return f"QuantumState({self.layout}, trace={self.trace:.6f})"


class PureState:
    """State vector over a layout; ``norm`` in ``(0, 1]``."""

    __slots__ = ("layout", "vector")

    def __init__(self, layout, vector, *, validate: bool = True):
        layout = _as_layout(layout)
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if vector.shape != (layout.dim,):
            raise LayoutError(
                f"vector length {vector.shape[0]} does not match layout dim {layout.dim}"
            )
        if validate:
            n = float(np.linalg.norm(vector))
            if n <= RANK_TOL:
                raise ValueError("pure state vector has zero norm")
            if n > 1.0 + 1e-7:
                raise ValueError(f"pure state norm {n} exceeds 1")
        self.layout = layout
        self.vector = vector

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    @property
    def dim(self) -> int:
        return self.layout.dim

    def to_density(self) -> QuantumState:
        return QuantumState(self.layout, np.outer(self.vector, self.vector.conj()),
                            validate=False)

    def marginal(self, keep: Sequence[str]) -> QuantumState:
        return self.to_density().marginal(keep)

    def tensor(self, other: "PureState") -> "PureState":
        layout = self.layout.concat(other.layout)
        return PureState(layout, np.kron(self.vector, other.vector), validate=False)

    def __repr__(self) -> str:
        return f"PureState({self.layout}, norm={self.norm:.6f})"


def _as_density(s) -> QuantumState:
    return s.to_density() if isinstance(s, PureState) else s


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------


class IsometryMap:
    """Linear map between layouts; rows index the output space.

    ``kind`` is certified at construction: ``unitary`` (V†V = VV† = I),
    ``isometry`` (V†V = I) or ``partial-isometry`` (V†V a projector).
    """

    __slots__ = ("input_layout", "output_layout", "matrix", "kind")

    def __init__(self, input_layout, output_layout, matrix, *, kind: str | None = None):
        input_layout = _as_layout(input_layout)
        output_layout = _as_layout(output_layout)
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (output_layout.dim, input_layout.dim):
            raise LayoutError(
                f"matrix shape {matrix.shape}, expected "
                f"({output_layout.dim}, {input_layout.dim})"
            )
        if kind is None:
            kind = _classify_isometry(matrix)
        self.input_layout = input_layout
        self.output_layout = output_layout
        self.matrix = matrix
        self.kind = kind

    def adjoint(self) -> "IsometryMap":
        return IsometryMap(self.output_layout, self.input_layout,
                           self.matrix.conj().T)

    def with_layouts(self, input_layout, output_layout) -> "IsometryMap":
        """Same matrix acting between relabeled registers."""
        return IsometryMap(input_layout, output_layout, self.matrix, kind=self.kind)

    def initial_projector(self) -> np.ndarray:
        return self.matrix.conj().T @ self.matrix

    def image_projector(self) -> np.ndarray:
        return self.matrix @ self.matrix.conj().T

    def __repr__(self) -> str:
        return f"IsometryMap({self.input_layout} -> {self.output_layout}, {self.kind})"


def _classify_isometry(matrix: np.ndarray) -> str:
    vtv = matrix.conj().T @ matrix
    eye_in = np.eye(matrix.shape[1])
    if np.allclose(vtv, eye_in, atol=ISO_TOL):
        if matrix.shape[0] == matrix.shape[1]:
            return "unitary"
        return "isometry"
    if np.allclose(vtv @ vtv, vtv, atol=ISO_TOL):
        return "partial-isometry"
    raise ValueError("matrix is not a (partial) isometry within tolerance")


# ---------------------------------------------------------------------------
# structural operations
# ---------------------------------------------------------------------------


def tensor_product(a: QuantumState, b: QuantumState) -> QuantumState:
    """Joint state on disjoint registers; trace multiplies."""
    layout = a.layout.concat(b.layout)
    return QuantumState(layout, np.kron(a.matrix, b.matrix), validate=False)


def _tensor_view(s: QuantumState) -> np.ndarray:
    dims = s.layout.dims
    return s.matrix.reshape(dims + dims)


def partial_trace(s: QuantumState, discard: Iterable[str]) -> QuantumState:
    """Trace out ``discard``; remaining factors keep their order."""
    discard = list(discard)
    labels = s.layout.labels
    for l in discard:
        if l not in labels:
            raise LayoutError(f"cannot trace out unknown label {l!r}")
    if not discard:
        return s
    k = len(labels)
    drop = set(discard)
    row_ids = list(range(k))
    col_ids = [i if labels[i] in drop else k + i for i in range(k)]
    out_ids = [i for i in range(k) if labels[i] not in drop]
    out_ids = out_ids + [k + i for i in range(k) if labels[i] not in drop]
    t = np.einsum(_tensor_view(s), row_ids + col_ids, out_ids)
    new_layout = SystemLayout(tuple(f for f in s.layout.factors if f[0] not in drop))
    return QuantumState(new_layout, t.reshape(new_layout.dim, new_layout.dim),
                        validate=False, subnormalized=False)


def permute(s: QuantumState, order: Sequence[str]) -> QuantumState:
    """Reorder factors to ``order`` (a permutation of the labels)."""
    new_layout = s.layout.reorder(order)
    if new_layout.labels == s.layout.labels:
        return s
    k = len(s.layout.factors)
    perm = [s.layout.index_of(l) for l in order]
    axes = perm + [k + p for p in perm]
    t = _tensor_view(s).transpose(axes)
    return QuantumState(new_layout, t.reshape(new_layout.dim, new_layout.dim),
                        validate=False, subnormalized=False)


def relabel(s, mapping: Mapping[str, str]):
    """Rename registers without touching the matrix (pure bookkeeping)."""
    factors = tuple((mapping.get(l, l), d) for l, d in s.layout.factors)
    layout = SystemLayout(factors)
    if isinstance(s, PureState):
        return PureState(layout, s.vector, validate=False)
    return QuantumState(layout, s.matrix, validate=False, subnormalized=False)


def permute_and_embed(s: QuantumState, target, fill: str = "identity") -> QuantumState:
    """Embed ``s`` into a larger layout, then reorder to match ``target``.

    Missing factors are filled with the identity (operator enlargement,
    trace grows by the filled dimension) or with the maximally mixed
    state (trace preserved).  Tracing the filled factors back out
    recovers ``s`` up to the fill normalization.
    """
    target = _as_layout(target)
    for l in s.layout.labels:
        if l not in target.labels:
            raise LayoutError(f"target layout is missing label {l!r}")
        if target.dim_of(l) != s.layout.dim_of(l):
            raise LayoutError(
                f"dimension mismatch on {l!r}: {s.layout.dim_of(l)} vs {target.dim_of(l)}"
            )
    missing = [f for f in target.factors if f[0] not in s.layout.labels]
    out = s
    for l, d in missing:
        if fill == "identity":
            filler = QuantumState(SystemLayout.of((l, d)), np.eye(d),
                                  validate=False, subnormalized=False)
        elif fill == "maximally_mixed":
            filler = maximally_mixed(l, d)
        else:
            raise ValueError(f"unknown fill policy {fill!r}")
        out = QuantumState(out.layout.concat(filler.layout),
                           np.kron(out.matrix, filler.matrix),
                           validate=False, subnormalized=False)
    return permute(out, target.labels)


def purify(s: QuantumState, ref_label: str) -> PureState:
    """Purification over a fresh reference of dimension ``rank(s)``."""
    if ref_label in s.layout.labels:
        raise LayoutError(f"reference label {ref_label!r} already in layout")
    if s.trace <= RANK_TOL:
        raise ValueError("cannot purify a (near-)zero state")
    w, v = np.linalg.eigh(s.matrix)
    keep = w > RANK_TOL
    w = w[keep]
    v = v[:, keep]
    r = w.size
    # |psi> = sum_i sqrt(w_i) |v_i> ⊗ |i>_ref
    vec = (v * np.sqrt(w)).reshape(-1)  # shape (dim*r,), ref index fastest
    layout = s.layout.concat(SystemLayout.of((ref_label, r)))
    return PureState(layout, vec, validate=False)


def apply_isometry(v: IsometryMap, s):
    """Apply ``v`` on its input registers, identity on the rest.

    Output layout is ``v.output_layout`` followed by the untouched
    factors in their original order.  Works on density and pure states.
    """
    pure = isinstance(s, PureState)
    labels = s.layout.labels
    for l, d in v.input_layout.factors:
        if l not in labels:
            raise LayoutError(f"isometry input {l!r} not present in state")
        if s.layout.dim_of(l) != d:
            raise LayoutError(
                f"dimension mismatch on {l!r}: state {s.layout.dim_of(l)}, map {d}"
            )
    rest = [l for l in labels if l not in set(v.input_layout.labels)]
    order = list(v.input_layout.labels) + rest
    rest_layout = s.layout.restrict(rest)
    out_layout = v.output_layout.concat(rest_layout)
    big = np.kron(v.matrix, np.eye(rest_layout.dim))
    if pure:
        sp = _permute_pure(s, order)
        return PureState(out_layout, big @ sp.vector, validate=False)
    sp = permute(s, order)
    return QuantumState(out_layout, big @ sp.matrix @ big.conj().T,
                        validate=False, subnormalized=False)


def _permute_pure(s: PureState, order: Sequence[str]) -> PureState:
    new_layout = s.layout.reorder(order)
    if new_layout.labels == s.layout.labels:
        return s
    perm = [s.layout.index_of(l) for l in order]
    t = s.vector.reshape(s.layout.dims).transpose(perm)
    return PureState(new_layout, t.reshape(-1), validate=False)


def permute_pure(s: PureState, order: Sequence[str]) -> PureState:
    return _permute_pure(s, order)


# ---------------------------------------------------------------------------
# Uhlmann-type isometries
# ---------------------------------------------------------------------------


def uhlmann_partial_isometry(pure1: PureState, pure2: PureState,
                             shared: Sequence[str]) -> IsometryMap:
    """Partial isometry between the non-shared registers of two pure states.

    ``shared`` names registers present in both states with equal
    dimensions.  The returned map ``V`` acts on the remaining registers
    of ``pure1`` and lands on the remaining registers of ``pure2``; it
    maximizes ``|<pure2| (I ⊗ V) |pure1>|``, which equals the fidelity
    of the two shared-register marginals (built from the SVD of the
    cross-Gram matrix of the purifications).  Rank-deficient directions
    are completed with orthonormal columns, so the map is a full
    isometry whenever the target space is at least as large as the
    source.
    """
    shared = list(shared)
    for l in shared:
        if pure1.layout.dim_of(l) != pure2.layout.dim_of(l):
            raise LayoutError(f"shared register {l!r} has mismatched dimensions")
    k1 = [l for l in pure1.layout.labels if l not in shared]
    k2 = [l for l in pure2.layout.labels if l not in shared]
    p1 = _permute_pure(pure1, shared + k1)
    p2 = _permute_pure(pure2, shared + k2)
    ds = p1.layout.subset_dim(shared)
    dk1 = p1.layout.subset_dim(k1)
    dk2 = p2.layout.subset_dim(k2)
    m1 = p1.vector.reshape(ds, dk1)
    m2 = p2.vector.reshape(ds, dk2)
    cross = m1.T @ m2.conj()  # (dk1, dk2); |<p2|(I⊗V)|p1>| = |Tr[cross^T V^T]|-ish
    u, sv, vh = np.linalg.svd(cross, full_matrices=False)
    v_mat = vh.conj().T @ u.conj().T  # (dk2, dk1)
    return IsometryMap(pure1.layout.restrict(k1), pure2.layout.restrict(k2), v_mat)


# ---------------------------------------------------------------------------
# spectral helpers
# ---------------------------------------------------------------------------


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix via eigendecomposition."""
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T

def psd_inv_sqrt(m: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Pseudo-inverse square root; eigenvalues below ``tol`` are dropped."""
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    inv = np.where(w > tol, 1.0 / np.sqrt(np.clip(w, tol, None)), 0.0)
    return (v * inv) @ v.conj().T

def support_projector(m: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    keep = w > tol
    vk = v[:, keep]
    return vk @ vk.conj().T


# ---------------------------------------------------------------------------
# norms and distances
# ---------------------------------------------------------------------------


def _aligned_pair(a: QuantumState, b: QuantumState) -> tuple[np.ndarray, np.ndarray]:
    if set(a.layout.labels) != set(b.layout.labels):
        raise LayoutError(
            f"layouts carry different registers: {a.layout.labels} vs {b.layout.labels}"
        )
    for l in a.layout.labels:
        if a.layout.dim_of(l) != b.layout.dim_of(l):
            raise LayoutError(f"dimension mismatch on register {l!r}")
    b = permute(b, a.layout.labels)
    return a.matrix, b.matrix


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|."""
    if np.allclose(m, m.conj().T, atol=HERM_TOL):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def trace_norm_distance(a, b) -> float:
    """``|| a - b ||_1``."""
    ma, mb = _aligned_pair(_as_density(a), _as_density(b))
    return trace_norm(ma - mb)


def fidelity(a, b) -> float:
    """``F(a, b) = || sqrt(a) sqrt(b) ||_1``."""
    ma, mb = _aligned_pair(_as_density(a), _as_density(b))
    prod = psd_sqrt(ma) @ psd_sqrt(mb)
    return float(np.sum(np.linalg.svd(prod, compute_uv=False)))


def generalized_fidelity(a, b) -> float:
    """Fidelity plus the trace-deficit term for sub-normalized states."""
    a = _as_density(a)
    b = _as_density(b)
    f = fidelity(a, b)
    da = max(0.0, 1.0 - a.trace)
    db = max(0.0, 1.0 - b.trace)
    return f + math.sqrt(da * db)


def purified_distance(a, b) -> float:
    """``P(a, b) = sqrt(1 - Fbar(a, b)^2)``, a metric on sub-normalized states."""
    fbar = min(1.0, generalized_fidelity(a, b))
    return math.sqrt(max(0.0, 1.0 - fbar * fbar))


# ---------------------------------------------------------------------------
# sampling and standard states
# ---------------------------------------------------------------------------


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def haar_unitary(seed: int, dim: int, label: str = "S") -> IsometryMap:
    """Haar-distributed unitary on one ``dim``-dimensional register.

    QR of a complex Ginibre matrix with the phase convention that makes
    the distribution exactly Haar; deterministic for a fixed seed.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = _generator(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    layout = SystemLayout.of((label, dim))
    return IsometryMap(layout, layout, q, kind="unitary")


def random_pure_state(seed: int, layout) -> PureState:
    """Unit vector with Haar-uniform direction; deterministic per seed."""
    layout = _as_layout(layout)
    rng = _generator(seed)
    v = rng.standard_normal(layout.dim) + 1j * rng.standard_normal(layout.dim)
    return PureState(layout, v / np.linalg.norm(v), validate=False)


def maximally_mixed(label: str, dim: int) -> QuantumState:
    return QuantumState(SystemLayout.of((label, dim)), np.eye(dim) / dim,
                        validate=False)


def max_entangled_pure(label_a: str, label_b: str, dim: int) -> PureState:
    vec = np.eye(dim).reshape(-1) / math.sqrt(dim)
    layout = SystemLayout.of((label_a, dim), (label_b, dim))
    return PureState(layout, vec, validate=False)


def max_entangled(label_a: str, label_b: str, dim: int) -> QuantumState:
    return max_entangled_pure(label_a, label_b, dim).to_density()


def basis_state(layout, index: int) -> QuantumState:
    layout = _as_layout(layout)
    m = np.zeros((layout.dim, layout.dim), dtype=complex)
    m[index, index] = 1.0
    return QuantumState(layout, m, validate=False)


def standard_state(kind: str, *args) -> QuantumState:
    """Factory for the named standard states.

    ``standard_state("maximally_mixed", label, dim)``,
    ``standard_state("max_entangled", label_a, label_b, dim)``,
    ``standard_state("basis", layout, index)``.
    """
    if kind == "maximally_mixed":
        return maximally_mixed(*args)
    if kind == "max_entangled":
        return max_entangled(*args)
    if kind == "basis":
        return basis_state(*args)
    raise ValueError(f"unknown standard state kind {kind!r}")


# ---------------------------------------------------------------------------
# JSON serialization (bit-faithful at double precision)
# ---------------------------------------------------------------------------


def _layout_to_json(layout: SystemLayout) -> list:
    return [[l, d] for l, d in layout.factors]


def _layout_from_json(data) -> SystemLayout:
    return SystemLayout(tuple((str(l), int(d)) for l, d in data))


def state_to_json(s: QuantumState) -> str:
    payload = {
        "layout": _layout_to_json(s.layout),
        "re": np.real(s.matrix).tolist(),
        "im": np.imag(s.matrix).tolist(),
    }
    return json.dumps(payload)


def state_from_json(text: str) -> QuantumState:
    data = json.loads(text)
    layout = _layout_from_json(data["layout"])
    m = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
    return QuantumState(layout, m, validate=False, subnormalized=False)


def isometry_to_json(v: IsometryMap) -> str:
    payload = {
        "input_layout": _layout_to_json(v.input_layout),
        "output_layout": _layout_to_json(v.output_layout),
        "re": np.real(v.matrix).tolist(),
        "im": np.imag(v.matrix).tolist(),
        "kind": v.kind,
    }
    return json.dumps(payload)


def isometry_from_json(text: str) -> IsometryMap:
    data = json.loads(text)
    m = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
    return IsometryMap(
        _layout_from_json(data["input_layout"]),
        _layout_from_json(data["output_layout"]),
        m,
        kind=data.get("kind"),
    )
