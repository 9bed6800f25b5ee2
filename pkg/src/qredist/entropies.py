"""One-shot entropy quantities: exact, smoothed, and von Neumann.

Everything is in bits (base-2 logarithms).  The optimization-defined
quantities are computed through the :mod:`qredist.sdp` kernel:

* max-relative entropy ``D_max(rho || sigma)`` — spectral, no SDP,
* conditional min-entropy ``H_min(A|B) = -log min{Tr X : I ⊗ X >= rho}``,
* conditional max-entropy via duality on a purification,
* max-information ``I_max(A:B) = log min{Tr X : rho_A ⊗ X >= rho}``.

Smoothed variants optimize jointly over a sub-normalized state within a
purified-distance ball of the input.  For normalized inputs the
generalized fidelity equals the plain fidelity regardless of the trace
of the candidate, so the ball constraint is exactly ``F(cand, rho) >=
sqrt(1 - eps^2)`` and is encoded by the fidelity semidefinite block.
Two algebraic reductions are applied when exact:

* rank-one inputs reduce to a Schmidt-space program of side equal to
  the Schmidt rank (phase-twirl symmetry argument),
* unconditional smoothing of a mixed state reduces to a commuting
  program diagonal in the eigenbasis (pinching argument).

Both are cross-checked against the generic program in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import registers as reg
from .registers import (
    PureState,
    QuantumState,
    SystemLayout,
    partial_trace,
    permute,
    purify,
)
from .sdp import (
    CongruenceTerm,
    KronTerm,
    SdpError,
    SdpProblem,
    SolverConfig,
    TraceTerm,
    solve_sdp,
)

__all__ = [
    "Partition",
    "EntropyResult",
    "dmax",
    "hmin_cond",
    "hmax_cond",
    "imax",
    "smooth_hmin",
    "smooth_hmax",
    "smooth_imax",
    "vn_entropy",
    "vn_conditional",
    "vn_mutual",
    "vn_cond_mutual",
    "von_neumann_suite",
    "aep_delta",
    "aep_h",
    "aep_bounds",
]

LOG2 = math.log(2.0)
SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class Partition:
    """Grouping of register labels into the two roles of a bipartite quantity.

    For conditional entropies ``first`` is the target system and
    ``second`` the conditioning system; for max-information they are the
    two sides ``A : B``.  Labels not listed are traced out first.
    """

    first: tuple[str, ...]
    second: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "first", tuple(self.first))
        object.__setattr__(self, "second", tuple(self.second))
        if set(self.first) & set(self.second):
            raise ValueError("partition roles must be disjoint")
        if not self.first:
            raise ValueError("partition needs at least one target label")

    @staticmethod
    def parse(text: str) -> "Partition":
        """Parse ``"A|B"`` / ``"A:B"`` forms; commas separate multiple labels."""
        for sep in ("|", ":"):
            if sep in text:
                left, right = text.split(sep, 1)
                return Partition(_split_labels(left), _split_labels(right))
        return Partition(_split_labels(text), ())

    def __str__(self) -> str:
        return ",".join(self.first) + ("|" + ",".join(self.second) if self.second else "")


def _split_labels(text: str) -> tuple[str, ...]:
    out = tuple(t.strip() for t in text.split(",") if t.strip())
    return out


@dataclass
class EntropyResult:
    """Value in bits plus the solver certificate and optional witnesses.

    ``witness`` is the optimizing nearby state of a smoothed quantity;
    ``optimal_sigma`` the normalized conditioning operator of the inner
    optimization where one exists.
    """

    quantity: str
    value: float
    epsilon: float = 0.0
    gap: float | None = None
    witness: QuantumState | None = None
    optimal_sigma: QuantumState | None = None
    witness_distance: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "quantity": self.quantity,
            "value_bits": self.value,
            "epsilon": self.epsilon,
            "gap": self.gap,
        }
        if self.witness is not None:
            out["witness"] = {
                "layout": [[l, d] for l, d in self.witness.layout.factors],
                "re": np.real(self.witness.matrix).tolist(),
                "im": np.imag(self.witness.matrix).tolist(),
            }
            out["witness_distance"] = self.witness_distance
        return out


def _fresh_label(base: str, taken) -> str:
    label = base
    while label in taken:
        label += "_"
    return label


def _prepare(rho: QuantumState, part: Partition) -> QuantumState:
    """Trace out extra labels and order factors as [first..., second...]."""
    wanted = set(part.first) | set(part.second)
    for l in wanted:
        rho.layout.dim_of(l)  # raises LayoutError on unknown labels
    extra = [l for l in rho.layout.labels if l not in wanted]
    s = partial_trace(rho, extra) if extra else rho
    return permute(s, list(part.first) + list(part.second))


def _clip_state(layout, matrix) -> QuantumState:
    """Build a state from solver output, clipping small negative eigenvalues."""
    m = 0.5 * (matrix + matrix.conj().T)
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    return QuantumState(layout, (v * w) @ v.conj().T, validate=False,
                        subnormalized=False)


# ---------------------------------------------------------------------------
# exact quantities
# ---------------------------------------------------------------------------


def dmax(rho: QuantumState, sigma: QuantumState) -> EntropyResult:
    """Max-relative entropy: least ``lam`` with ``2^lam sigma >= rho``.

    Returns ``inf`` when the support of ``rho`` sticks out of the
    support of ``sigma`` (rank threshold ``1e-10``).
    """
    if set(sigma.layout.labels) != set(rho.layout.labels):
        raise reg.LayoutError("dmax arguments must carry the same registers")
    a, b = rho, permute(sigma, rho.layout.labels)
    if b.layout != rho.layout:
        raise reg.LayoutError("dmax arguments have mismatched register dimensions")
    proj = reg.support_projector(b.matrix, SUPPORT_TOL)
    off = a.matrix - proj @ a.matrix @ proj
    leak = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (off + off.conj().T)))))
    if leak > 1e-9:
        return EntropyResult("dmax", float("inf"))
    inv_sqrt = reg.psd_inv_sqrt(b.matrix, SUPPORT_TOL)
    core = inv_sqrt @ a.matrix @ inv_sqrt
    lam = float(np.max(np.linalg.eigvalsh(0.5 * (core + core.conj().T))))
    if lam <= 0.0:
        return EntropyResult("dmax", float("-inf"))
    return EntropyResult("dmax", math.log2(lam))


def _dominating_trace_problem(rho_mat: np.ndarray, d_first: int, d_second: int,
                              left: np.ndarray) -> SdpProblem:
    """min Tr X  s.t.  left ⊗ X >= rho,  X >= 0  (X lives on the second side)."""
    p = SdpProblem()
    p.add_var("X", d_second)
    p.set_objective({"X": np.eye(d_second)})
    p.add_lmi(d_first * d_second, -rho_mat, [KronTerm("X", left)], name="dominate")
    p.add_lmi(d_second, np.zeros((d_second, d_second)),
              [CongruenceTerm("X", np.eye(d_second))], name="X_psd")
    return p


def _solved(problem: SdpProblem, config: SolverConfig | None, what: str):
    sol = solve_sdp(problem, config)
    if sol.status != "optimal":
        raise SdpError(f"{what}: solver returned status {sol.status!r} "
                       f"(raw {sol.raw_status!r})")
    return sol


def hmin_cond(rho: QuantumState, part: Partition,
              config: SolverConfig | None = None) -> EntropyResult:
    """Conditional min-entropy ``H_min(first | second)`` in bits."""
    s = _prepare(rho, part)
    d_a = s.layout.subset_dim(part.first)
    d_b = s.layout.subset_dim(part.second) if part.second else 1
    sol = _solved(_dominating_trace_problem(s.matrix, d_a, d_b, np.eye(d_a)),
                  config, "hmin_cond")
    t = sol.objective_value
    sigma = None
    if t > 1e-14 and part.second:
        sigma = _clip_state(s.layout.restrict(part.second),
                            sol.variables["X"] / np.trace(sol.variables["X"]).real)
    value = -math.log2(t) if t > 1e-300 else float("inf")
    return EntropyResult("hmin", value, gap=sol.duality_gap, optimal_sigma=sigma)


def hmax_cond(rho: QuantumState, part: Partition,
              config: SolverConfig | None = None) -> EntropyResult:
    """Conditional max-entropy via ``H_max(A|B) = -H_min(A|R)`` on a purification."""
    s = _prepare(rho, part)
    ref = _fresh_label("Rref", s.layout.labels)
    psi = purify(s, ref)
    res = hmin_cond(psi.to_density(), Partition(part.first, (ref,)), config)
    return EntropyResult("hmax", -res.value, gap=res.gap)


def _compress_first(s: QuantumState, part: Partition):
    """Restrict the first side to the support of its marginal.

    Returns the compressed state (ordered first..., second...), the
    compression isometry column matrix, and the compressed dimension.
    """
    d_a = s.layout.subset_dim(part.first)
    d_b = s.layout.subset_dim(part.second) if part.second else 1
    rho_a = partial_trace(s, list(part.second)) if part.second else s
    w, v = np.linalg.eigh(rho_a.matrix)
    keep = w > SUPPORT_TOL
    va = v[:, keep]
    r = va.shape[1]
    if r == d_a:
        return s, None, d_a, d_b
    big = np.kron(va, np.eye(d_b))
    compressed = big.conj().T @ s.matrix @ big
    layout = SystemLayout.of(("_Ac", r)).concat(s.layout.restrict(part.second))
    return (QuantumState(layout, compressed, validate=False, subnormalized=False),
            va, r, d_b)


def imax(rho: QuantumState, part: Partition,
         config: SolverConfig | None = None) -> EntropyResult:
    """Max-information ``I_max(first : second)`` in bits."""
    s = _prepare(rho, part)
    comp, va, d_a, d_b = _compress_first(s, part)
    rho_a = comp.matrix.reshape(d_a, d_b, d_a, d_b)
    rho_a = np.einsum(rho_a, [0, 1, 2, 1], [0, 2]) if part.second else comp.matrix
    sol = _solved(_dominating_trace_problem(comp.matrix, d_a, d_b, rho_a),
                  config, "imax")
    t = sol.objective_value
    sigma = None
    if t > 1e-14 and part.second:
        sigma = _clip_state(s.layout.restrict(part.second),
                            sol.variables["X"] / np.trace(sol.variables["X"]).real)
    value = math.log2(t) if t > 1e-300 else float("-inf")
    return EntropyResult("imax", value, gap=sol.duality_gap, optimal_sigma=sigma)


# ---------------------------------------------------------------------------
# smoothed quantities
# ---------------------------------------------------------------------------


def _check_eps(eps: float):
    if not (0.0 <= eps < 1.0):
        raise ValueError(f"smoothing parameter must be in [0, 1), got {eps}")


def _require_normalized(s: QuantumState, what: str):
    if abs(s.trace - 1.0) > 1e-7:
        raise ValueError(f"{what} expects a normalized input state "
                         f"(trace {s.trace:.6f}); the fidelity ball encoding "
                         "relies on it")


def _schmidt(s: QuantumState, d_a: int, d_b: int, tol: float = 1e-9):
    """Schmidt vectors of a rank-one bipartite state; None if not rank one."""
    w, v = np.linalg.eigh(s.matrix)
    if w[-1] < tol or np.any(w[:-1] > tol):
        return None
    psi = v[:, -1] * math.sqrt(w[-1])
    m = psi.reshape(d_a, d_b)
    u, sv, vh = np.linalg.svd(m, full_matrices=False)
    keep = sv > tol
    return u[:, keep], sv[keep], vh[keep, :].conj().T  # columns of each


def _smooth_pure_bipartite(kind: str, schmidt, d_a: int, d_b: int,
                           eps: float, config) -> tuple[float, float, np.ndarray,
                                                        np.ndarray]:
    """Reduced Schmidt-space program for rank-one inputs.

    Phase-twirling in the Schmidt bases shows the optimizer can be taken
    of the form ``cand = B Y B†`` with ``B`` the matrix of Schmidt pair
    columns and the conditioning operator diagonal, leaving an SDP of
    side equal to the Schmidt rank.
    """
    u, sv, vmat = schmidt
    r = sv.size
    f0sq = max(0.0, 1.0 - eps * eps)
    p = SdpProblem()
    p.add_var("Y", r)
    for i in range(r):
        p.add_var(f"x{i}", 1)
    p.set_objective({f"x{i}": np.eye(1) for i in range(r)})
    # diag(c_i x_i) - Y >= 0 with c_i = 1 (hmin) or p_i (imax)
    coeffs = np.ones(r) if kind == "hmin" else sv ** 2
    terms = [CongruenceTerm("Y", np.eye(r), coeff=-1.0)]
    for i in range(r):
        e = np.zeros((r, r))
        e[i, i] = coeffs[i]
        terms.append(KronTerm(f"x{i}", e))
    p.add_lmi(r, np.zeros((r, r)), terms, name="dominate")
    p.add_lmi(r, np.zeros((r, r)), [CongruenceTerm("Y", np.eye(r))], name="Y_psd")
    for i in range(r):
        p.add_scalar_ineq(0.0, [TraceTerm(f"x{i}", np.eye(1))], name=f"x{i}_pos")
    p.add_scalar_ineq(1.0, [TraceTerm("Y", np.eye(r), coeff=-1.0)], name="subnorm")
    p.add_scalar_ineq(-f0sq, [TraceTerm("Y", np.outer(sv, sv))], name="ball")
    sol = _solved(p, config, f"smooth_{kind} (pure reduction)")
    t = sol.objective_value
    pair_cols = np.einsum("ai,bi->abi", u, vmat).reshape(d_a * d_b, r)
    cand = pair_cols @ sol.variables["Y"] @ pair_cols.conj().T
    xs = np.array([float(np.real(sol.variables[f"x{i}"][0, 0])) for i in range(r)])
    x_op = (vmat * xs) @ vmat.conj().T
    return t, sol.duality_gap, cand, x_op


def _smooth_commuting_unconditional(s: QuantumState, eps: float, config
                                    ) -> tuple[float, float, np.ndarray]:
    """Unconditional smoothing reduces to a program diagonal in the eigenbasis."""
    w, v = np.linalg.eigh(s.matrix)
    keep = w > SUPPORT_TOL
    lam = w[keep]
    vk = v[:, keep]
    r = lam.size
    f0 = math.sqrt(max(0.0, 1.0 - eps * eps))
    p = SdpProblem()
    p.add_var("x", 1)
    for i in range(r):
        p.add_var(f"r{i}", 1)
        p.add_var(f"t{i}", 1)
    p.set_objective({"x": np.eye(1)})
    e01 = np.array([[0.0, 1.0], [1.0, 0.0]])
    e00 = np.array([[1.0, 0.0], [0.0, 0.0]])
    for i in range(r):
        # [[r_i, t_i], [t_i, lam_i]] >= 0  <=>  r_i lam_i >= t_i^2
        p.add_lmi(2, np.diag([0.0, lam[i]]),
                  [KronTerm(f"r{i}", e00), KronTerm(f"t{i}", e01)],
                  name=f"fid{i}")
        p.add_scalar_ineq(0.0, [TraceTerm("x", np.eye(1)),
                                TraceTerm(f"r{i}", np.eye(1), coeff=-1.0)],
                          name=f"cap{i}")
    p.add_scalar_ineq(1.0, [TraceTerm(f"r{i}", np.eye(1), coeff=-1.0)
                            for i in range(r)], name="subnorm")
    p.add_scalar_ineq(-f0, [TraceTerm(f"t{i}", np.eye(1)) for i in range(r)],
                      name="ball")
    sol = _solved(p, config, "smooth_hmin (commuting reduction)")
    rs = np.array([float(np.real(sol.variables[f"r{i}"][0, 0])) for i in range(r)])
    cand = (vk * rs) @ vk.conj().T
    return sol.objective_value, sol.duality_gap, cand


def _smooth_ball_general(kind: str, s: QuantumState, d_a: int, d_b: int,
                         eps: float, config) -> tuple[float, float, np.ndarray,
                                                      np.ndarray]:
    """Generic joint program over (candidate, X, fidelity block).

    The fidelity constraint ``F(cand, rho) >= f0`` enters through the
    block ``[[cand, L], [L†, rho_r]] >= 0`` with ``rho_r`` the input
    compressed to its support (keeps the program strictly feasible for
    rank-deficient inputs) and ``Re Tr[L V†] >= f0``.
    """
    m = d_a * d_b
    if m > 32:
        raise SdpError(
            f"generic smoothing at state dimension {m} exceeds the supported "
            "dense desk scale (32); rank-one and trivially-conditioned inputs "
            "reduce algebraically and go much higher"
        )
    w, v = np.linalg.eigh(s.matrix)
    keep = w > SUPPORT_TOL
    vsup = v[:, keep]
    r = vsup.shape[1]
    rho_r = vsup.conj().T @ s.matrix @ vsup
    f0 = math.sqrt(max(0.0, 1.0 - eps * eps))

    if kind == "imax":
        t4 = s.matrix.reshape(d_a, d_b, d_a, d_b)
        left = np.einsum(t4, [0, 1, 2, 1], [0, 2])
    else:
        left = np.eye(d_a)

    p = SdpProblem()
    p.add_var("W", m + r)
    p.add_var("X", d_b)
    p.set_objective({"W": np.zeros((m + r, m + r)), "X": np.eye(d_b)})
    p.add_lmi(m + r, np.zeros((m + r, m + r)),
              [CongruenceTerm("W", np.eye(m + r))], name="W_psd")
    e_up = np.zeros((m, m + r))
    e_up[:, :m] = np.eye(m)
    p.add_lmi(m, np.zeros((m, m)),
              [KronTerm("X", left), CongruenceTerm("W", e_up, coeff=-1.0)],
              name="dominate")
    p.add_lmi(d_b, np.zeros((d_b, d_b)), [CongruenceTerm("X", np.eye(d_b))],
              name="X_psd")
    f_up = np.zeros((m + r, m + r), dtype=complex)
    f_up[:m, :m] = np.eye(m)
    p.add_scalar_ineq(1.0, [TraceTerm("W", f_up, coeff=-1.0)], name="subnorm")
    f_off = np.zeros((m + r, m + r), dtype=complex)
    f_off[:m, m:] = 0.5 * vsup
    f_off[m:, :m] = 0.5 * vsup.conj().T
    p.add_scalar_ineq(-f0, [TraceTerm("W", f_off)], name="ball")
    p.pin_diagonal_block("W", m, rho_r, name="pin_rho")
    sol = _solved(p, config, f"smooth_{kind}")
    cand = sol.variables["W"][:m, :m]
    return sol.objective_value, sol.duality_gap, cand, sol.variables["X"]


def _smooth_min_or_imax(kind: str, rho: QuantumState, part: Partition, eps: float,
                        config: SolverConfig | None) -> EntropyResult:
    _check_eps(eps)
    if eps == 0.0:
        base = hmin_cond(rho, part, config) if kind == "hmin" else imax(rho, part, config)
        base.epsilon = 0.0
        base.witness = _prepare(rho, part)
        base.witness_distance = 0.0
        base.quantity = "smooth_" + kind
        return base
    s = _prepare(rho, part)
    _require_normalized(s, f"smooth_{kind}")
    d_a = s.layout.subset_dim(part.first)
    d_b = s.layout.subset_dim(part.second) if part.second else 1
    x_op = None
    schmidt = _schmidt(s, d_a, d_b)
    if schmidt is not None:
        t, gap, cand, x_op = _smooth_pure_bipartite(kind, schmidt, d_a, d_b,
                                                    eps, config)
    elif kind == "hmin" and d_b == 1:
        t, gap, cand = _smooth_commuting_unconditional(s, eps, config)
    else:
        if kind == "imax":
            comp, va, ra, _ = _compress_first(s, part)
            t, gap, cand_c, x_op = _smooth_ball_general(kind, comp, ra, d_b, eps, config)
            if va is not None:
                big = np.kron(va, np.eye(d_b))
                cand = big @ cand_c @ big.conj().T
            else:
                cand = cand_c
        else:
            t, gap, cand, x_op = _smooth_ball_general(kind, s, d_a, d_b, eps, config)
    witness = _clip_state(s.layout, cand)
    sign = -1.0 if kind == "hmin" else 1.0
    value = sign * math.log2(t) if t > 1e-300 else sign * float("-inf")
    sigma = None
    if x_op is not None and part.second:
        trx = float(np.real(np.trace(x_op)))
        if trx > 1e-14:
            sigma = _clip_state(s.layout.restrict(part.second), x_op / trx)
    return EntropyResult(
        "smooth_" + kind, value, epsilon=eps, gap=gap, witness=witness,
        optimal_sigma=sigma,
        witness_distance=reg.purified_distance(witness, s),
    )


def smooth_hmin(rho: QuantumState, part: Partition, eps: float,
                config: SolverConfig | None = None) -> EntropyResult:
    """Smooth conditional min-entropy: best ``H_min`` within the eps-ball."""
    return _smooth_min_or_imax("hmin", rho, part, eps, config)


def smooth_imax(rho: QuantumState, part: Partition, eps: float,
                config: SolverConfig | None = None) -> EntropyResult:
    """Smooth max-information with the first marginal held fixed.

    Joint smoothing of the reference marginal is non-convex; holding it
    at the input marginal keeps the program semidefinite.  The value is
    reported under this fixed-marginal convention and is cross-checked
    against direct ball searches in the tests.
    """
    return _smooth_min_or_imax("imax", rho, part, eps, config)


def smooth_hmax(rho: QuantumState, part: Partition, eps: float,
                config: SolverConfig | None = None) -> EntropyResult:
    """Smooth conditional max-entropy by duality on a purification.

    The witness on the original registers is recovered from the dual
    optimizer by purifying it and moving the purifying register onto the
    conditioning system with the matching isometry; the sandwich
    identity makes its max-entropy equal the returned value.
    """
    _check_eps(eps)
    if eps == 0.0:
        base = hmax_cond(rho, part, config)
        base.epsilon = 0.0
        base.witness = _prepare(rho, part)
        base.witness_distance = 0.0
        base.quantity = "smooth_hmax"
        return base
    s = _prepare(rho, part)
    _require_normalized(s, "smooth_hmax")
    ref = _fresh_label("Rref", s.layout.labels)
    psi = purify(s, ref)
    rho_ar = psi.marginal(list(part.first) + [ref])
    res = smooth_hmin(rho_ar, Partition(part.first, (ref,)), eps, config)
    witness = None
    distance = None
    if res.witness is not None:
        env = _fresh_label("E", psi.layout.labels)
        w_pure = purify(res.witness, env)
        v = reg.uhlmann_partial_isometry(w_pure, psi,
                                         shared=list(part.first) + [ref])
        moved = reg.apply_isometry(v, w_pure)
        witness = moved.marginal(list(part.first) + list(part.second))
        witness = permute(witness, s.layout.labels)
        distance = reg.purified_distance(witness, s)
    return EntropyResult("smooth_hmax", -res.value, epsilon=eps, gap=res.gap,
                         witness=witness, witness_distance=distance)


# ---------------------------------------------------------------------------
# von Neumann quantities
# ---------------------------------------------------------------------------


def _entropy_of_matrix(m: np.ndarray) -> float:
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    w = w[w > 1e-14]
    return float(-np.sum(w * np.log2(w)))


def vn_entropy(rho: QuantumState, labels: Sequence[str] | None = None) -> float:
    s = rho if labels is None else rho.marginal(list(labels))
    return _entropy_of_matrix(s.matrix)


def vn_conditional(rho: QuantumState, a: Sequence[str], b: Sequence[str]) -> float:
    """``H(A|B) = H(AB) - H(B)``."""
    return vn_entropy(rho, list(a) + list(b)) - (vn_entropy(rho, list(b)) if b else 0.0)


def vn_mutual(rho: QuantumState, a: Sequence[str], b: Sequence[str]) -> float:
    return vn_entropy(rho, a) + vn_entropy(rho, b) - vn_entropy(rho, list(a) + list(b))


def vn_cond_mutual(rho: QuantumState, a: Sequence[str], b: Sequence[str],
                   c: Sequence[str]) -> float:
    """``I(A:B|C) = H(AC) + H(BC) - H(C) - H(ABC)``."""
    ac = vn_entropy(rho, list(a) + list(c))
    bc = vn_entropy(rho, list(b) + list(c))
    cc = vn_entropy(rho, list(c)) if c else 0.0
    abc = vn_entropy(rho, list(a) + list(b) + list(c))
    return ac + bc - cc - abc


def von_neumann_suite(rho: QuantumState, a: Sequence[str], b: Sequence[str],
                      c: Sequence[str] | None = None) -> dict:
    """Entropy, conditional entropy, mutual and conditional mutual information."""
    out = {
        "H_A": vn_entropy(rho, a),
        "H_A_given_B": vn_conditional(rho, a, b),
        "I_A_B": vn_mutual(rho, a, b),
    }
    if c is not None:
        out["I_A_B_given_C"] = vn_cond_mutual(rho, a, b, c)
    return out


# ---------------------------------------------------------------------------
# asymptotic equipartition bounds
# ---------------------------------------------------------------------------


def aep_delta(eps: float, v: float) -> float:
    """``4 log2(v) sqrt(log2(2 / eps^2))``."""
    return 4.0 * math.log2(v) * math.sqrt(math.log2(2.0 / (eps * eps)))


def aep_h(eps: float, eps_prime: float) -> float:
    """``log2(1 / (1 - (eps sqrt(1-eps'^2) + eps' sqrt(1-eps^2))^2))``."""
    inner = eps * math.sqrt(1.0 - eps_prime ** 2) + eps_prime * math.sqrt(1.0 - eps ** 2)
    return math.log2(1.0 / (1.0 - inner * inner))


def aep_bounds(rho: QuantumState, part: Partition, n: int, eps: float,
               eps_prime: float, config: SolverConfig | None = None) -> dict:
    """Finite-n envelope for the per-copy smooth conditional min-entropy.

    Returns ``H(A|B) - delta(eps, v)/sqrt(n)`` and
    ``H(A|B) + delta(eps', v)/sqrt(n) + h(eps, eps')/n`` along with the
    individual terms; ``v`` is built from the two conditional
    max-entropies of the state and its purification.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must be in (0, 1)")
    if not (0.0 < eps_prime <= 1.0 - eps):
        raise ValueError("eps_prime must be in (0, 1 - eps]")
    if n < 1:
        raise ValueError("n must be >= 1")
    s = _prepare(rho, part)
    ref = _fresh_label("Rref", s.layout.labels)
    psi = purify(s, ref)
    hmax_ab = hmax_cond(s, part, config).value
    rho_ar = psi.marginal(list(part.first) + [ref])
    hmax_ar = hmax_cond(rho_ar, Partition(part.first, (ref,)), config).value
    v = math.sqrt(2.0 ** hmax_ab) + math.sqrt(2.0 ** hmax_ar) + 1.0
    d_lo = aep_delta(eps, v)
    d_hi = aep_delta(eps_prime, v)
    h_term = aep_h(eps, eps_prime)
    h_cond = vn_conditional(s, part.first, part.second)
    return {
        "h_cond": h_cond,
        "v": v,
        "delta_lower": d_lo,
        "delta_upper": d_hi,
        "h": h_term,
        "lower": h_cond - d_lo / math.sqrt(n),
        "upper": h_cond + d_hi / math.sqrt(n) + h_term / n,
    }
