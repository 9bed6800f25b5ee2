"""Ebit-based one-shot state redistribution: plan, execute, verify.

The task: Alice holds registers ``A`` and ``C``, Bob holds ``B``, and a
reference ``R`` purifies everything.  Alice must hand ``C`` to Bob while
preserving all correlations, spending as little Alice-to-Bob quantum
communication as possible, with pre-shared ebits as the only
entanglement resource.

The protocol routes ``C`` through a coherent relay: a single unitary
``U`` splits ``C`` into ``C1 C2 C3`` so that ``C1`` decouples from
``B R`` and ``C2`` decouples from ``A R``.  A merging isometry ``V1``
turns the ``C1`` piece into entanglement with Alice, which ebit
repackaging swaps for pre-shared entanglement with Bob; ``V2`` then
completes the transfer on Bob's side, with only the ``C3`` register
actually crossing the Alice-Bob channel.  Costs in qubits/ebits are
exact register logs; the achieved purified distance is compared against
the additive error budget ``8 e1 + 2 e2 + 4 sqrt(3 e3) + sqrt(3 e4)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .decoupling import Split, bidecoupling_search, decoupling_defect
from .entropies import (
    Partition,
    hmax_cond,
    hmin_cond,
    smooth_hmax,
    smooth_hmin,
    smooth_imax,
    vn_cond_mutual,
    vn_conditional,
)
from .registers import (
    IsometryMap,
    LayoutError,
    PureState,
    QuantumState,
    SystemLayout,
    apply_isometry,
    basis_state,
    max_entangled_pure,
    partial_trace,
    permute,
    permute_pure,
    purified_distance,
    purify,
    relabel,
    tensor_product,
    uhlmann_partial_isometry,
)
from .sdp import SolverConfig
from .seeding import derive_seed

__all__ = [
    "RedistributionInstance",
    "RedistributionPlan",
    "ProtocolTranscript",
    "InteractiveTranscript",
    "CorrectionChannel",
    "uhlmann_isometry",
    "plan_protocol",
    "execute_protocol",
    "achievability_bounds",
    "converse_q_bounds",
    "converse_resource_bound",
    "interactive_account",
    "iid_trend",
]


def _log2_int(n: int) -> int:
    k = int(round(math.log2(n)))
    if 2 ** k != n:
        raise ValueError(f"{n} is not a power of 2")
    return k


@dataclass(frozen=True)
class RedistributionInstance:
    """Pure input on registers A, B, C, R plus the four error parameters."""

    state: PureState
    eps1: float
    eps2: float
    eps3: float
    eps4: float
    base: int = 2

    def __post_init__(self):
        labels = set(self.state.layout.labels)
        if labels != {"A", "B", "C", "R"}:
            raise LayoutError(f"instance state must live on A, B, C, R; got {labels}")
        if abs(self.state.norm - 1.0) > 1e-7:
            raise ValueError("instance state must be normalized")
        if self.eps1 < 0 or self.eps2 < 0:
            raise ValueError("eps1 and eps2 must be >= 0")
        if self.eps3 <= 0 or self.eps4 <= 0:
            raise ValueError("eps3 and eps4 must be > 0")
        dc = self.state.layout.dim_of("C")
        k = round(math.log(dc, self.base))
        if self.base ** k != dc:
            raise ValueError(f"|C| = {dc} is not a power of base {self.base}")
        object.__setattr__(self, "state",
                           permute_pure(self.state, ["A", "B", "C", "R"]))

    @property
    def error_budget(self) -> float:
        return (8.0 * self.eps1 + 2.0 * self.eps2
                + 4.0 * math.sqrt(3.0 * self.eps3) + math.sqrt(3.0 * self.eps4))

    def dims(self) -> dict:
        return {l: self.state.layout.dim_of(l) for l in "ABCR"}


@dataclass(frozen=True)
class CorrectionChannel:
    """Projective correction onto the merging image with a fixed fallback.

    Acts on the named registers as ``X -> P X P + Tr[(1-P) X] phi`` with
    ``P`` the image projector of the relabeled merging isometry and
    ``phi`` a fixed state inside the image; trace preserving on all
    inputs.
    """

    layout: SystemLayout
    projector: np.ndarray
    replacement: np.ndarray

    def apply(self, state: QuantumState) -> QuantumState:
        order = list(self.layout.labels) + [
            l for l in state.layout.labels if l not in self.layout.labels
        ]
        sp = permute(state, order)
        dm = self.layout.dim
        dr = sp.layout.dim // dm
        p_full = np.kron(self.projector, np.eye(dr))
        kept = p_full @ sp.matrix @ p_full
        q_full = np.kron(np.eye(dm) - self.projector, np.eye(dr))
        junk = q_full @ sp.matrix @ q_full
        junk_rest = partial_trace(
            QuantumState(sp.layout, junk, validate=False, subnormalized=False),
            self.layout.labels)
        out = kept + np.kron(self.replacement, junk_rest.matrix)
        return QuantumState(sp.layout, out, validate=False, subnormalized=False)


@dataclass
class RedistributionPlan:
    """All operators of one planned protocol run, with plan-time diagnostics."""

    dims: dict
    c_dims: tuple[int, int, int]
    u: IsometryMap
    u_hat: IsometryMap
    v1: IsometryMap
    v1_hat: IsometryMap
    v2: IsometryMap
    v2_hat: IsometryMap
    correction: CorrectionChannel
    omega1: QuantumState
    omega2: QuantumState
    s2_dim: int
    hmin_c_br: float
    hmin_c_ars2: float
    defect1: float
    defect2: float
    merge_distance1: float
    merge_distance2: float
    seed: int


@dataclass
class ProtocolTranscript:
    """Executed protocol record: costs, per-step states, achieved distance."""

    c_dims: tuple[int, int, int]
    q: int
    charlie_to_alice: int
    ebits_consumed: int
    ebits_generated: int
    e: int
    final_distance: float
    error_budget: float
    r_marginal_deviation: float
    seed: int
    step_states: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "c_dims": list(self.c_dims),
            "q": self.q,
            "charlie_to_alice": self.charlie_to_alice,
            "ebits_consumed": self.ebits_consumed,
            "ebits_generated": self.ebits_generated,
            "e": self.e,
            "final_distance": self.final_distance,
            "error_budget": self.error_budget,
            "r_marginal_deviation": self.r_marginal_deviation,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def csv_header() -> str:
        return ("seed,c1,c2,c3,q,charlie_to_alice,ebits_consumed,"
                "ebits_generated,e,final_distance,error_budget,"
                "r_marginal_deviation")

    def to_csv_row(self) -> str:
        c1, c2, c3 = self.c_dims
        return (f"{self.seed},{c1},{c2},{c3},{self.q},{self.charlie_to_alice},"
                f"{self.ebits_consumed},{self.ebits_generated},{self.e},"
                f"{self.final_distance!r},{self.error_budget!r},"
                f"{self.r_marginal_deviation!r}")


# ---------------------------------------------------------------------------
# merging isometries
# ---------------------------------------------------------------------------


def uhlmann_isometry(pure1: PureState, pure2: PureState, shared) -> IsometryMap:
    """Partial isometry moving ``pure1``'s non-shared registers onto ``pure2``'s.

    The achieved purified distance ``P(V(pure1), pure2)`` equals the
    purified distance of the two marginals on ``shared``; when the
    marginals coincide the match is exact.
    """
    return uhlmann_partial_isometry(pure1, pure2, shared)


# ---------------------------------------------------------------------------
# planning
# ---------------------------------------------------------------------------


def plan_protocol(inst: RedistributionInstance, seed: int = 0, max_tries: int = 64,
                  config: SolverConfig | None = None) -> RedistributionPlan:
    """Choose the split of C, the decoupling unitary, and the merging maps.

    The split dimensions follow the floor formulas
    ``log|C1| = floor(1/2 log|C| + 1/2 H_min(C|BR)_w1 - log(1/eps3))`` and
    ``log|C2| = floor(1/2 log|C| + 1/2 H_min(C|ARS2)_w2 - log(1/eps4))``
    evaluated on the smoothing witnesses, clamped to at least one
    dimension each (a negative formula routes everything through C3).
    """
    psi = inst.state
    dims = inst.dims()
    dc = dims["C"]
    log_c = _log2_int(dc)

    # witness for the min-entropy side (state on C, B, R)
    rho_cbr = psi.marginal(["C", "B", "R"])
    if inst.eps1 == 0.0:
        omega1 = rho_cbr
    else:
        omega1 = smooth_hmin(rho_cbr, Partition(("C",), ("B", "R")), inst.eps1,
                             config).witness
    hmin1 = hmin_cond(omega1, Partition(("C",), ("B", "R")), config).value

    # witness for the max-entropy side, carried as a global pure state with
    # a purifying register S2 so the second decoupling sees C against A R S2
    if inst.eps2 == 0.0:
        s2_dim = 1
        omega2_pure = psi.tensor(PureState(SystemLayout.of(("S2", 1)), [1.0]))
    else:
        res2 = smooth_hmax(psi.marginal(["C", "B"]), Partition(("C",), ("B",)),
                           inst.eps2, config)
        w_cb = res2.witness
        rank_w = max(1, w_cb.rank())
        s2_dim = max(1, math.ceil(rank_w / (dims["A"] * dims["R"])))
        w_pure = purify(w_cb, "Pw")
        target = psi.tensor(PureState(SystemLayout.of(("S2", s2_dim)),
                                      np.eye(s2_dim, 1).reshape(-1)))
        v_move = uhlmann_partial_isometry(w_pure, target, shared=["C", "B"])
        omega2_pure = apply_isometry(v_move, w_pure)
    omega2 = omega2_pure.marginal(["C", "A", "R", "S2"])
    hmin2 = hmin_cond(omega2, Partition(("C",), ("A", "R", "S2")), config).value

    log_c1 = math.floor(0.5 * log_c + 0.5 * hmin1
                        - math.log2(1.0 / inst.eps3) + 1e-9)
    log_c2 = math.floor(0.5 * log_c + 0.5 * hmin2
                        - math.log2(1.0 / inst.eps4) + 1e-9)
    log_c1 = min(max(log_c1, 0), log_c)
    log_c2 = min(max(log_c2, 0), log_c - log_c1)
    c1, c2 = 2 ** log_c1, 2 ** log_c2
    c3 = dc // (c1 * c2)

    split = Split("C", (("C1", c1), ("C2", c2), ("C3", c3)))
    u = bidecoupling_search(omega1, omega2, split, inst.eps3, inst.eps4,
                            max_tries=max_tries, seed=seed, config=config)
    defect1 = decoupling_defect(omega1, u, split, keep=0)
    defect2 = decoupling_defect(omega2, u, split, keep=1)

    # merging isometries for the actual input
    u_psi = apply_isometry(u, psi)  # pure on C1 C2 C3 A B R
    phi1 = max_entangled_pure("A1", "C1", c1)
    target1 = phi1.tensor(relabel(psi, {"A": "Ap", "C": "Cp"}))
    v1 = uhlmann_partial_isometry(u_psi, target1, shared=["C1", "B", "R"])
    merge1 = purified_distance(apply_isometry(v1, u_psi), target1)

    phi2 = max_entangled_pure("B2", "C2", c2)
    target2 = phi2.tensor(relabel(psi, {"B": "Bppp", "C": "Cppp"}))
    v2 = uhlmann_partial_isometry(u_psi, target2, shared=["C2", "A", "R"])
    merge2 = purified_distance(apply_isometry(v2, u_psi), target2)

    da, db = dims["A"], dims["B"]
    u_hat = u.with_layouts(
        SystemLayout.of(("C", dc)),
        SystemLayout.of(("TB", c1), ("C2pp", c2), ("C3pp", c3)))
    v1_hat = v1.with_layouts(
        SystemLayout.of(("C2pp", c2), ("C3pp", c3), ("App", da)),
        SystemLayout.of(("TA", c1), ("Ap", da), ("Cp", dc)))
    v2_hat = v2.with_layouts(
        SystemLayout.of(("TB", c1), ("C3pp", c3), ("B", db)),
        SystemLayout.of(("B2", c2), ("Bppp", db), ("Cppp", dc)))

    proj = v1_hat.image_projector()
    dom = v1_hat.input_layout.dim
    vec = None
    for k in range(dom):
        cand = v1_hat.matrix[:, k]
        if np.linalg.norm(cand) > 0.5:
            vec = cand / np.linalg.norm(cand)
            break
    if vec is None:  # fully degenerate map; park the fallback anywhere in range
        w, vv = np.linalg.eigh(proj)
        vec = vv[:, -1]
    correction = CorrectionChannel(
        layout=v1_hat.output_layout,
        projector=proj,
        replacement=np.outer(vec, vec.conj()),
    )

    return RedistributionPlan(
        dims=dims, c_dims=(c1, c2, c3), u=u, u_hat=u_hat,
        v1=v1, v1_hat=v1_hat, v2=v2, v2_hat=v2_hat,
        correction=correction, omega1=omega1, omega2=omega2, s2_dim=s2_dim,
        hmin_c_br=hmin1, hmin_c_ars2=hmin2,
        defect1=defect1, defect2=defect2,
        merge_distance1=merge1, merge_distance2=merge2,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def execute_protocol(plan: RedistributionPlan, inst: RedistributionInstance,
                     keep_states: bool = True) -> ProtocolTranscript:
    """Run the four protocol steps and score the outcome.

    1. Charlie applies ``U`` on C, keeps C1, sends C2 C3 to Alice.
    2. Alice applies ``V1``, plugs her ebit half ``TA`` in place of the
       fresh entanglement register ``A1``, applies the correction onto
       the image of the relabeled merging map, and undoes it with its
       adjoint, obtaining ``C2'' C3'' A''``.
    3. Alice sends ``C3''`` to Bob.
    4. Bob applies the relabeled decoder on ``TB C3'' B``.

    The final state is compared in purified distance against the input
    (on the relabeled output registers) together with both ebit pairs.
    """
    psi = inst.state
    c1, c2, c3 = plan.c_dims
    r_before = psi.marginal(["R"])

    start = psi.tensor(max_entangled_pure("TA", "TB", c1))
    step1 = apply_isometry(plan.u, start)          # C1 C2 C3 A B R TA TB
    step2_merge = apply_isometry(plan.v1, step1)   # A1 Ap Cp | C1 B R TA TB
    # ebit repackaging: the correction acts on (TA, Ap, Cp), i.e. the
    # pre-shared half replaces A1 in the downstream processing
    rho = step2_merge.to_density()
    rho = plan.correction.apply(rho)
    rho = apply_isometry(plan.v1_hat.adjoint(), rho)   # C2pp C3pp App | ...
    final = apply_isometry(plan.v2_hat, rho)           # B2 Bppp Cppp | C2pp App A1 C1 R

    ideal = relabel(psi, {"A": "App", "B": "Bppp", "C": "Cppp"}).to_density()
    phi1 = max_entangled_pure("A1", "C1", c1).to_density()
    phi2 = max_entangled_pure("C2pp", "B2", c2).to_density()
    target = tensor_product(tensor_product(ideal, phi1), phi2)
    distance = purified_distance(final, target)

    r_after = final.marginal(["R"])
    r_dev = float(np.max(np.abs(r_after.matrix - r_before.matrix)))

    states = {}
    if keep_states:
        states = {
            "after_step1": step1.to_density(),
            "after_step2": rho,
            "after_step4": final,
        }
    return ProtocolTranscript(
        c_dims=plan.c_dims,
        q=_log2_int(c3),
        charlie_to_alice=_log2_int(c2) + _log2_int(c3),
        ebits_consumed=_log2_int(c1),
        ebits_generated=_log2_int(c2),
        e=_log2_int(c1) - _log2_int(c2),
        final_distance=distance,
        error_budget=inst.error_budget,
        r_marginal_deviation=r_dev,
        seed=plan.seed,
        step_states=states,
    )


# ---------------------------------------------------------------------------
# achievability and converse bounds
# ---------------------------------------------------------------------------


def achievability_bounds(state: PureState, eps1: float, eps2: float, eps3: float,
                         eps4: float, config: SolverConfig | None = None) -> dict:
    """Theorem bounds on q and e for one protocol run.

    The construction smooths the min-entropy term at ``eps1`` and the
    max-entropy term at ``eps2`` (the executable pairing); the values
    under the opposite pairing are reported alongside since the two
    conventions coincide only when ``eps1 == eps2``.
    """
    rho_cb = state.marginal(["C", "B"])
    rho_cbr = state.marginal(["C", "B", "R"])
    p_cb = Partition(("C",), ("B",))
    p_cbr = Partition(("C",), ("B", "R"))
    hmax_e2 = smooth_hmax(rho_cb, p_cb, eps2, config).value
    hmin_e1 = smooth_hmin(rho_cbr, p_cbr, eps1, config).value
    if eps1 == eps2:
        hmax_e1, hmin_e2 = hmax_e2, hmin_e1
    else:
        hmax_e1 = smooth_hmax(rho_cb, p_cb, eps1, config).value
        hmin_e2 = smooth_hmin(rho_cbr, p_cbr, eps2, config).value
    log3 = math.log2(1.0 / eps3)
    log4 = math.log2(1.0 / eps4)
    return {
        "q_bound": 0.5 * hmax_e2 - 0.5 * hmin_e1 + log3 + log4 + 2.0,
        "e_bound": 0.5 * hmax_e2 + 0.5 * hmin_e1 - log3 + log4 + 1.0,
        "q_bound_statement_pairing": 0.5 * hmax_e1 - 0.5 * hmin_e2 + log3 + log4 + 2.0,
        "e_bound_statement_pairing": 0.5 * hmax_e1 + 0.5 * hmin_e2 - log3 + log4 + 1.0,
        "error_bound": (8.0 * eps1 + 2.0 * eps2 + 4.0 * math.sqrt(3.0 * eps3)
                        + math.sqrt(3.0 * eps4)),
        "hmax_c_given_b": hmax_e2,
        "hmin_c_given_br": hmin_e1,
    }


def _check_converse_eps(eps1: float, eps2: float):
    if not (0.0 < eps1 < 1.0):
        raise ValueError("eps1 must be in (0, 1)")
    if not (0.0 < eps2 < 1.0 - eps1):
        raise ValueError("eps2 must be in (0, 1 - eps1)")


def converse_q_bounds(state: PureState, eps1: float, eps2: float,
                      config: SolverConfig | None = None) -> dict:
    """Six lower bounds on the quantum communication cost of any protocol
    redistributing the state with error ``eps1``.

    Three bound families (max-information, min-entropy, max-entropy
    differences of the reference against Bob's side before and after),
    each also evaluated with Alice's side in place of Bob's.
    """
    _check_converse_eps(eps1, eps2)
    rho = state.to_density()
    e12 = eps1 + eps2
    out = {}
    for side in ("B", "A"):
        p_small = Partition(("R",), (side,))
        p_big = Partition(("R",), (side, "C"))
        imax_big = smooth_imax(rho, p_big, e12, config).value
        imax_small = smooth_imax(rho, p_small, eps2, config).value
        out[f"imax_{side}"] = 0.5 * (imax_big - imax_small)
        hmin_small = smooth_hmin(rho, p_small, eps2, config).value
        hmin_big = smooth_hmin(rho, p_big, e12, config).value
        out[f"hmin_{side}"] = 0.5 * (hmin_small - hmin_big)
        hmax_small = smooth_hmax(rho, p_small, e12, config).value
        hmax_big = smooth_hmax(rho, p_big, eps2, config).value
        out[f"hmax_{side}"] = 0.5 * (hmax_small - hmax_big)
    return out


def converse_resource_bound(state: PureState, eps1: float, eps2: float,
                            config: SolverConfig | None = None) -> float:
    """Lower bound on total resources ``e + q`` (and, interactively, on
    ``e + QCC_fwd + QCC_back``): ``H_min^{e2}(BC) - H_min^{e1+e2}(B)``.
    """
    _check_converse_eps(eps1, eps2)
    rho = state.to_density()
    h_bc = smooth_hmin(rho, Partition(("B", "C"), ()), eps2, config).value
    h_b = smooth_hmin(rho, Partition(("B",), ()), eps1 + eps2, config).value
    return h_bc - h_b


# ---------------------------------------------------------------------------
# interactive cost accounting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InteractiveTranscript:
    """Register-log cost accounting for a multi-message protocol."""

    messages: tuple[tuple[str, int], ...]
    qcc_a_to_b: float
    qcc_b_to_a: float
    ebits_consumed: float
    ebits_generated: float

    @property
    def num_messages(self) -> int:
        return len(self.messages)

    @property
    def net_entanglement(self) -> float:
        return self.ebits_consumed - self.ebits_generated

    @property
    def total_communication(self) -> float:
        return self.qcc_a_to_b + self.qcc_b_to_a

    def to_json_dict(self) -> dict:
        return {
            "messages": [[d, dim] for d, dim in self.messages],
            "qcc_a_to_b": self.qcc_a_to_b,
            "qcc_b_to_a": self.qcc_b_to_a,
            "ebits_consumed": self.ebits_consumed,
            "ebits_generated": self.ebits_generated,
        }


def interactive_account(messages, ebits_consumed: float = 0.0,
                        ebits_generated: float = 0.0) -> InteractiveTranscript:
    """Sum per-direction message logs: ``("A->B" | "B->A", dim)`` pairs."""
    msgs = []
    fwd = back = 0.0
    for direction, dim in messages:
        if direction not in ("A->B", "B->A"):
            raise ValueError(f"unknown direction {direction!r}")
        dim = int(dim)
        if dim < 1:
            raise ValueError("message dimension must be >= 1")
        msgs.append((direction, dim))
        if direction == "A->B":
            fwd += math.log2(dim)
        else:
            back += math.log2(dim)
    if not msgs:
        raise ValueError("at least one message is required")
    return InteractiveTranscript(
        messages=tuple(msgs), qcc_a_to_b=fwd, qcc_b_to_a=back,
        ebits_consumed=float(ebits_consumed),
        ebits_generated=float(ebits_generated),
    )


def transcript_to_interactive(t: ProtocolTranscript) -> InteractiveTranscript:
    """Single-message view of an executed run: only C3 crosses Alice to Bob."""
    return interactive_account([("A->B", t.c_dims[2])],
                               ebits_consumed=t.ebits_consumed,
                               ebits_generated=t.ebits_generated)


# ---------------------------------------------------------------------------
# iid block trends
# ---------------------------------------------------------------------------


def _tensor_power(psi: PureState, n: int) -> tuple[PureState, dict]:
    """n-fold tensor copy with labels ``A1..An`` etc.; returns label groups."""
    groups = {l: [] for l in psi.layout.labels}
    total = None
    for i in range(1, n + 1):
        mapping = {l: f"{l}{i}" for l in psi.layout.labels}
        copy = relabel(psi, mapping)
        for l in psi.layout.labels:
            groups[l].append(mapping[l])
        total = copy if total is None else total.tensor(copy)
    return total, groups


def iid_trend(state: PureState, n_max: int, eps: float, dim_cap: int = 4096,
              config: SolverConfig | None = None) -> list[dict]:
    """Per-copy smooth-entropy bounds on n-fold copies against the
    von Neumann targets ``1/2 I(C:R|B)`` and ``H(C|B)``.

    The error split follows the exponential-error recipe
    ``eps1 = eps2 = sqrt(eps3) = sqrt(eps4) = eps / 20`` so the total
    protocol error stays below ``eps``; additive ``log(1/eps)``
    overheads are reported separately since they vanish per copy.
    """
    if set(state.layout.labels) != {"A", "B", "C", "R"}:
        raise LayoutError("iid_trend expects registers A, B, C, R")
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must be in (0, 1)")
    dim = state.layout.dim
    if dim ** n_max > dim_cap:
        raise ValueError(f"|ABCR|^n = {dim ** n_max} exceeds the cap {dim_cap}")
    eps_s = eps / 20.0
    eps3 = eps4 = eps_s ** 2
    conv_e2 = eps_s
    rho1 = state.to_density()
    target_q = 0.5 * vn_cond_mutual(rho1, ["C"], ["R"], ["B"])
    target_eq = vn_conditional(rho1, ["C"], ["B"])
    overhead_q = math.log2(1.0 / eps3) + math.log2(1.0 / eps4) + 2.0
    overhead_eq = 2.0 * math.log2(1.0 / eps4) + 3.0
    rows = []
    for n in range(1, n_max + 1):
        psi_n, groups = _tensor_power(state, n)
        rho_n = psi_n.to_density()
        c_n, b_n, r_n = groups["C"], groups["B"], groups["R"]
        hmax_cb = smooth_hmax(rho_n, Partition(tuple(c_n), tuple(b_n)),
                              eps_s, config).value
        hmin_cbr = smooth_hmin(rho_n, Partition(tuple(c_n), tuple(b_n + r_n)),
                               eps_s, config).value
        q_ach = 0.5 * (hmax_cb - hmin_cbr) / n
        eq_ach = hmax_cb / n
        hmin_rb = smooth_hmin(rho_n, Partition(tuple(r_n), tuple(b_n)),
                              conv_e2, config).value
        hmin_rbc = smooth_hmin(rho_n, Partition(tuple(r_n), tuple(b_n + c_n)),
                               eps + conv_e2, config).value
        q_conv = 0.5 * (hmin_rb - hmin_rbc) / n
        hmin_bc = smooth_hmin(rho_n, Partition(tuple(b_n + c_n), ()),
                              conv_e2, config).value
        hmin_b = smooth_hmin(rho_n, Partition(tuple(b_n), ()),
                             eps + conv_e2, config).value
        eq_conv = (hmin_bc - hmin_b) / n
        rows.append({
            "n": n,
            "q_ach_pc": q_ach,
            "q_conv_pc": q_conv,
            "eq_ach_pc": eq_ach,
            "eq_conv_pc": eq_conv,
            "q_ach_total_pc": q_ach + overhead_q / n,
            "eq_ach_total_pc": eq_ach + overhead_eq / n,
            "target_q": target_q,
            "target_eq": target_eq,
            "gap_q_ach": q_ach - target_q,
            "gap_q_conv": q_conv - target_q,
            "gap_eq_ach": eq_ach - target_eq,
            "gap_eq_conv": eq_conv - target_eq,
            "overhead_q_pc": overhead_q / n,
            "overhead_eq_pc": overhead_eq / n,
        })
    return rows
