"""Small Hermitian semidefinite-program layer used by all entropy computations.

Problems are stated over complex Hermitian matrix variables with a real
linear objective, scalar affine equality constraints, and linear matrix
inequalities (affine Hermitian expressions required positive
semidefinite).  Complex data is lowered to the real symmetric cone via
the embedding ``H -> [[Re H, -Im H], [Im H, Re H]]``, which preserves
positive semidefiniteness exactly, and the cone program is solved with
cvxopt's primal-dual interior-point method (Nesterov-Todd scaling,
self-dual embedding for infeasibility detection).  Solutions carry a
duality-gap certificate and independently recomputed feasibility
residuals; everything is deterministic for fixed inputs and config.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers as cvx_solvers

__all__ = [
    "SdpError",
    "MatrixVar",
    "KronTerm",
    "CongruenceTerm",
    "TraceTerm",
    "LmiBlock",
    "Equality",
    "SdpProblem",
    "SolverConfig",
    "SdpSolution",
    "FeasibilityReport",
    "solve_sdp",
    "check_feasibility",
    "dump_sdpa",
    "hermitian_basis_element",
    "hermitian_coords",
    "hermitian_from_coords",
]


class SdpError(RuntimeError):
    """Solver failed to produce a certified answer."""


# ---------------------------------------------------------------------------
# problem data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixVar:
    """Complex Hermitian variable of the given side."""

    name: str
    side: int


@dataclass(frozen=True)
class KronTerm:
    """Contributes ``coeff * (left ⊗ X)`` to an LMI block."""

    var: str
    left: np.ndarray
    coeff: float = 1.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.coeff * np.kron(self.left, x)


@dataclass(frozen=True)
class CongruenceTerm:
    """Contributes ``coeff * A X A†``; with ``A = I`` this is a scaled copy."""

    var: str
    a: np.ndarray
    coeff: float = 1.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.coeff * (self.a @ x @ self.a.conj().T)


@dataclass(frozen=True)
class TraceTerm:
    """Scalar functional ``coeff * Re Tr[F† X]`` for 1x1 blocks."""

    var: str
    f: np.ndarray
    coeff: float = 1.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        val = self.coeff * float(np.real(np.trace(self.f.conj().T @ x)))
        return np.array([[val]], dtype=complex)


@dataclass(frozen=True)
class LmiBlock:
    """Affine Hermitian expression ``const + sum(term(X_var))`` required PSD."""

    side: int
    const: np.ndarray
    terms: tuple
    name: str = ""

    def value(self, assignment: Mapping[str, np.ndarray]) -> np.ndarray:
        acc = np.array(self.const, dtype=complex)
        for t in self.terms:
            acc = acc + t.apply(assignment[t.var])
        return acc


@dataclass(frozen=True)
class Equality:
    """``sum_v Re Tr[F_v† X_v] = rhs``."""

    coeffs: tuple  # of (var, F) pairs
    rhs: float
    name: str = ""

    def value(self, assignment: Mapping[str, np.ndarray]) -> float:
        acc = 0.0
        for var, f in self.coeffs:
            acc += float(np.real(np.trace(f.conj().T @ assignment[var])))
        return acc


class SdpProblem:
    """Minimize ``sum_v Re Tr[C_v† X_v] + const`` subject to LMIs and equalities."""

    def __init__(self):
        self.variables: list[MatrixVar] = []
        self.objective: dict[str, np.ndarray] = {}
        self.objective_const: float = 0.0
        self.equalities: list[Equality] = []
        self.lmis: list[LmiBlock] = []

    def add_var(self, name: str, side: int) -> MatrixVar:
        if any(v.name == name for v in self.variables):
            raise ValueError(f"duplicate variable {name!r}")
        v = MatrixVar(name, int(side))
        self.variables.append(v)
        return v

    def var(self, name: str) -> MatrixVar:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def set_objective(self, coeffs: Mapping[str, np.ndarray], const: float = 0.0):
        self.objective = {k: np.asarray(m, dtype=complex) for k, m in coeffs.items()}
        self.objective_const = float(const)

    def add_lmi(self, side: int, const: np.ndarray, terms, name: str = "") -> LmiBlock:
        block = LmiBlock(int(side), np.asarray(const, dtype=complex), tuple(terms), name)
        for t in block.terms:
            self.var(t.var)  # existence check
        if block.const.shape != (block.side, block.side):
            raise ValueError(f"LMI const shape {block.const.shape} != side {block.side}")
        self.lmis.append(block)
        return block

    def add_scalar_ineq(self, const: float, terms, name: str = "") -> LmiBlock:
        """``const + sum coeff*Re Tr[F† X] >= 0`` as a 1x1 block."""
        return self.add_lmi(1, np.array([[const]]), terms, name)

    def add_equality(self, coeffs: Mapping[str, np.ndarray], rhs: float,
                     name: str = "") -> Equality:
        eq = Equality(tuple((k, np.asarray(f, dtype=complex)) for k, f in coeffs.items()),
                      float(rhs), name)
        self.equalities.append(eq)
        return eq

    def pin_diagonal_block(self, var: str, offset: int, target: np.ndarray,
                           name: str = ""):
        """Equality-pin the diagonal sub-block of ``var`` at ``offset`` to ``target``."""
        v = self.var(var)
        target = np.asarray(target, dtype=complex)
        m = target.shape[0]
        if offset + m > v.side:
            raise ValueError("pinned block exceeds variable side")
        for k in range(m * m):
            e = hermitian_basis_element(m, k)
            f = np.zeros((v.side, v.side), dtype=complex)
            f[offset:offset + m, offset:offset + m] = e
            rhs = float(np.real(np.trace(e.conj().T @ target)))
            self.add_equality({var: f}, rhs, name=f"{name}[{k}]")


@dataclass(frozen=True)
class SolverConfig:
    """Interior-point tolerances; all solves are deterministic."""

    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iterations: int = 200
    refinement: int = 2

    def __post_init__(self):
        if self.gap_tol <= 0 or self.feas_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class FeasibilityReport:
    max_lmi_violation: float
    max_equality_residual: float
    lmi_violations: tuple
    equality_residuals: tuple


@dataclass(frozen=True)
class SdpSolution:
    status: str  # optimal | infeasible | max-iterations
    objective_value: float
    variables: dict
    duality_gap: float
    relative_gap: float
    iterations: int
    feasibility: FeasibilityReport | None
    certified: bool
    raw_status: str
    infeasibility_certificate: dict | None = None


# ---------------------------------------------------------------------------
# Hermitian coordinates
# ---------------------------------------------------------------------------
#
# Orthonormal basis of Hermitian n x n matrices under <A, B> = Tr[A B]:
# diagonal units, then for each i<j the symmetric and antisymmetric pair.
# Index order: k in [0, n): E_kk; then pairs (i, j) in row-major order,
# two entries each.


def _pair_index_table(n: int):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return pairs


def hermitian_basis_element(n: int, k: int) -> np.ndarray:
    if k < n:
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = 1.0
        return e
    k -= n
    pairs = _pair_index_table(n)
    i, j = pairs[k // 2]
    e = np.zeros((n, n), dtype=complex)
    if k % 2 == 0:
        e[i, j] = e[j, i] = 1.0 / math.sqrt(2.0)
    else:
        e[i, j] = 1j / math.sqrt(2.0)
        e[j, i] = -1j / math.sqrt(2.0)
    return e


def hermitian_coords(h: np.ndarray) -> np.ndarray:
    """Coordinates of a Hermitian matrix in the orthonormal basis."""
    n = h.shape[0]
    out = np.empty(n * n)
    out[:n] = np.real(np.diagonal(h))
    idx = n
    for i in range(n):
        for j in range(i + 1, n):
            out[idx] = math.sqrt(2.0) * np.real(h[i, j])
            out[idx + 1] = math.sqrt(2.0) * np.imag(h[i, j])
            idx += 2
    return out


def hermitian_from_coords(c: np.ndarray, n: int) -> np.ndarray:
    h = np.zeros((n, n), dtype=complex)
    h[np.diag_indices(n)] = c[:n]
    idx = n
    inv = 1.0 / math.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            h[i, j] = (c[idx] + 1j * c[idx + 1]) * inv
            h[j, i] = np.conj(h[i, j])
            idx += 2
    return h


def _real_embed(h: np.ndarray) -> np.ndarray:
    re, im = np.real(h), np.imag(h)
    return np.block([[re, -im], [im, re]])


# ---------------------------------------------------------------------------
# canonicalization to a cvxopt cone program
# ---------------------------------------------------------------------------


def _canonicalize(problem: SdpProblem):
    sides = {v.name: v.side for v in problem.variables}
    offsets = {}
    total = 0
    for v in problem.variables:
        offsets[v.name] = total
        total += v.side * v.side

    c = np.zeros(total)
    for name, coef in problem.objective.items():
        c[offsets[name]:offsets[name] + sides[name] ** 2] = hermitian_coords(coef)

    # equalities
    neq = len(problem.equalities)
    a_mat = np.zeros((neq, total))
    b_vec = np.zeros(neq)
    for r, eq in enumerate(problem.equalities):
        for var, f in eq.coeffs:
            a_mat[r, offsets[var]:offsets[var] + sides[var] ** 2] += hermitian_coords(f)
        b_vec[r] = eq.rhs

    scalar_blocks = [blk for blk in problem.lmis if blk.side == 1]
    psd_blocks = [blk for blk in problem.lmis if blk.side > 1]

    # linear cone rows:  h_l - G_l x >= 0
    gl = np.zeros((len(scalar_blocks), total))
    hl = np.zeros(len(scalar_blocks))
    for r, blk in enumerate(scalar_blocks):
        hl[r] = float(np.real(blk.const[0, 0]))
        for t in blk.terms:
            n = sides[t.var]
            off = offsets[t.var]
            for k in range(n * n):
                e = hermitian_basis_element(n, k)
                gl[r, off + k] -= float(np.real(t.apply(e)[0, 0]))

    # PSD blocks, real-embedded; cvxopt stores full matrices column-major
    gs_parts = []
    hs_parts = []
    s_dims = []
    for blk in psd_blocks:
        s = 2 * blk.side
        s_dims.append(s)
        hs_parts.append(_real_embed(blk.const).flatten(order="F"))
        g_blk = np.zeros((s * s, total))
        for t in blk.terms:
            n = sides[t.var]
            off = offsets[t.var]
            for k in range(n * n):
                e = hermitian_basis_element(n, k)
                g_blk[:, off + k] -= _real_embed(t.apply(e)).flatten(order="F")
        gs_parts.append(g_blk)

    g_all = np.vstack([gl] + gs_parts) if gs_parts or len(gl) else gl
    h_all = np.concatenate([hl] + hs_parts) if hs_parts or len(hl) else hl
    dims = {"l": len(scalar_blocks), "q": [], "s": s_dims}
    return {
        "c": c, "G": g_all, "h": h_all, "dims": dims,
        "A": a_mat, "b": b_vec,
        "offsets": offsets, "sides": sides, "total": total,
    }


def _extract_variables(x: np.ndarray, canon) -> dict:
    out = {}
    for name, off in canon["offsets"].items():
        n = canon["sides"][name]
        out[name] = hermitian_from_coords(x[off:off + n * n], n)
    return out


def solve_sdp(problem: SdpProblem, config: SolverConfig | None = None) -> SdpSolution:
    """Solve the problem; ``status='optimal'`` is certified by the duality gap.

    Infeasible problems are reported as ``status='infeasible'`` together
    with the dual certificate residual; anything the solver cannot
    certify comes back as ``status='max-iterations'``.
    """
    config = config or SolverConfig()
    canon = _canonicalize(problem)
    if canon["total"] == 0:
        raise ValueError("problem has no variables")
    kwargs = dict(
        c=cvx_matrix(canon["c"]),
        G=cvx_matrix(canon["G"]),
        h=cvx_matrix(canon["h"]),
        dims=canon["dims"],
    )
    if len(canon["b"]):
        kwargs["A"] = cvx_matrix(canon["A"])
        kwargs["b"] = cvx_matrix(canon["b"])
    # deterministic retry ladder: the LDL KKT solver with extra iterative
    # refinement rescues degenerate instances the default factorization stalls on
    attempts = [
        {"refinement": config.refinement, "kktsolver": None},
        {"refinement": config.refinement + 2, "kktsolver": "ldl"},
    ]
    raw = None
    for attempt in attempts:
        options = {
            "show_progress": False,
            "abstol": config.gap_tol,
            "reltol": config.gap_tol,
            "feastol": config.feas_tol,
            "maxiters": config.max_iterations,
            "refinement": attempt["refinement"],
        }
        call = dict(kwargs, options=options)
        if attempt["kktsolver"]:
            call["kktsolver"] = attempt["kktsolver"]
        try:
            raw = cvx_solvers.conelp(**call)
        except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
            if attempt is attempts[-1]:
                raise SdpError(f"interior-point solve failed: {exc}") from exc
            continue
        if raw["status"] in ("optimal", "primal infeasible"):
            break

    raw_status = raw["status"]
    iterations = int(raw.get("iterations", 0))

    if raw_status == "primal infeasible":
        cert = {
            "residual": float(raw.get("dual infeasibility") or np.nan)
            if raw.get("dual infeasibility") is not None else float("nan"),
            "gap": raw.get("gap"),
        }
        return SdpSolution(
            status="infeasible", objective_value=float("inf"), variables={},
            duality_gap=float("nan"), relative_gap=float("nan"),
            iterations=iterations, feasibility=None, certified=True,
            raw_status=raw_status, infeasibility_certificate=cert,
        )

    if raw["x"] is None:
        return SdpSolution(
            status="max-iterations", objective_value=float("nan"), variables={},
            duality_gap=float("nan"), relative_gap=float("nan"),
            iterations=iterations, feasibility=None, certified=False,
            raw_status=raw_status,
        )

    x = np.array(raw["x"]).reshape(-1)
    variables = _extract_variables(x, canon)
    primal = float(raw["primal objective"]) + problem.objective_const
    dual = raw["dual objective"]
    gap = abs(float(raw["primal objective"]) - float(dual)) if dual is not None else float("nan")
    rel = gap / max(1.0, abs(primal))
    feas = check_feasibility(problem, variables)
    certified = (
        raw_status == "optimal"
        and rel <= 10 * config.gap_tol
        and feas.max_lmi_violation <= 1e3 * config.feas_tol
        and feas.max_equality_residual <= 1e3 * config.feas_tol
    )
    status = "optimal" if raw_status == "optimal" else "max-iterations"
    return SdpSolution(
        status=status, objective_value=primal, variables=variables,
        duality_gap=gap, relative_gap=rel, iterations=iterations,
        feasibility=feas, certified=certified, raw_status=raw_status,
    )


def check_feasibility(problem: SdpProblem, assignment: Mapping[str, np.ndarray]
                      ) -> FeasibilityReport:
    """Largest eigenvalue violation across LMIs and largest equality residual."""
    for v in problem.variables:
        m = np.asarray(assignment[v.name])
        if m.shape != (v.side, v.side):
            raise ValueError(f"assignment for {v.name!r} has shape {m.shape}, "
                             f"expected ({v.side}, {v.side})")
    lmi_viol = []
    for blk in problem.lmis:
        val = blk.value(assignment)
        lam = float(np.min(np.linalg.eigvalsh(0.5 * (val + val.conj().T))))
        lmi_viol.append(max(0.0, -lam))
    eq_res = [abs(eq.value(assignment) - eq.rhs) for eq in problem.equalities]
    return FeasibilityReport(
        max_lmi_violation=max(lmi_viol, default=0.0),
        max_equality_residual=max(eq_res, default=0.0),
        lmi_violations=tuple(lmi_viol),
        equality_residuals=tuple(eq_res),
    )


# ---------------------------------------------------------------------------
# debug dump
# ---------------------------------------------------------------------------


def dump_sdpa(problem: SdpProblem) -> str:
    """Plain-text SDPA-like dump of the real-embedded problem.

    Constraint convention: ``F_0 + sum_k x_k F_k >= 0`` per block, with
    equalities listed separately; intended for eyeballing and for
    cross-checks against external solvers, not for machine exchange.
    """
    canon = _canonicalize(problem)
    buf = io.StringIO()
    buf.write("* qredist SDP debug dump (real symmetric embedding)\n")
    buf.write(f"* variables: {canon['total']} scalar coordinates\n")
    for v in problem.variables:
        buf.write(f"*   {v.name}: hermitian side {v.side} "
                  f"({v.side * v.side} coords at offset {canon['offsets'][v.name]})\n")
    buf.write(f"{canon['total']} = mDIM\n")
    blocks = ([1] * canon["dims"]["l"]) + canon["dims"]["s"]
    buf.write(f"{len(blocks)} = nBLOCK\n")
    buf.write(" ".join(str(-1 if b == 1 else b) for b in blocks) + " = bLOCKsTRUCT\n")
    buf.write(" ".join(f"{v:.17g}" for v in canon["c"]) + "\n")
    # entries: <matno> <blkno> <i> <j> <value>, matno 0 is the constant block
    row0 = 0
    for bno, blk_rows in enumerate(blocks):
        size = blk_rows * blk_rows
        h_blk = canon["h"][row0:row0 + size].reshape(blk_rows, blk_rows, order="F")
        g_blk = canon["G"][row0:row0 + size]
        for i in range(blk_rows):
            for j in range(i, blk_rows):
                if abs(h_blk[i, j]) > 0:
                    buf.write(f"0 {bno + 1} {i + 1} {j + 1} {h_blk[i, j]:.17g}\n")
        for k in range(canon["total"]):
            col = -g_blk[:, k].reshape(blk_rows, blk_rows, order="F")
            for i in range(blk_rows):
                for j in range(i, blk_rows):
                    if abs(col[i, j]) > 0:
                        buf.write(f"{k + 1} {bno + 1} {i + 1} {j + 1} {col[i, j]:.17g}\n")
        row0 += size
    if len(canon["b"]):
        buf.write("* equalities: a_r . x = b_r\n")
        for r in range(len(canon["b"])):
            nz = np.nonzero(canon["A"][r])[0]
            terms = " + ".join(f"{canon['A'][r, k]:.17g}*x{k + 1}" for k in nz)
            buf.write(f"* eq{r + 1}: {terms} = {canon['b'][r]:.17g}\n")
    return buf.getvalue()
