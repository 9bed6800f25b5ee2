"""Command-line front end: seeded experiments with JSON/CSV reports.

Subcommands: ``entropy``, ``decouple``, ``redistribute``, ``converse``,
``aep``, ``sweep``.  Every number in a report is reproducible from the
echoed config and seed alone; per-trial seeds derive from the global
seed by the counter scheme in :mod:`qredist.seeding`.  Wall-clock
timings are recorded only under ``--timings`` so that default reports
are byte-identical across reruns.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .decoupling import DecouplingSearchError, Split, sample_decoupling
from .entropies import (
    Partition,
    aep_bounds,
    hmax_cond,
    hmin_cond,
    imax,
    smooth_hmax,
    smooth_hmin,
    smooth_imax,
    von_neumann_suite,
)
from .redistribution import (
    RedistributionInstance,
    achievability_bounds,
    converse_q_bounds,
    converse_resource_bound,
    execute_protocol,
    iid_trend,
    plan_protocol,
)
from .registers import (
    LayoutError,
    PureState,
    QuantumState,
    SystemLayout,
    basis_state,
    max_entangled,
    maximally_mixed,
    random_pure_state,
    state_from_json,
    tensor_product,
)
from .sdp import SdpError
from .seeding import derive_seed

SCHEMA_VERSION = 1
LABELS = ("A", "B", "C", "R", "S", "T")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------


def _parse_dims(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        dims = tuple(int(d) for d in text)
    else:
        try:
            dims = tuple(int(t) for t in str(text).split(","))
        except ValueError as exc:
            raise ConfigError(f"dims: expected comma-separated integers, got {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise ConfigError(f"dims: entries must be positive, got {dims}")
    return dims


def _parse_eps(text, count) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        eps = tuple(float(e) for e in text)
    else:
        try:
            eps = tuple(float(t) for t in str(text).split(","))
        except ValueError as exc:
            raise ConfigError(f"eps: expected comma-separated floats, got {text!r}") from exc
    if len(eps) != count:
        raise ConfigError(f"eps: expected {count} values, got {len(eps)}")
    return eps


def _parse_n_range(text) -> int:
    text = str(text)
    if ".." in text:
        lo, hi = text.split("..", 1)
        if int(lo) != 1:
            raise ConfigError("n: ranges must start at 1")
        return int(hi)
    return int(text)


def _layout_from_dims(dims) -> SystemLayout:
    if len(dims) > len(LABELS):
        raise ConfigError(f"dims: at most {len(LABELS)} registers supported")
    return SystemLayout(tuple((LABELS[i], d) for i, d in enumerate(dims)))


def _build_state(config) -> QuantumState:
    """State source dispatch: standard names, seeded random, or a JSON file."""
    source = config.get("state", "random")
    if source == "bell":
        return max_entangled("A", "B", 2)
    if source == "mixed":
        dims = _parse_dims(config.get("dims", "2,2"))
        out = maximally_mixed(LABELS[0], dims[0])
        for i, d in enumerate(dims[1:], start=1):
            out = tensor_product(out, maximally_mixed(LABELS[i], d))
        return out
    if source == "basis":
        layout = _layout_from_dims(_parse_dims(config.get("dims", "2,2")))
        return basis_state(layout, 0)
    if source == "random":
        layout = _layout_from_dims(_parse_dims(config.get("dims", "2,2")))
        return random_pure_state(int(config.get("seed", 0)), layout).to_density()
    if str(source).endswith(".json"):
        try:
            with open(source) as fh:
                return state_from_json(fh.read())
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"state: cannot load {source!r}: {exc}") from exc
    raise ConfigError(f"state: unknown source {source!r}")


def _build_instance(config, run_seed) -> RedistributionInstance:
    dims = _parse_dims(config.get("dims", "2,2,2,2"))
    if len(dims) != 4:
        raise ConfigError("dims: redistribution needs exactly four registers A,B,C,R")
    eps = _parse_eps(config.get("eps", "0,0,0.05,0.05"), 4)
    source = config.get("state", "random")
    if source == "random":
        psi = random_pure_state(run_seed,
                                [("A", dims[0]), ("B", dims[1]),
                                 ("C", dims[2]), ("R", dims[3])])
    elif source == "product":
        vec = np.zeros(int(np.prod(dims)))
        vec[0] = 1.0
        psi = PureState(SystemLayout.of(("A", dims[0]), ("B", dims[1]),
                                        ("C", dims[2]), ("R", dims[3])), vec)
    else:
        raise ConfigError(f"state: redistribution supports 'random' or 'product', "
                          f"got {source!r}")
    return RedistributionInstance(psi, *eps)


# ---------------------------------------------------------------------------
# subcommand runners
# ---------------------------------------------------------------------------


def _run_entropy(config):
    state = _build_state(config)
    cond = config.get("cond")
    if not cond:
        raise ConfigError("cond: required, e.g. 'A|B' or 'A:B'")
    part = Partition.parse(cond)
    quantity = config.get("quantity", "hmin")
    eps = float(config.get("eps", 0.0) if not isinstance(config.get("eps"), (list, tuple))
                else config["eps"][0])
    plain = {"hmin": hmin_cond, "hmax": hmax_cond, "imax": imax}
    smooth = {"hmin": smooth_hmin, "hmax": smooth_hmax, "imax": smooth_imax}
    if quantity == "vn":
        suite = von_neumann_suite(state, part.first, part.second)
        return [dict(suite, seed=int(config.get("seed", 0)))], {}
    if quantity not in plain:
        raise ConfigError(f"quantity: expected one of hmin, hmax, imax, vn; "
                          f"got {quantity!r}")
    if eps > 0:
        res = smooth[quantity](state, part, eps)
    else:
        res = plain[quantity](state, part)
    rec = res.to_json_dict()
    rec.pop("witness", None)  # states stay out of reports; use the API for those
    rec["seed"] = int(config.get("seed", 0))
    return [rec], {}


def _run_decouple(config):
    dims = _parse_dims(config.get("dims", "2,2,2"))
    if len(dims) != 3:
        raise ConfigError("dims: decouple needs three entries: |A1|,|A2|,|R|")
    d1, d2, dr = dims
    seed = int(config.get("seed", 0))
    samples = int(config.get("samples", 100))
    source = config.get("state", "random")
    layout = [("A", d1 * d2), ("R", dr)]
    if source == "mixed":
        rng = np.random.default_rng(derive_seed(seed, 999))
        g = rng.standard_normal((dr, dr)) + 1j * rng.standard_normal((dr, dr))
        g = g @ g.conj().T
        rho = tensor_product(maximally_mixed("A", d1 * d2),
                             QuantumState(SystemLayout.of(("R", dr)), g / np.trace(g)))
    elif source == "random":
        rho = random_pure_state(derive_seed(seed, 998),
                                layout + [("E", d1 * d2 * dr)]).marginal(["A", "R"])
    else:
        raise ConfigError(f"state: decouple supports 'random' or 'mixed', got {source!r}")
    split = Split("A", (("A1", d1), ("A2", d2)))
    rep = sample_decoupling(rho, split, n_samples=samples, seed=seed)
    return [rep.to_json_dict()], {
        "mean_defect": rep.mean_defect,
        "stderr": rep.stderr,
        "bound_satisfied": rep.bound_satisfied,
    }


def _run_redistribute(config):
    seed = int(config.get("seed", 0))
    runs = int(config.get("samples", 1))
    records = []
    for k in range(runs):
        run_seed = derive_seed(seed, k) if runs > 1 else seed
        inst = _build_instance(config, run_seed)
        plan = plan_protocol(inst, seed=run_seed,
                             max_tries=int(config.get("max_tries", 64)))
        t = execute_protocol(plan, inst, keep_states=False)
        bounds = achievability_bounds(inst.state, inst.eps1, inst.eps2,
                                      inst.eps3, inst.eps4)
        rec = t.to_json_dict()
        rec["q_bound"] = bounds["q_bound"]
        rec["e_bound"] = bounds["e_bound"]
        rec["error_bound"] = bounds["error_bound"]
        rec["within_error_budget"] = bool(t.final_distance <= t.error_budget + 1e-9)
        records.append(rec)
    agg = {
        "runs": runs,
        "max_final_distance": max(r["final_distance"] for r in records),
        "mean_q": sum(r["q"] for r in records) / runs,
        "mean_e": sum(r["e"] for r in records) / runs,
        "all_within_error_budget": all(r["within_error_budget"] for r in records),
    }
    return records, agg


def _run_converse(config):
    seed = int(config.get("seed", 0))
    eps = _parse_eps(config.get("eps", "0.05,0.05"), 2)
    inst = _build_instance({**config, "eps": f"0,0,{eps[0]},{eps[1]}"}, seed)
    bounds = converse_q_bounds(inst.state, eps[0], eps[1])
    resource = converse_resource_bound(inst.state, eps[0], eps[1])
    suite = von_neumann_suite(inst.state.to_density(), ["C"], ["R"], ["B"])
    rec = dict(bounds)
    rec["resource_bound"] = resource
    rec["target_q"] = 0.5 * suite["I_A_B_given_C"]
    rec["seed"] = seed
    return [rec], {"max_q_lower_bound": max(bounds.values())}


def _run_aep(config):
    n_max = _parse_n_range(config.get("n", 3))
    eps = float(config.get("eps", 0.1) if not isinstance(config.get("eps"), (list, tuple))
                else config["eps"][0])
    dims = _parse_dims(config.get("dims", "1,1,2,2"))
    if len(dims) != 4:
        raise ConfigError("dims: aep needs exactly four registers A,B,C,R")
    inst = _build_instance({**config, "dims": dims,
                            "eps": f"0,0,{max(eps, 1e-6) ** 2 / 400},"
                                   f"{max(eps, 1e-6) ** 2 / 400}"},
                           int(config.get("seed", 0)))
    rows = iid_trend(inst.state, n_max=n_max, eps=eps,
                     dim_cap=int(config.get("dim_cap", 4096)))
    env = aep_bounds(inst.state.to_density(), Partition(("C",), ("B", "R")),
                     n=1, eps=eps / 20.0, eps_prime=eps / 20.0)
    for row in rows:
        n = row["n"]
        row["aep_envelope"] = (env["delta_lower"] / math.sqrt(n) + env["h"] / n)
    return rows, {"aep_v": env["v"], "aep_delta": env["delta_lower"], "aep_h": env["h"]}


def _run_sweep(config):
    runs = int(config.get("samples", 10))
    return _run_redistribute({**config, "samples": runs})


RUNNERS = {
    "entropy": _run_entropy,
    "decouple": _run_decouple,
    "redistribute": _run_redistribute,
    "converse": _run_converse,
    "aep": _run_aep,
    "sweep": _run_sweep,
}


# ---------------------------------------------------------------------------
# report assembly and emission
# ---------------------------------------------------------------------------


def run(config: dict) -> dict:
    """Dispatch a validated config to its subcommand and assemble the report."""
    command = config.get("command")
    if command not in RUNNERS:
        raise ConfigError(f"command: expected one of {sorted(RUNNERS)}, got {command!r}")
    t0 = time.monotonic()
    records, aggregates = RUNNERS[command](config)
    elapsed = time.monotonic() - t0
    report = {
        "schema_version": SCHEMA_VERSION,
        "artifact": {"name": "qredist", "version": __version__},
        "command": command,
        # everything a record depends on; emission destinations stay out so
        # the same experiment written anywhere yields identical bytes
        "config": {k: v for k, v in sorted(config.items())
                   if v is not None and k != "out"},
        "records": records,
        "aggregates": aggregates,
    }
    if config.get("timings"):
        report["timings_s"] = {"total": elapsed}
    return report


def _csv_of_records(records) -> str:
    if not records:
        return "\n"
    cols = sorted({k for r in records for k in r})
    lines = [",".join(cols)]
    for r in records:
        lines.append(",".join(_csv_cell(r.get(c)) for c in cols))
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v).replace(",", ";")
    return str(v)


def emit(report: dict, fmt: str = "json", path: str | None = None) -> str:
    """Serialize a report; identical reports yield identical bytes."""
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = _csv_of_records(report["records"])
    else:
        raise ConfigError(f"format: expected json or csv, got {fmt!r}")
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise RuntimeError(f"cannot write report to {path!r}: {exc}") from exc
    return text


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qredist",
        description="One-shot quantum state redistribution experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "entropy": "evaluate a one-shot entropy quantity on a state",
        "decouple": "Monte Carlo decoupling defect scan",
        "redistribute": "plan and execute the redistribution protocol",
        "converse": "evaluate the converse lower bounds",
        "aep": "per-copy smooth-entropy trends on iid blocks",
        "sweep": "batch of seeded redistribution runs",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--state", help="standard name, 'random', or a JSON file")
        p.add_argument("--dims", help="comma-separated register dimensions")
        p.add_argument("--eps", help="comma-separated error parameters")
        p.add_argument("--seed", type=int, help="global seed (default 0)")
        p.add_argument("--samples", type=int, help="number of trials/runs")
        p.add_argument("--n", help="block sizes for aep, e.g. '1..4'")
        p.add_argument("--cond", help="partition, e.g. 'A|B' or 'A:B'")
        p.add_argument("--quantity", help="hmin | hmax | imax | vn")
        p.add_argument("--max-tries", dest="max_tries", type=int,
                       help="bi-decoupling search budget")
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", dest="format", choices=["json", "csv"],
                       help="output format (default json)")
        p.add_argument("--config", help="JSON config file; file values win")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (breaks byte determinism)")
    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items()
              if v is not None and k != "config"}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config!r}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config: file must hold a JSON object")
        config.update(file_cfg)  # file wins on conflict
    config.setdefault("seed", 0)
    config.setdefault("format", "json")
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _merge_config(args)
        report = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SdpError, DecouplingSearchError, LayoutError, ValueError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    text = emit(report, config.get("format", "json"), config.get("out"))
    if not config.get("out"):
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
