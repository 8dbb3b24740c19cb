"""Command-line front end: config ingestion, orchestration, artifacts.

Commands
--------
bands       dispersion sheet of the periodic operator (CSV + SVG)
dirac       Dirac-point record for the selected gap (JSON)
winding     coupling curve samples and winding number (CSV + JSON)
chern       Chern numbers per dislocation strength + curvature heatmap
dirac-flow  spectral flow of the effective Dirac-operator family
edge-flow   edge spectral flow with branch trace (CSV + SVG)
verify      full bulk-edge verification report

Configuration is a single JSON file with an explicit schema version;
unknown keys are rejected, and the fully resolved configuration (defaults
included) is written next to the artifacts so every report is
self-describing.  Results are cached under a content hash of (command,
resolved config); identical reruns reuse the cached payload and only
re-render artifacts, so outputs are byte-identical across runs.

Exit codes: 0 success, 2 hypothesis (H1)/(H2) violation, 3 invalid
configuration, 1 internal error.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import bloch, bulk, coupling, dirac, dirac_line, edge, potential, scenarios
from .errors import (
    CacheCorrupt,
    ConfigError,
    DislospecError,
    H1Violated,
    H2Violated,
    HypothesisViolation,
)

SCHEMA_VERSION = 1

_DEFAULT_BUDGETS = {
    "K": None,                  # Fourier cutoff; None = automatic
    "band_count": 8,            # bands in the dispersion sheet
    "bands_points": 201,        # xi samples for `bands`
    "s_values": [0.5, 1.0],     # dislocation strengths for `chern`
    "chern_grid": [24, 24],     # starting (xi, t) grid for the Chern sum
    "curvature_grid": [32, 32],  # sampling grid for the curvature CSV
    "n_t": 64,                  # t samples for spectral-flow scans
    "trace_points": 48,         # t samples for branch traces in `edge-flow`
    "L": 150.0,                 # half-length of the truncated edge domain
    "fd_step": 0.02,            # finite-difference step
    "delta_list": [0.04, 0.02],  # adiabatic strengths for scaling checks
    "profile": {"kind": "tanh", "width": 1.0},   # edge transition profile
    "dirac_profile": {"kind": "tanh", "width": 0.5},
}

_TOP_KEYS = {"schema_version", "scenario", "potentials", "budgets"}
_POTENTIAL_KEYS = {"V", "W", "n", "id", "predicted_winding", "predicted_index", "epsilon"}


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} key(s): {', '.join(unknown)}")


def load_config(path: str | None, scenario_id: str | None) -> dict:
    """Parse, validate, and resolve a run configuration with its defaults."""
    raw = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        _reject_unknown(raw, _TOP_KEYS, "config")
        if raw.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(
                f"schema_version must be {SCHEMA_VERSION}, got {raw.get('schema_version')!r}"
            )
    budgets = copy.deepcopy(_DEFAULT_BUDGETS)
    user_budgets = raw.get("budgets", {})
    if not isinstance(user_budgets, dict):
        raise ConfigError("budgets must be an object")
    _reject_unknown(user_budgets, set(budgets), "budgets")
    budgets.update(user_budgets)
    _validate_budgets(budgets)
    cfg = {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario_id or raw.get("scenario"),
        "potentials": raw.get("potentials"),
        "budgets": budgets,
    }
    if cfg["scenario"] is None and cfg["potentials"] is None:
        raise ConfigError("either a scenario id or explicit potentials is required")
    if cfg["potentials"] is not None:
        pots = cfg["potentials"]
        if not isinstance(pots, dict):
            raise ConfigError("potentials must be an object")
        _reject_unknown(pots, _POTENTIAL_KEYS, "potentials")
        for key in ("V", "W", "n"):
            if key not in pots:
                raise ConfigError(f"potentials section is missing {key!r}")
    return cfg


def _validate_budgets(b: dict) -> None:
    def positive(name, lo=0):
        v = b[name]
        if not isinstance(v, (int, float)) or v <= lo:
            raise ConfigError(f"budget {name!r} must be a number > {lo}, got {v!r}")

    positive("band_count")
    positive("bands_points", 1)
    positive("n_t", 7)
    positive("L")
    positive("fd_step")
    if b["K"] is not None and (not isinstance(b["K"], int) or b["K"] < 4):
        raise ConfigError("budget 'K' must be an integer >= 4 or null")
    for name in ("chern_grid", "curvature_grid"):
        g = b[name]
        if (
            not isinstance(g, (list, tuple))
            or len(g) != 2
            or any(not isinstance(v, int) or v < 4 for v in g)
        ):
            raise ConfigError(f"budget {name!r} must be two integers >= 4")
    if not b["s_values"] or any(not 0 < s <= 1 for s in b["s_values"]):
        raise ConfigError("budget 's_values' must be strengths in (0, 1]")
    if any(not 0 < d <= 1 for d in b["delta_list"]):
        raise ConfigError("budget 'delta_list' must be strengths in (0, 1]")
    for name in ("profile", "dirac_profile"):
        p = b[name]
        if (
            not isinstance(p, dict)
            or p.get("kind") not in ("tanh", "step")
            or not isinstance(p.get("width", 1.0), (int, float))
        ):
            raise ConfigError(f"budget {name!r} must be {{kind: tanh|step, width: w}}")


def _scenario_from_config(cfg: dict) -> scenarios.Scenario:
    if cfg["potentials"] is not None:
        pots = cfg["potentials"]
        V = potential.from_records(pots["V"])
        W = potential.from_records(pots["W"])
        n = int(pots["n"])
        winding = int(pots.get("predicted_winding", 1))
        sign = (-1) ** ((n - 1) // 2)
        return scenarios.Scenario(
            id=str(pots.get("id", "custom")),
            V=V,
            W=W,
            n=n,
            epsilon=float(pots.get("epsilon", 1.0)),
            predicted_winding=winding,
            predicted_index=int(pots.get("predicted_index", sign * winding)),
        )
    return scenarios.builtin(cfg["scenario"])


def _profile(spec: dict) -> dirac_line.TransitionProfile:
    return dirac_line.TransitionProfile(kind=spec["kind"], width=float(spec.get("width", 1.0)))


# -- cache -------------------------------------------------------------------

def config_hash(command: str, cfg: dict) -> str:
    blob = json.dumps({"command": command, "config": cfg}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_load(out_dir: Path, key: str, log) -> dict | None:
    path = out_dir / "cache" / f"{key}.json"
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
        if payload.get("_cache_key") != key:
            raise CacheCorrupt("cache key mismatch")
        return payload
    except (json.JSONDecodeError, CacheCorrupt, OSError) as exc:
        log(f"cache corrupt ({exc}); recomputing")
        return None


def cache_store(out_dir: Path, key: str, payload: dict) -> None:
    cache_dir = out_dir / "cache"
    cache_dir.mkdir(parents=True, exist_ok=True)
    payload = dict(payload, _cache_key=key)
    (cache_dir / f"{key}.json").write_text(json.dumps(payload, sort_keys=True))


# -- command payloads (pure computation, JSON-serializable results) ----------

def _compute_bands(sc, b):
    xi = np.linspace(0.0, 2 * np.pi, int(b["bands_points"]))
    rows, violations = bloch.dispersion_sheet(
        sc.V, xi, int(b["band_count"]), K=b["K"]
    )
    return {
        "rows": [[float(x), int(j), float(e)] for x, j, e in rows],
        "monotonicity_violations": [[int(j), float(w)] for j, w in violations],
    }


def _compute_dirac(sc, b):
    dd = dirac.find_dirac_point(sc.V, sc.n, K=b["K"]) if b["K"] else dirac.find_dirac_point(sc.V, sc.n)
    return {"record": dirac.to_record(dd)}


def _dirac_and_curve(sc, b):
    dd = dirac.find_dirac_point(sc.V, sc.n, K=b["K"]) if b["K"] else dirac.find_dirac_point(sc.V, sc.n)
    curve = coupling.coupling_curve(dd, sc.W)
    return dd, curve


def _compute_winding(sc, b):
    _, curve = _dirac_and_curve(sc, b)
    return {
        "winding": int(curve.winding),
        "min_modulus": float(curve.min_modulus),
        "theta_F": float(curve.theta_F),
        "samples": [
            [float(t), float(v.real), float(v.imag)]
            for t, v in zip(curve.t, curve.values)
        ],
    }


def _compute_chern(sc, b):
    out = {"c1": {}}
    for s in b["s_values"]:
        fld = bulk.torus_eigenframe(sc.V, sc.W, float(s), sc.n, *b["chern_grid"])
        out["c1"][str(s)] = int(bulk.chern_fhs(fld))
    # curvature samples at full strength for the CSV/heatmap twin
    Nx, Nt = b["curvature_grid"]
    fld = bulk.torus_eigenframe(sc.V, sc.W, 1.0, sc.n, 8, 8)
    xs = np.linspace(0, 2 * np.pi, Nx, endpoint=False)
    ts = np.linspace(0, 2 * np.pi, Nt, endpoint=False)
    hx, ht = xs[1] - xs[0], ts[1] - ts[0]
    samples = [
        [float(x), float(t), float(bulk.berry_curvature_trace(fld, x, t, hx / 4, ht / 4).imag)]
        for x in xs
        for t in ts
    ]
    out["curvature"] = samples
    return out


def _compute_dirac_flow(sc, b):
    dd, curve = _dirac_and_curve(sc, b)
    prof = _profile(b["dirac_profile"])

    def family(t):
        return dirac_line.dislocated_operator(
            dd.nu_star,
            curve.theta_star,
            complex(coupling.theta_from_fourier(curve.fourier, t)),
            prof,
        )

    flow = dirac_line.dirac_spectral_flow(family, n_t=int(b["n_t"]))
    ts = np.linspace(0.0, 2 * np.pi, 18)[1:-1]
    branches = [
        [
            float(t),
            [
                float(mu)
                for mu in dirac_line.dirac_bound_states(
                    family(t), grid_points=120
                ).eigenvalues
            ],
        ]
        for t in ts
    ]
    return {"flow": int(flow), "bound_states": branches}


def _edge_problem(sc, b):
    return edge.EdgeProblem(
        V=sc.V,
        W=sc.W,
        n=sc.n,
        profile=_profile(b["profile"]),
        L=float(b["L"]),
        discretization=edge.FiniteDifference(step=float(b["fd_step"])),
    )


def _compute_edge_flow(sc, b):
    sel = bulk.gap_scan_h1(sc.V, sc.W, sc.n)
    prob = _edge_problem(sc, b)
    trace = edge.spectral_flow(
        prob, sel, n_t=int(b["n_t"]), trace_points=int(b["trace_points"])
    )
    return {
        "total": int(trace.total),
        "crossings": [[float(t), int(s)] for t, s in trace.crossings],
        "t_grid": [float(t) for t in trace.t_grid],
        "e_ref": [float(e) for e in trace.e_ref],
        "gap_edges": [[float(lo), float(hi)] for lo, hi in trace.gap_edges],
        "branches": [
            [[float(t), float(e), float(x), bool(j)] for t, e, x, j in br]
            for br in trace.branches
        ],
    }


def _compute_verify(sc, b):
    rep = scenarios.verify_pipeline(
        sc,
        s_values=tuple(b["s_values"]),
        chern_grid=tuple(b["chern_grid"]),
        n_t=int(b["n_t"]),
        dirac_profile=_profile(b["dirac_profile"]),
        edge_profile=_profile(b["profile"]),
    )
    return {
        "report": {
            "scenario_id": rep.scenario_id,
            "predicted_index": rep.predicted_index,
            "h1_margin": rep.h1_margin,
            "h2_margin": rep.h2_margin,
            "winding": rep.winding,
            "chern": {str(k): v for k, v in rep.chern.items()},
            "dirac_flow": rep.dirac_flow,
            "edge_flow": rep.edge_flow,
            "crossing_count": rep.crossing_count,
            "verdict": rep.verdict,
            "timings": rep.timings,
        }
    }


_COMMANDS = {
    "bands": _compute_bands,
    "dirac": _compute_dirac,
    "winding": _compute_winding,
    "chern": _compute_chern,
    "dirac-flow": _compute_dirac_flow,
    "edge-flow": _compute_edge_flow,
    "verify": _compute_verify,
}


# -- artifact rendering ------------------------------------------------------

def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
            fh.write("\n")


def _savefig(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _render(command: str, payload: dict, sc, out: Path, log) -> None:
    if command == "bands":
        _write_csv(out / "bands.csv", "xi,band_index,energy", payload["rows"])
        plt = _plt()
        fig, ax = plt.subplots(figsize=(6, 4))
        rows = np.array(payload["rows"])
        for j in sorted(set(rows[:, 1].astype(int))):
            sel = rows[rows[:, 1] == j]
            ax.plot(sel[:, 0], sel[:, 2], lw=1)
        ax.set_xlabel("quasimomentum xi")
        ax.set_ylabel("energy")
        fig.tight_layout()
        _savefig(fig, out / "bands.svg")
        plt.close(fig)
        log(f"bands: {len(payload['rows'])} rows")
    elif command == "dirac":
        (out / "dirac.json").write_text(json.dumps(payload["record"], sort_keys=True, indent=1))
        rec = payload["record"]
        log(f"dirac point: E* = {rec['E_star']!r}, nu* = {rec['nu_star']!r}")
    elif command == "winding":
        rows = [
            (t, re, im, float(np.arctan2(im, re)))
            for t, re, im in payload["samples"]
        ]
        _write_csv(out / "winding.csv", "t,re_theta,im_theta,arg_theta", rows)
        (out / "winding.json").write_text(
            json.dumps({k: payload[k] for k in ("winding", "min_modulus", "theta_F")}, sort_keys=True)
        )
        log(f"winding m = {payload['winding']}")
    elif command == "chern":
        _write_csv(out / "curvature.csv", "xi,t,im_B", payload["curvature"])
        (out / "chern.json").write_text(json.dumps(payload["c1"], sort_keys=True))
        plt = _plt()
        arr = np.array(payload["curvature"])
        nx = len(set(arr[:, 0]))
        grid = arr[:, 2].reshape(nx, -1)
        fig, ax = plt.subplots(figsize=(5, 4))
        im = ax.imshow(
            grid.T, origin="lower", extent=(0, 2 * np.pi, 0, 2 * np.pi), aspect="auto"
        )
        fig.colorbar(im, ax=ax, label="Im tr(P [dP, dP])")
        ax.set_xlabel("xi")
        ax.set_ylabel("t")
        fig.tight_layout()
        _savefig(fig, out / "curvature.svg")
        plt.close(fig)
        log("chern c1 = " + ", ".join(f"s={k}: {v}" for k, v in payload["c1"].items()))
    elif command == "dirac-flow":
        rows = [
            (t, j, mu)
            for t, mus in payload["bound_states"]
            for j, mu in enumerate(mus)
        ]
        _write_csv(out / "dirac_flow.csv", "t,branch,energy", rows)
        (out / "dirac_flow.json").write_text(json.dumps({"flow": payload["flow"]}))
        log(f"dirac-line flow = {payload['flow']}")
    elif command == "edge-flow":
        trace = edge.SpectralFlowTrace(
            t_grid=np.array(payload["t_grid"]),
            e_ref=np.array(payload["e_ref"]),
            gap_edges=np.array(payload["gap_edges"]),
            branches=[[tuple(s) for s in br] for br in payload["branches"]],
            crossings=[(t, s) for t, s in payload["crossings"]],
            total=payload["total"],
        )
        edge.export_flow_csv(trace, out / "edge_flow.csv")
        edge.plot_flow(trace, out / "edge_flow.svg")
        (out / "edge_flow.json").write_text(
            json.dumps({"total": payload["total"], "crossings": payload["crossings"]})
        )
        log(f"edge spectral flow = {payload['total']}")
    elif command == "verify":
        rep = payload["report"]
        report = scenarios.VerificationReport(
            scenario_id=rep["scenario_id"],
            predicted_index=rep["predicted_index"],
            h1_margin=rep["h1_margin"],
            h2_margin=rep["h2_margin"],
            winding=rep["winding"],
            chern={float(k): v for k, v in rep["chern"].items()},
            dirac_flow=rep["dirac_flow"],
            edge_flow=rep["edge_flow"],
            crossing_count=rep["crossing_count"],
            verdict=rep["verdict"],
            timings=rep["timings"],
        )
        text = scenarios.report_text(report)
        (out / "verify.txt").write_text(text + "\n")
        scenarios.summary_csv([report], out / "verify.csv")
        log(text)


# -- entry point -------------------------------------------------------------

def run(command: str, cfg: dict, out_dir: Path, use_cache: bool = True, log=print) -> int:
    """Execute one command against a resolved config; returns the exit code."""
    if command not in _COMMANDS:
        raise ConfigError(
            f"unknown command {command!r}; choose from {', '.join(sorted(_COMMANDS))}"
        )
    sc = _scenario_from_config(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.resolved.json").write_text(json.dumps(cfg, sort_keys=True, indent=1))
    key = config_hash(command, cfg)
    payload = cache_load(out_dir, key, log) if use_cache else None
    if payload is not None:
        log(f"cache hit {key[:12]}: no eigensolves executed")
    else:
        payload = _COMMANDS[command](sc, cfg["budgets"])
        if use_cache:
            cache_store(out_dir, key, payload)
    _render(command, payload, sc, out_dir, log)
    return 0


def _limit_threads(n: int | None) -> None:
    if n is None:
        return
    import os

    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(n)
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(limits=n)
    except ImportError:
        pass


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dislospec",
        description="spectral and topological invariants of dislocated Schrödinger operators",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", metavar="PATH", default=None)
    parser.add_argument("--scenario", metavar="ID", default=None)
    parser.add_argument("--out", metavar="DIR", default="out")
    parser.add_argument("--no-cache", action="store_true")
    parser.add_argument("--threads", type=int, metavar="N", default=None)
    args = parser.parse_args(argv)
    _limit_threads(args.threads)
    try:
        cfg = load_config(args.config, args.scenario)
        return run(args.command, cfg, Path(args.out), use_cache=not args.no_cache)
    except ConfigError as exc:
        print(f"configuration invalid: {exc}", file=sys.stderr)
        return 3
    except HypothesisViolation as exc:
        tag = "(H1)" if isinstance(exc, H1Violated) else "(H2)" if isinstance(exc, H2Violated) else ""
        print(f"hypothesis violation {tag}: {exc}", file=sys.stderr)
        return 2
    except DislospecError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
