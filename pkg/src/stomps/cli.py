"""Command-line front end.

Every pipeline is a subcommand.  Parameters come from three layers with
fixed precedence: command-line flags override a JSON ``--config`` file,
which overrides the built-in defaults.  Config keys use the flag names with
underscores (``n_min`` for ``--n-min``); unknown keys are rejected.

Exit codes: 0 success, 1 unexpected failure, 2 invalid parameters,
3 resource ceiling exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import entanglement as ent
from . import integrals as ints
from .analytic import build_exp, build_h2s, build_h2s_jacobian, build_sto1s, build_sto2s
from .analytic import build_sto1s_derivative
from .grid import Grid1D
from .mps import DENSE_QUBIT_LIMIT, ResourceLimitError, decompose, reconstruct
from .orbitals import Kind, OrbitalSpec, sample
from .report import emit_report, render

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


_COMMON = {"output": None, "format": "csv", "seed": 0, "jobs": 1}

_INTEGRAL_1D = {
    "zeta": 1.0,
    "distance": 1.4,
    "n": 5,
    "length": 16.0,
    "via": "tensor",
    "n_min": None,
    "n_max": None,
}

DEFAULTS: dict[str, dict] = {
    "overlap1d": dict(_INTEGRAL_1D),
    "kinetic1d": dict(_INTEGRAL_1D),
    "nuclear1d": {
        "zeta": 1.0,
        "n": 6,
        "length": 16.0,
        "Z": 1.0,
        "center_a": None,
        "center_b": None,
        "potential_center": None,
        "via": "tensor",
        "n_min": None,
        "n_max": None,
    },
    "overlap3d-spherical": {"n": 6, "length": 32.0, "a": 1.0, "n_min": None, "n_max": None},
    "overlap3d-cartesian": {
        "pair": "1s1s",
        "distance": 1.4,
        "n": 6,
        "length": 16.0,
        "threshold": 1e-12,
        "zeta": 1.0,
        "a": 1.0,
        "ordering": "grouped",
        "via": "tensor",
        "n_min": None,
        "n_max": None,
    },
    "scan-bonds": {
        "zeta": 1.0,
        "length": 32.0,
        "n_min": 4,
        "n_max": 7,
        "thresholds": "1e-12,1e-9,1e-6",
        "ordering": "grouped",
    },
    "scan-zeta": {"zetas": "1,2,4,6", "n": 7, "length": 32.0, "threshold": 1e-12},
    "orderings": {"n_min": 2, "n_max": 4, "zeta": 1.0, "length": 32.0, "threshold": 1e-12},
    "profile": {"n": 7, "zeta": 1.0, "threshold": 1e-12, "length": 32.0},
    "two-electron": {
        "n_min": 3,
        "n_max": 10,
        "zeta_pair": "1,1",
        "separation": 1.4,
        "length": 32.0,
        "kernel": "coulomb",
    },
    "fourier": {"n": 10, "fraction": 0.99},
    "roundtrip-check": {"n": 12, "threshold": 0.0},
    "analytic-chi": {"n": 8},
    "tables": {"output_dir": "tables"},
}

_HELP = {
    "overlap1d": "normalized 1D 1s-1s overlap",
    "kinetic1d": "1D kinetic matrix element via derivative states",
    "nuclear1d": "1D nuclear attraction with the dense-sum oracle",
    "overlap3d-spherical": "radial 1s/2s orthogonality overlap",
    "overlap3d-cartesian": "3D Cartesian two-centre overlaps",
    "scan-bonds": "bond dimensions versus resolution and threshold",
    "scan-zeta": "bond dimensions versus orbital exponent",
    "orderings": "grouped versus interleaved qubit ordering",
    "profile": "per-cut bond profile of the 3D 1s state",
    "two-electron": "Schmidt rank of the 1D two-electron Coulomb matrix",
    "fourier": "fraction of Fourier modes holding the spectral weight of 1/|x|",
    "roundtrip-check": "lossless decompose/reconstruct on a seeded random state",
    "analytic-chi": "numerical bond dimensions of the analytic function families",
    "tables": "regenerate every in-scope table into an output directory",
}

_TYPES = {
    "n": int,
    "n_min": int,
    "n_max": int,
    "seed": int,
    "jobs": int,
    "zeta": float,
    "distance": float,
    "length": float,
    "threshold": float,
    "Z": float,
    "a": float,
    "center_a": float,
    "center_b": float,
    "potential_center": float,
    "separation": float,
    "fraction": float,
}

_CHOICES = {
    "via": ["tensor", "circuit"],
    "format": ["csv", "json"],
    "ordering": ["grouped", "interleaved"],
    "pair": ["1s1s", "2s2s", "1s2s"],
    "kernel": ["coulomb", "bare", "none"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stomps",
        description=__doc__.split("\n\n")[0],
        epilog="Precedence: flags > --config file > defaults. Exit codes: 0 ok, "
        "1 failure, 2 invalid parameters, 3 resource ceiling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, defaults in DEFAULTS.items():
        p = sub.add_parser(cmd, help=_HELP[cmd], description=_HELP[cmd])
        p.add_argument("--config", type=Path, help="JSON file of parameters")
        for key, default in {**defaults, **_COMMON}.items():
            flag = "--" + key.replace("_", "-")
            kwargs = {"default": argparse.SUPPRESS, "help": f"default: {default}"}
            if key in _TYPES:
                kwargs["type"] = _TYPES[key]
            if key in _CHOICES:
                kwargs["choices"] = _CHOICES[key]
            p.add_argument(flag, dest=key, **kwargs)
    return parser


def resolve_params(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags; reject unknown config keys."""
    cmd = args.command
    allowed = {**DEFAULTS[cmd], **_COMMON}
    params = dict(allowed)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if getattr(args, "config", None) is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        if data.pop("command", cmd) != cmd:
            raise UsageError(f"config is for a different command than {cmd!r}")
        unknown = sorted(set(data) - set(allowed))
        if unknown:
            raise UsageError(f"unknown config keys for {cmd}: {', '.join(unknown)}")
        for key, value in data.items():
            if value is not None and key in _TYPES:
                value = _TYPES[key](value)
            if key in _CHOICES and value not in _CHOICES[key]:
                raise UsageError(f"{key} must be one of {_CHOICES[key]}")
            params[key] = value
    params.update(flags)
    if params["jobs"] < 1:
        raise UsageError("jobs must be >= 1")
    return params


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _n_values(p: dict) -> list[int]:
    lo, hi = p.get("n_min"), p.get("n_max")
    if lo is None and hi is None:
        return [int(p["n"])]
    lo = p["n"] if lo is None else lo
    hi = lo if hi is None else hi
    if hi < lo:
        raise UsageError("n_max must not be below n_min")
    return list(range(int(lo), int(hi) + 1))


def _pct(x) -> str:
    return "n/a" if x is None else f"{100 * x:.2f}%"


def _integral_summary(results) -> str:
    r = results[-1]
    ref = "n/a" if r.reference is None else f"{r.reference:.6g}"
    return (
        f"n={r.n_qubits} value={r.physical_value:.6g} reference={ref} "
        f"rel_error={_pct(r.relative_error)}"
    )


def _run_integral(cmd: str, p: dict):
    seed = p["seed"]
    out = []
    for n in _n_values(p):
        if cmd in ("overlap1d", "kinetic1d"):
            fn = ints.overlap_1d if cmd == "overlap1d" else ints.kinetic_1d
            out.append(fn(p["zeta"], p["distance"], n, p["length"], p["via"], seed))
        elif cmd == "nuclear1d":
            centers = None
            if p["center_a"] is not None or p["center_b"] is not None:
                if p["center_a"] is None or p["center_b"] is None:
                    raise UsageError("give both center_a and center_b")
                centers = (p["center_a"], p["center_b"])
            out.append(
                ints.nuclear_attraction_1d(
                    p["zeta"], centers, p["potential_center"], p["Z"], n, p["length"],
                    p["via"], seed,
                )
            )
        elif cmd == "overlap3d-spherical":
            out.append(ints.overlap_3d_spherical(n, p["length"], p["a"]))
        else:
            out.append(
                ints.overlap_3d_cartesian(
                    p["pair"], p["distance"], n, p["length"], p["threshold"], p["zeta"],
                    p["a"], p["ordering"], via=p["via"], seed=seed,
                )
            )
    summary = _integral_summary(out)
    if cmd == "nuclear1d":
        r = out[-1]
        dense = ints.nuclear_attraction_dense(
            p["zeta"], None if p["center_a"] is None else (p["center_a"], p["center_b"]),
            p["potential_center"], p["Z"], r.n_qubits, p["length"],
        )
        summary += f" dense_sum={dense:.10g}"
    return [r.row() for r in out], summary


def _run_roundtrip(p: dict):
    n = int(p["n"])
    if n > DENSE_QUBIT_LIMIT:
        raise ResourceLimitError(f"n={n} exceeds the dense ceiling of {DENSE_QUBIT_LIMIT}")
    if n < 1:
        raise UsageError("n must be positive")
    rng = np.random.default_rng(p["seed"])
    vec = rng.standard_normal(1 << n)
    vec /= np.linalg.norm(vec)
    mps = decompose(vec, p["threshold"])
    fid = float(abs(np.dot(vec, reconstruct(mps))))
    row = {"n": n, "seed": p["seed"], "threshold": p["threshold"], "chi_max": mps.chi_max,
           "fidelity": fid, "infidelity": 1.0 - fid}
    return [row], f"n={n} chi_max={mps.chi_max} fidelity={fid:.15f}", fid >= 1 - 1e-12


def analytic_chi_rows(n: int = 8) -> list[dict]:
    """Analytic versus numerical bond dimension for each 1D family."""
    g16, g32 = Grid1D(n, 16.0), Grid1D(n, 32.0)
    geo = ints.two_center_geometry(1.4, n, 16.0)
    mid = g16.length / 2
    cases = [
        ("exp", OrbitalSpec(Kind.EXP, 1.0), g16, build_exp(1.0, g16)),
        ("sto1s", OrbitalSpec(Kind.STO1S, 1.0, mid), g16, build_sto1s(1.0, g16.size // 2, g16)),
        ("sto1s_deriv", OrbitalSpec(Kind.STO1S_DERIV, 1.0, mid), g16,
         build_sto1s_derivative(1.0, g16.size // 2, g16)),
        ("sto2s", OrbitalSpec(Kind.STO2S, 1.0), g32, build_sto2s(1.0, g32)),
        ("h2s", OrbitalSpec(Kind.H2S, a=1.0), g32, build_h2s(1.0, g32)),
        ("h2s_jacobian", OrbitalSpec(Kind.H2S_JACOBIAN, a=1.0), g32, build_h2s_jacobian(1.0, g32)),
        ("vpsi", OrbitalSpec(Kind.VPSI, 1.0, geo.center_b, potential_center=geo.center_a),
         g16, None),
    ]
    rows = []
    for name, spec, grid, built in cases:
        chi = decompose(sample(spec, grid), 1e-12).chi_max
        rows.append({"function": name, "n": n, "analytic_chi": None if built is None
                     else built.chi_max, "numerical_chi": chi})
    return rows


def _run(cmd: str, p: dict):
    """Return ``(records, summary, ok)``."""
    if cmd in ("overlap1d", "kinetic1d", "nuclear1d", "overlap3d-spherical",
               "overlap3d-cartesian"):
        rows, summary = _run_integral(cmd, p)
        return rows, summary, True
    if cmd == "scan-bonds":
        recs = ent.scan_resolution(
            p["zeta"], p["length"], range(p["n_min"], p["n_max"] + 1),
            _floats(p["thresholds"]), p["ordering"], p["jobs"],
        )
        return recs, f"{len(recs)} rows; chi_max at n={recs[-1].n_per_coord}: {recs[-1].chi_max}", True
    if cmd == "scan-zeta":
        recs = ent.scan_zeta(_floats(p["zetas"]), p["n"], p["length"], p["threshold"], p["jobs"])
        rows = [{"zeta": r.zeta, **r.table_row()} for r in recs]
        return rows, " ".join(f"zeta={r.zeta:g}:chi_max={r.chi_max}" for r in recs), True
    if cmd == "orderings":
        rows = []
        for n in range(p["n_min"], p["n_max"] + 1):
            g, i = ent.compare_orderings(n, p["zeta"], p["length"], p["threshold"])
            rows.append({"n": n, "total_qubits": 3 * n, "grouped_chi_max": g.chi_max,
                         "interleaved_chi_max": i.chi_max})
        last = rows[-1]
        return rows, (f"n={last['n']} grouped={last['grouped_chi_max']} "
                      f"interleaved={last['interleaved_chi_max']}"), True
    if cmd == "profile":
        rep = ent.bond_profile_report(p["n"], p["zeta"], p["threshold"], p["length"])
        if p["format"] == "json":
            rows = [rep.to_dict()]
        else:
            n = p["n"]
            regs = ["x"] * (n - 1) + ["xy"] + ["y"] * (n - 1) + ["yz"] + ["z"] * (n - 1)
            rows = [{"cut": k + 1, "register": regs[k], "chi": c}
                    for k, c in enumerate(rep.profile.dims)]
        return rows, (f"chi_max={rep.profile.max_dim} peaks x={rep.x_peak} y={rep.y_peak} "
                      f"z={rep.z_peak}"), True
    if cmd == "two-electron":
        zp = _floats(p["zeta_pair"])
        if len(zp) != 2:
            raise UsageError("zeta_pair needs two values")
        rows = []
        for n in range(p["n_min"], p["n_max"] + 1):
            rank, ratio = ent.two_electron_rank(n, tuple(zp), p["separation"], p["length"],
                                                p["kernel"])
            rows.append({"n": n, "N": 1 << n, "rank": rank, "ratio": ratio})
        return rows, f"N={rows[-1]['N']} rank={rows[-1]['rank']} ratio={rows[-1]['ratio']:.4f}", True
    if cmd == "fourier":
        frac = ent.fourier_weight(p["n"], fraction=p["fraction"])
        return [{"n": p["n"], "N": 1 << p["n"], "weight": p["fraction"], "mode_fraction": frac}], \
            f"N={1 << p['n']} mode_fraction={frac:.4f}", True
    if cmd == "roundtrip-check":
        return _run_roundtrip(p)
    if cmd == "analytic-chi":
        rows = analytic_chi_rows(p["n"])
        return rows, " ".join(f"{r['function']}={r['numerical_chi']}" for r in rows), True
    raise UsageError(f"unknown command {cmd!r}")


def run_tables(output_dir: str | Path, fmt: str = "csv", jobs: int = 1, seed: int = 0) -> list[Path]:
    """Regenerate all in-scope table data; returns the written paths."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    ext = fmt
    written = []

    def emit(name, rows):
        written.append(emit_report(rows, fmt, out / f"{name}.{ext}"))

    rows = []
    for n in (4, 5, 6, 8, 10):
        o = ints.overlap_1d(n=n, seed=seed)
        k = ints.kinetic_1d(n=n, seed=seed)
        v = ints.nuclear_attraction_1d(n=n, seed=seed)
        rows.append({"n": n, "snapped_d": o.snapped_distance, "overlap": o.physical_value,
                     "overlap_ref": o.reference, "overlap_rel_error": o.relative_error,
                     "kinetic": k.physical_value, "kinetic_ref": k.reference,
                     "kinetic_rel_error": k.relative_error, "nuclear": v.physical_value})
    emit("integrals_1d", rows)

    rows = [{"case": "spherical_1s2s", "n": n, "length": 32.0, "threshold": None,
             "value": abs(r.physical_value), "reference": 0.0}
            for n in (4, 5, 6, 8) for r in [ints.overlap_3d_spherical(n)]]
    for pair, ns, length, thr in (("1s1s", (3, 4, 5, 6), 16.0, 1e-12),
                                  ("2s2s", (4, 5, 6), 16.0, 1e-12),
                                  ("1s2s", (6,), 32.0, 1e-6)):
        for n in ns:
            r = ints.overlap_3d_cartesian(pair, 1.4, n, length, thr)
            rows.append({"case": f"cartesian_{pair}", "n": n, "length": length,
                         "threshold": thr, "value": r.physical_value, "reference": r.reference})
    emit("overlaps_3d", rows)

    emit("bond_scaling", ent.scan_resolution(jobs=jobs))
    emit("analytic_chi", analytic_chi_rows(8))
    rows, _, _ = _run("orderings", {**DEFAULTS["orderings"], **_COMMON})
    emit("orderings", rows)
    rows, _, _ = _run("two-electron", {**DEFAULTS["two-electron"], **_COMMON})
    emit("two_electron_rank", rows)
    rows, _, _ = _run("fourier", {**DEFAULTS["fourier"], **_COMMON})
    emit("fourier_weight", rows)
    return written


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        p = resolve_params(args)
        if args.command == "tables":
            if p["output"]:
                raise UsageError("tables writes a directory; use --output-dir")
            paths = run_tables(p["output_dir"], p["format"], p["jobs"], p["seed"])
            print(f"wrote {len(paths)} files to {p['output_dir']}")
            return EXIT_OK
        records, summary, ok = _run(args.command, p)
        print(summary)
        if p["output"]:
            emit_report(records, p["format"], p["output"])
        else:
            sys.stdout.write(render(records, p["format"]))
        return EXIT_OK if ok else EXIT_FAIL
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report and map to exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
