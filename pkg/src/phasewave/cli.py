"""Batch command-line surface emitting CSV/JSON for external plotting.

Exit codes: 0 success, 2 rejected input, 3 numerical failure.  Output
files are deterministic: fixed summation order, no timestamps, floats
printed with 17 significant digits (lossless for doubles).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import fock, fresnel, semiclassics, spinmap, wigner
from .errors import NumericsError, ValidationError


def _fmt(value: float) -> str:
    return "%.17g" % value


def _complex_dict(z: complex) -> dict:
    return {
        "re": z.real,
        "im": z.imag,
        "abs": abs(z),
        "phase": math.atan2(z.imag, z.real),
    }


def _write(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def parse_state(spec: str) -> fock.DensityMatrix:
    """State mini-grammar: vacuum | fock:<n> | coherent:<re>[,<im>] | mixture:..."""
    spec = spec.strip()
    if spec.startswith("mixture:"):
        parts = spec[len("mixture:"):].split(";")
        pairs = []
        for part in parts:
            if "@" not in part:
                raise ValidationError(f"mixture component {part!r} lacks a @weight")
            sub, weight = part.rsplit("@", 1)
            pairs.append((_parse_pure(sub), float(weight)))
        return fock.DensityMatrix.mixture(pairs)
    return _parse_pure(spec).density()


def _parse_pure(spec: str) -> fock.FockState:
    spec = spec.strip()
    try:
        if spec == "vacuum":
            return fock.FockState.vacuum()
        if spec.startswith("fock:"):
            return fock.FockState.fock(int(spec[len("fock:"):]))
        if spec.startswith("coherent:"):
            parts = spec[len("coherent:"):].split(",")
            if len(parts) not in (1, 2):
                raise ValidationError(f"bad coherent amplitude in {spec!r}")
            beta = complex(float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0)
            return fock.coherent_amplitudes(beta)
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"malformed state spec {spec!r}: {exc}") from exc
    raise ValidationError(f"unknown state spec {spec!r}")


def parse_grid(spec: str, spec_v: str | None) -> wigner.PhaseGrid:
    """Grid mini-grammar min:max:count, symmetric unless a v-spec overrides."""
    def axis(text):
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid spec {text!r} is not min:max:count")
        try:
            return float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ValidationError(f"grid spec {text!r}: {exc}") from exc

    u_lo, u_hi, n_u = axis(spec)
    v_lo, v_hi, n_v = axis(spec_v) if spec_v else (u_lo, u_hi, n_u)
    return wigner.PhaseGrid(u_lo, u_hi, v_lo, v_hi, n_u, n_v)


def _serialize_field(field: wigner.WignerField, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(field.to_json_dict()) + "\n"
    return field.to_csv()


# -- subcommand handlers -----------------------------------------------------


def cmd_wigner(args) -> int:
    rho = parse_state(args.state)
    grid = parse_grid(args.grid, args.grid_v)
    if args.method in ("direct", "both"):
        direct = wigner.wigner_direct(rho, grid)
    if args.method in ("parity", "both"):
        parity = wigner.wigner_parity(rho, grid, args.n_max)
    if args.method == "direct":
        _write(args.out, _serialize_field(direct, args.format))
    elif args.method == "parity":
        _write(args.out, _serialize_field(parity, args.format))
    else:
        if args.out is None:
            raise ValidationError("--method both needs --out to place two files")
        path = Path(args.out)
        parity_path = path.with_name(path.stem + ".parity" + path.suffix)
        _write(args.out, _serialize_field(direct, args.format))
        _write(str(parity_path), _serialize_field(parity, args.format))
        deviation = float(np.max(np.abs(direct.values - parity.values)))
        sys.stdout.write(f"max_abs_deviation={_fmt(deviation)}\n")
    return 0


def cmd_overlap(args) -> int:
    if args.beta < 0:
        raise ValidationError("beta must be nonnegative")
    report = semiclassics.compare_poisson(args.beta, args.n_bands)
    if args.format == "json":
        _write(args.out, report.to_json() + "\n")
    else:
        _write(args.out, report.to_csv())
    return 0


def cmd_fresnel(args) -> int:
    geom = fresnel.FresnelGeometry(
        r0=args.r0, b=args.b, wavelength=args.wavelength, amplitude=args.amplitude
    )
    if args.subaction == "zones":
        rows = fresnel.zone_table(geom, args.n, args.nodes)
        slope = fresnel.fit_zone_scaling(geom, args.n) if args.n >= 2 else float("nan")
        if args.format == "json":
            payload = {
                "slope_loglog": slope,
                "zones": [
                    {
                        "n": r[0], "rho": r[1], "re_Un": r[2],
                        "im_Un": r[3], "abs_Un": r[4], "phase_Un": r[5],
                    }
                    for r in rows
                ],
            }
            _write(args.out, json.dumps(payload) + "\n")
        else:
            lines = ["n,rho,re_Un,im_Un,abs_Un,phase_Un"]
            for r in rows:
                lines.append(",".join([str(r[0])] + [_fmt(v) for v in r[1:]]))
            _write(args.out, "\n".join(lines) + "\n")
        sys.stdout.write(f"slope_loglog={_fmt(slope)}\n")
        return 0

    if args.subaction in ("integral", "zonesum"):
        n_zones = args.n if args.subaction == "zonesum" else args.zones
        theta_max = fresnel.zone_boundary_angle(geom, n_zones)
        u_int = fresnel.huygens_integral(
            geom, theta_max, args.nodes, taper=not args.no_taper
        )
        u_raw = fresnel.zone_sum(geom, n_zones, "raw", args.nodes)
        u_avg = fresnel.zone_sum(geom, n_zones, "averaged", args.nodes)
        summary = {
            "geometry": {
                "r0": geom.r0, "b": geom.b,
                "wavelength": geom.wavelength, "amplitude": geom.amplitude,
                "n_zones": n_zones,
            },
            "U_free": _complex_dict(geom.free_field()),
            "U_integral": _complex_dict(u_int),
            "U_zone_sum_raw": _complex_dict(u_raw),
            "U_zone_sum_averaged": _complex_dict(u_avg),
        }
        _write(args.out, json.dumps(summary) + "\n")
        if args.subaction == "zonesum":
            chosen = u_avg if args.mode == "averaged" else u_raw
            sys.stdout.write(f"abs_U={_fmt(abs(chosen))}\n")
        return 0

    if args.subaction == "plate":
        open_zones, n_zones = _parse_mask(args.open, args.n)
        u_plate = fresnel.zone_plate(geom, open_zones, n_zones, args.nodes)
        u_free = geom.free_field()
        summary = {
            "geometry": {
                "r0": geom.r0, "b": geom.b,
                "wavelength": geom.wavelength, "amplitude": geom.amplitude,
            },
            "open_zones": open_zones,
            "U_plate": _complex_dict(u_plate),
            "U_free": _complex_dict(u_free),
            "amplitude_ratio": abs(u_plate) / abs(u_free),
        }
        _write(args.out, json.dumps(summary) + "\n")
        sys.stdout.write(f"amplitude_ratio={_fmt(abs(u_plate) / abs(u_free))}\n")
        return 0

    raise ValidationError(f"unknown fresnel subaction {args.subaction!r}")


def _parse_mask(spec: str, count: int) -> tuple[list[int], int]:
    """Open-zone mask: odd/even take the first ``count`` of that parity."""
    if count < 0:
        raise ValidationError("zone count must be nonnegative")
    if spec == "odd":
        zones = [2 * i + 1 for i in range(count)]
    elif spec == "even":
        zones = [2 * i for i in range(count)]
    elif spec == "all":
        zones = list(range(count))
    else:
        try:
            zones = sorted(set(int(tok) for tok in spec.split(",") if tok != ""))
        except ValueError as exc:
            raise ValidationError(f"bad zone mask {spec!r}: {exc}") from exc
        if zones and zones[0] < 0:
            raise ValidationError("zone indices must be nonnegative")
    n_zones = (max(zones) + 1) if zones else max(count, 1)
    return zones, n_zones


def cmd_spin(args) -> int:
    if args.subaction == "belts":
        sphere = spinmap.SpinSphere(args.j)
        rows = [
            (b.m, b.z_lo, b.z_hi, 2.0 * math.pi * sphere.radius * b.width)
            for b in spinmap.belts(args.j)
        ]
        if args.format == "json":
            payload = {
                "j": args.j,
                "belts": [
                    {"m": m, "z_lo": lo, "z_hi": hi, "area": a}
                    for m, lo, hi, a in rows
                ],
            }
            _write(args.out, json.dumps(payload) + "\n")
        else:
            lines = ["m,z_lo,z_hi,area"]
            for row in rows:
                lines.append(",".join(_fmt(v) for v in row))
            _write(args.out, "\n".join(lines) + "\n")
        return 0

    if args.subaction in ("project", "areas"):
        rows = spinmap.band_table(args.j)
        if args.format == "json":
            payload = {
                "j": args.j,
                "bands": [
                    {"n": n, "m": m, "rho_lo": lo, "rho_hi": hi, "area": a}
                    for n, m, lo, hi, a in rows
                ],
            }
            _write(args.out, json.dumps(payload) + "\n")
        else:
            lines = ["n,m,rho_lo,rho_hi,area"]
            for n, m, lo, hi, a in rows:
                lines.append(",".join([str(n)] + [_fmt(v) for v in (m, lo, hi, a)]))
            _write(args.out, "\n".join(lines) + "\n")
        return 0

    raise ValidationError(f"unknown spin subaction {args.subaction!r}")


_VALIDATE_HEADERS = {
    "zones": "n,rho,re_Un,im_Un,abs_Un,phase_Un",
    "overlap": "n,p_overlap,p_poisson",
    "spin-belts": "m,z_lo,z_hi,area",
    "spin-bands": "n,m,rho_lo,rho_hi,area",
}


def cmd_validate(args) -> int:
    text = Path(args.path).read_text()
    if args.kind == "wigner":
        field = (
            wigner.WignerField.from_json(text)
            if text.lstrip().startswith("{")
            else wigner.WignerField.from_csv(text)
        )
        echoed = (
            json.dumps(field.to_json_dict()) + "\n"
            if text.lstrip().startswith("{")
            else field.to_csv()
        )
        if echoed != text:
            raise ValidationError("round-trip re-serialization differs from the file")
        sys.stdout.write("ok\n")
        return 0
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        if json.dumps(obj) + "\n" != text:
            raise ValidationError("JSON round-trip differs from the file")
        sys.stdout.write("ok\n")
        return 0
    lines = text.splitlines()
    expected = _VALIDATE_HEADERS.get(args.kind)
    if expected is None:
        raise ValidationError(f"unknown kind {args.kind!r}")
    if not lines or lines[0] != expected:
        raise ValidationError(f"header mismatch: expected {expected!r}")
    for line in lines[1:]:
        for tok in line.split(","):
            value = float(tok)
            if not math.isfinite(value):
                raise ValidationError(f"non-finite value {tok!r}")
            if tok.lstrip("-").isdigit():
                continue  # integer column
            if _fmt(value) != tok:
                raise ValidationError(
                    f"token {tok!r} does not round-trip at 17 significant digits"
                )
    sys.stdout.write("ok\n")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"),
                        default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="phasewave",
        description="Phase-space and zone-construction numerics, batch CSV/JSON output.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", help="sample the Wigner function on a grid",
                       parents=[common])
    p.add_argument("--state", required=True)
    p.add_argument("--grid", required=True, help="min:max:count, both axes")
    p.add_argument("--grid-v", default=None, help="override for the v axis")
    p.add_argument("--method", choices=("direct", "parity", "both"), default="direct")
    p.add_argument("--n-max", type=int, default=None, help="truncation override")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("overlap", help="overlap-area vs Poisson occupation report", parents=[common])
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n-bands", type=int, default=None)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("fresnel", help="zone tables, field integrals, zone plates", parents=[common])
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--lambda", dest="wavelength", type=float, required=True)
    p.add_argument("--amplitude", type=float, default=1.0)
    fsub = p.add_subparsers(dest="subaction", required=True)
    pz = fsub.add_parser("zones", parents=[common])
    pz.add_argument("--n", type=int, required=True)
    pz.add_argument("--nodes", type=int, default=16)
    pi = fsub.add_parser("integral", parents=[common])
    pi.add_argument("--zones", type=int, required=True)
    pi.add_argument("--nodes", type=int, default=16)
    pi.add_argument("--no-taper", action="store_true")
    ps = fsub.add_parser("zonesum", parents=[common])
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--mode", choices=("raw", "averaged"), default="averaged")
    ps.add_argument("--nodes", type=int, default=16)
    pp = fsub.add_parser("plate", parents=[common])
    pp.add_argument("--open", required=True, help="odd | even | all | comma list")
    pp.add_argument("--n", type=int, required=True, help="number of open zones")
    pp.add_argument("--nodes", type=int, default=16)
    p.set_defaults(func=cmd_fresnel, no_taper=False)

    p = sub.add_parser("spin", help="sphere belts and their plane images", parents=[common])
    p.add_argument("--j", type=float, required=True)
    p.add_argument("subaction", choices=("belts", "project", "areas"))
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("validate", help="re-read a file this tool wrote", parents=[common])
    p.add_argument("--kind", required=True,
                   choices=("wigner", "zones", "overlap", "spin-belts", "spin-bands"))
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)
    return parser


def _join_negative_values(argv):
    """Fuse flag/value pairs whose value starts with '-' (e.g. --grid -4:4:81)."""
    fused, i = [], 0
    flags = ("--grid", "--grid-v")
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv):
            fused.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            fused.append(tok)
            i += 1
    return fused


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_negative_values(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    # global flags default here: SUPPRESS keeps pre- and post-subcommand
    # occurrences from clobbering each other
    if not hasattr(args, "out"):
        args.out = None
    if not hasattr(args, "format"):
        args.format = "csv"
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
