"""Command-line front end.

Subcommands: witness, scheme, region-scan, werner-sweep, check-identities,
proposition.  Exit codes: 0 ok, 1 check failure, 2 usage/parse error,
3 unphysical state, 4 invalid geometry or unsupported observable count.
All outputs are deterministic for fixed flags and seed; CSV floats carry 12
significant digits and booleans print as 0/1.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import (
    BadFrames,
    BadGeometry,
    DimensionMismatch,
    NotOrthonormal,
    NotUnit,
    PseudoprobError,
    ResolutionTooFine,
    SubsystemMismatch,
    UnknownLabel,
    Unphysical,
    UnsupportedShape,
)
from .observables import (
    bloch_vector_of,
    make_frame,
    pauli_observable,
    projector,
    triplet_with_sum,
)
from .optimizer import GeometrySearchConfig, optimize_geometry, svd_informed_spec
from .propositions import (
    classicality_check,
    make_context,
    parse_proposition,
)
from .pseudoprojection import build_scheme, marginalize, symmetric_pseudo_projection
from .regions import classify
from .states import (
    CorrelationPoint,
    DensityMatrix,
    bell_diagonal,
    load_state,
    maximally_mixed,
    ppt_is_entangled,
    singlet,
    werner_local,
)
from .witnesses import (
    KINDS,
    WitnessSpec,
    chsh_spec_from_bloch,
    default_spec,
    evaluate,
    identity_residuals,
    w1_spec,
    w2_spec,
    w3_spec,
    w4_spec,
)
from .observables import doublet_with_sum

GEOMETRY_ERRORS = (
    BadGeometry,
    BadFrames,
    NotOrthonormal,
    NotUnit,
    UnsupportedShape,
    SubsystemMismatch,
    ResolutionTooFine,
)
USAGE_ERRORS = (DimensionMismatch, UnknownLabel, json.JSONDecodeError, KeyError, ValueError, OSError)

FLOAT_FMT = "%.12g"


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


def _parse_triple(text: str) -> np.ndarray:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    return np.array(parts)


def _parse_triples(text: str) -> list[np.ndarray]:
    return [_parse_triple(part) for part in text.split(";") if part.strip()]


def _write_json(path: str | None, payload: dict, manifest: dict | None = None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None:
        print(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text + "\n")
    if manifest is not None:
        _write_manifest(path, manifest)


def _write_manifest(out_path: str, manifest: dict) -> None:
    manifest = dict(manifest)
    manifest["version"] = __version__
    manifest["outputs"] = [os.path.basename(out_path)]
    with open(out_path + ".manifest.json", "w") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _threads() -> int:
    raw = os.environ.get("PSEUDOPROB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# state and geometry construction from flags


def _state_from_args(args) -> DensityMatrix:
    if args.state:
        with open(args.state) as fh:
            return load_state(json.load(fh))
    family = args.family or "werner_local"
    if family == "werner_local":
        if args.alpha is None:
            raise ValueError("--alpha is required for the werner_local family")
        return werner_local(args.alpha, args.beta or 0.0)
    if family == "bell_diagonal":
        if not args.t:
            raise ValueError("--t t1,t2,t3 is required for the bell_diagonal family")
        t = _parse_triple(args.t)
        return bell_diagonal(CorrelationPoint(t[0], t[1], t[2]))
    if family == "singlet":
        return singlet()
    if family == "maximally_mixed":
        return maximally_mixed()
    raise ValueError(f"unknown family {family!r}")


def _geometry_flags_used(args) -> bool:
    return any(
        getattr(args, name) is not None
        for name in ("a1", "a2", "b1", "b2", "phi", "theta", "a_frame", "b_frame",
                     "a_sums", "b_sums")
    )


def _spec_from_args(args) -> WitnessSpec:
    kind = args.kind
    if not _geometry_flags_used(args):
        return default_spec(kind)
    if kind == "W0":
        flags = (args.a1, args.a2, args.b1, args.b2)
        if any(f is None for f in flags):
            raise ValueError("W0 geometry needs --a1 --a2 --b1 --b2")
        return chsh_spec_from_bloch(*(_parse_triple(f) for f in flags))
    if kind == "W1":
        flags = (args.a1, args.a2, args.phi, args.theta)
        if any(f is None for f in flags):
            raise ValueError("W1 geometry needs --a1 --a2 --phi --theta")
        a1, a2, phi, theta = (_parse_triple(f) for f in flags)
        return w1_spec(a1, a2, triplet_with_sum(phi), triplet_with_sum(theta))
    if kind in ("W2", "W4"):
        if args.a_frame is None or args.b_frame is None:
            raise ValueError(f"{kind} geometry needs --a-frame and --b-frame")
        fa = make_frame(_parse_triples(args.a_frame))
        fb = make_frame(_parse_triples(args.b_frame))
        return w2_spec(fa, fb) if kind == "W2" else w4_spec(fa, fb)
    if kind == "W3":
        if args.a_sums is None or args.b_sums is None:
            raise ValueError("W3 geometry needs --a-sums and --b-sums")
        return w3_spec(
            [doublet_with_sum(v) for v in _parse_triples(args.a_sums)],
            [triplet_with_sum(v) for v in _parse_triples(args.b_sums)],
        )
    raise ValueError(f"unknown kind {kind!r}")


def _frame_json(frame) -> dict:
    return {
        "directions": [[float(x) for x in v] for v in frame.directions],
        "sum": [float(x) for x in frame.sum_direction],
    }


def _observable_json(obs) -> dict:
    v = bloch_vector_of(obs.matrix)
    if v is not None:
        return {"bloch": [float(x) for x in v]}
    return {
        "matrix": [[float(z.real), float(z.imag)] for z in obs.matrix.reshape(-1)]
    }


def _geometry_json(spec: WitnessSpec) -> dict:
    if spec.kind == "W0":
        a1, a2, b1, b2 = spec.geometry
        return {k: _observable_json(o) for k, o in
                zip(("a1", "a2", "b1", "b2"), (a1, a2, b1, b2))}
    if spec.kind == "W1":
        a1, a2, phi, theta = spec.geometry
        return {
            "a1": _observable_json(a1),
            "a2": _observable_json(a2),
            "phi": _frame_json(phi),
            "theta": _frame_json(theta),
        }
    if spec.kind in ("W2", "W4"):
        fa, fb = spec.geometry
        return {"a_frame": _frame_json(fa), "b_frame": _frame_json(fb)}
    fa_list, fb_list = spec.geometry
    return {
        "a_doublets": [_frame_json(f) for f in fa_list],
        "b_triplets": [_frame_json(f) for f in fb_list],
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_witness(args) -> int:
    rho = _state_from_args(args)
    if args.optimize:
        if _geometry_flags_used(args):
            raise ValueError("--optimize conflicts with explicit geometry flags")
        cfg = GeometrySearchConfig(seed=args.seed, restarts=args.restarts)
        result = optimize_geometry(args.kind, rho, cfg)
        spec = result.spec
    else:
        spec = _spec_from_args(args)
    report = evaluate(spec, rho)
    payload = {
        "kind": report.kind,
        "value": report.value,
        "bound": report.bound,
        "direction": report.direction,
        "detected": report.detected,
        "scheme_sum": report.scheme_sum,
        "geometry": _geometry_json(spec),
        "optimized": bool(args.optimize),
    }
    _write_json(args.out, payload, manifest={
        "command": "witness",
        "parameters": _manifest_params(args, ("kind", "family", "alpha", "beta", "t",
                                              "state", "optimize")),
        "seed": args.seed,
    })
    return 0


def _manifest_params(args, names) -> dict:
    return {name: getattr(args, name, None) for name in names}


def _cmd_scheme(args) -> int:
    groups = []
    for gi, group_text in enumerate(args.group):
        vectors = [_parse_triple(part) for part in group_text.split()]
        letter = chr(ord("A") + gi)
        groups.append([
            pauli_observable(v, f"{letter}{k + 1}") for k, v in enumerate(vectors)
        ])
    scheme = build_scheme(groups)
    rho = None
    if args.state:
        with open(args.state) as fh:
            rho = load_state(json.load(fh))
    marginal_residuals = {}
    for group in scheme.groups:
        for obs in group:
            reduced = marginalize(scheme, obs.label)
            worst = 0.0
            for key, pp in reduced.table.items():
                # direct rebuild; emptied groups contribute identity factors
                direct = np.eye(1, dtype=complex)
                for gi, segment in enumerate(key.split(";")):
                    if segment:
                        factor = symmetric_pseudo_projection([
                            projector(o, +1 if ch == "+" else -1)
                            for o, ch in zip(reduced.groups[gi], segment)
                        ])
                    else:
                        factor = np.eye(reduced.dims[gi], dtype=complex)
                    direct = np.kron(direct, factor)
                worst = max(worst, float(np.max(np.abs(pp.operator - direct))))
            marginal_residuals[obs.label] = worst
    entries = []
    probs = scheme.pseudo_probabilities(rho) if rho is not None else None
    for key, pp in scheme.table.items():
        entry = {
            "outcomes": key,
            "operator": [[float(z.real), float(z.imag)]
                         for z in pp.operator.reshape(-1)],
        }
        if probs is not None:
            entry["pseudo_probability"] = probs[key]
            entry["nonclassical"] = bool(probs[key] < -1e-12 or probs[key] > 1 + 1e-12)
        entries.append(entry)
    payload = {
        "observables": [[obs.label for obs in group] for group in scheme.groups],
        "dims": list(scheme.dims),
        "sum_to_identity_residual": scheme.sum_residual(),
        "marginal_residuals": marginal_residuals,
        "entries": entries,
    }
    if probs is not None:
        payload["pseudo_probability_total"] = float(sum(probs.values()))
    _write_json(args.out, payload, manifest={
        "command": "scheme",
        "parameters": {"group": list(args.group), "state": args.state},
        "seed": None,
    })
    return 0


def _cmd_region_scan(args) -> int:
    if not 1e-3 <= args.step <= 0.5:
        print(f"error: step {args.step} outside [0.001, 0.5]", file=sys.stderr)
        return 2
    n = int(round(2.0 / args.step))
    values = np.round(-1.0 + args.step * np.arange(n + 1), 12)

    def scan_row(t1: float) -> list[str]:
        lines = []
        for t2 in values:
            c = classify(CorrelationPoint(float(t1), float(t2), args.t3))
            flags = [
                "1" if (c.physical and kind in c.detected_by) else "0"
                for kind in ("W1", "W2", "W3", "W4")
            ]
            lines.append(",".join([
                _fmt(t1), _fmt(float(t2)), _fmt(args.t3),
                "1" if c.physical else "0", *flags,
            ]))
        return lines

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(scan_row, [float(v) for v in values]))
    else:
        blocks = [scan_row(float(v)) for v in values]
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("t1,t2,t3,physical,W1,W2,W3,W4\n")
        for block in blocks:
            fh.write("\n".join(block) + "\n")
    _write_manifest(args.out, {
        "command": "region-scan",
        "parameters": {"t3": args.t3, "step": args.step},
        "seed": None,
    })
    return 0


SWEEP_HEADER = (
    "alpha,physical,W0,W1,W2,W3,W4,"
    "W0_detected,W1_detected,W2_detected,W3_detected,W4_detected,ppt_entangled"
)


def _cmd_werner_sweep(args) -> int:
    if args.step <= 0:
        print(f"error: step {args.step} must be positive", file=sys.stderr)
        return 2
    n = int(round((args.alpha_max - args.alpha_min) / args.step))
    alphas = np.round(args.alpha_min + args.step * np.arange(n + 1), 12)
    lines = []
    for alpha in alphas:
        try:
            rho = werner_local(float(alpha), args.beta)
        except Unphysical:
            lines.append(",".join([_fmt(float(alpha)), "0"] + ["nan"] * 5 + ["0"] * 6))
            continue
        values = []
        flags = []
        for kind in KINDS:
            report = evaluate(svd_informed_spec(kind, rho), rho, scheme_check=False)
            values.append(_fmt(report.value))
            flags.append("1" if report.detected else "0")
        ppt = "1" if ppt_is_entangled(rho) else "0"
        lines.append(",".join([_fmt(float(alpha)), "1", *values, *flags, ppt]))
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write(SWEEP_HEADER + "\n")
        fh.write("\n".join(lines) + "\n")
    _write_manifest(args.out, {
        "command": "werner-sweep",
        "parameters": {
            "beta": args.beta, "alpha_min": args.alpha_min,
            "alpha_max": args.alpha_max, "step": args.step,
        },
        "seed": None,
    })
    return 0


def _cmd_check_identities(args) -> int:
    residuals = identity_residuals(args.seed, args.trials,
                                   corrupt=args.corrupt_coefficient)
    worst = max(residuals.values())
    ok = worst <= 1e-10
    for key in sorted(residuals):
        status = "ok" if residuals[key] <= 1e-10 else "FAIL"
        print(f"identity {key}: max residual {residuals[key]:.3e} [{status}]")
    print(f"overall: {'ok' if ok else 'FAIL'} "
          f"(worst {worst:.3e} over {args.trials} trials, seed {args.seed})")
    return 0 if ok else 1


def _cmd_proposition(args) -> int:
    groups = []
    for group_text in args.context.split(";"):
        group = []
        for assignment in group_text.split():
            label, _, triple = assignment.partition("=")
            if not triple:
                raise ValueError(f"bad observable assignment {assignment!r}")
            group.append(pauli_observable(_parse_triple(triple), label))
        if group:
            groups.append(group)
    ctx = make_context(groups)
    prop = parse_proposition(args.text)
    with open(args.state) as fh:
        rho = load_state(json.load(fh))
    result = classicality_check(rho, prop, ctx)
    _write_json(args.out, {
        "proposition": args.text,
        "value": result.value,
        "classical": result.classical,
    }, manifest={
        "command": "proposition",
        "parameters": {"text": args.text, "context": args.context, "state": args.state},
        "seed": None,
    })
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudoprob",
        description="Pseudo-probability witnesses for nonlocality and entanglement",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witness", help="evaluate one witness on one state")
    w.add_argument("--kind", required=True, choices=KINDS)
    w.add_argument("--family", choices=("werner_local", "bell_diagonal", "singlet",
                                        "maximally_mixed"))
    w.add_argument("--alpha", type=float)
    w.add_argument("--beta", type=float, default=0.0)
    w.add_argument("--t", help="t1,t2,t3 for the bell_diagonal family")
    w.add_argument("--state", help="JSON state file")
    w.add_argument("--a1")
    w.add_argument("--a2")
    w.add_argument("--b1")
    w.add_argument("--b2")
    w.add_argument("--phi")
    w.add_argument("--theta")
    w.add_argument("--a-frame", dest="a_frame")
    w.add_argument("--b-frame", dest="b_frame")
    w.add_argument("--a-sums", dest="a_sums")
    w.add_argument("--b-sums", dest="b_sums")
    w.add_argument("--optimize", action="store_true")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--restarts", type=int, default=16)
    w.add_argument("--out")
    w.set_defaults(func=_cmd_witness)

    s = sub.add_parser("scheme", help="dump the pseudo-probability table")
    s.add_argument("--group", action="append", required=True,
                   help="space-separated Bloch triples, one flag per subsystem")
    s.add_argument("--state", help="JSON state file for pseudo probabilities")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_scheme)

    r = sub.add_parser("region-scan", help="classify a (t1,t2) grid at fixed t3")
    r.add_argument("--t3", type=float, required=True)
    r.add_argument("--step", type=float, default=0.01)
    r.add_argument("--out", required=True)
    r.set_defaults(func=_cmd_region_scan)

    v = sub.add_parser("werner-sweep", help="witness values along the Werner line")
    v.add_argument("--beta", type=float, default=0.0)
    v.add_argument("--alpha-min", dest="alpha_min", type=float, default=-1.0)
    v.add_argument("--alpha-max", dest="alpha_max", type=float, default=1.0)
    v.add_argument("--step", type=float, default=1e-3)
    v.add_argument("--out", required=True)
    v.set_defaults(func=_cmd_werner_sweep)

    c = sub.add_parser("check-identities",
                       help="verify the operator identities on random geometries")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--corrupt-coefficient", dest="corrupt_coefficient",
                   choices=("W0", "W2", "W4", "S1", "S2", "S3"),
                   help=argparse.SUPPRESS)
    c.set_defaults(func=_cmd_check_identities)

    p = sub.add_parser("proposition", help="pseudo probability of a proposition")
    p.add_argument("--text", required=True,
                   help="e.g. '(A1=+ & B1=+ & B2=-) | (A1=- & B1=- & B2=-)'")
    p.add_argument("--context", required=True,
                   help="label=x,y,z assignments, ';' between subsystems")
    p.add_argument("--state", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_proposition)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "check-identities" and args.trials < 1:
        parser.error("--trials must be at least 1")
    try:
        return args.func(args)
    except Unphysical as exc:
        print(f"error: unphysical state: {exc}", file=sys.stderr)
        return 3
    except GEOMETRY_ERRORS as exc:
        print(f"error: invalid geometry: {exc}", file=sys.stderr)
        return 4
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PseudoprobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
