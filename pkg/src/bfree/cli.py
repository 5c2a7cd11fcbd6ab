"""Command-line front end.

Subcommands mirror the library modules: ``bset`` (validation and densities),
``lang`` (counting, enumeration, max-ones blocks), ``measure`` (cylinder
evaluation with optional oracle cross-check), ``thermo`` (pressure,
equilibrium, density chain, certificates, trajectories) and ``odometer``
(Haar sampling and Monte Carlo estimates).

Every run is deterministic given its flags and seed; JSON outputs echo a
config block sufficient to reproduce them.  Exit codes: 0 success, 2 invalid
input, 3 enumeration budget exceeded, 4 indeterminate certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from ._backend import BACKEND
from .bset import (
    BSet,
    davenport_erdos_table,
    free_density,
    log_density_mset,
    topological_entropy,
    validate,
)
from .errors import BudgetExceeded, InvalidInput
from .generators import GENERATOR_NAMES, make_bset
from .intervals import Interval
from .measures import (
    BernoulliMeasure,
    ConvolvedMeasure,
    MirskyMeasure,
    convolve_bruteforce_oracle,
    mirsky_crt_oracle,
)
from .odometer import OdometerPoint, haar_sample, make_rng, mc_estimate_cylinder
from .thermo import (
    INDETERMINATE,
    Potential2,
    dphi_lower,
    dphi_numeric_upper,
    entropy_convolved,
    equilibrium_p,
    equilibrium_residual,
    gibbs_certificate,
    gibbs_trajectory,
    integral_convolved_closed,
    pressure_closed_form,
    pressure_report,
)
from .words import Word, count_language, enumerate_language, eta_window, max_ones

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_INDETERMINATE = 4


def _iv(interval: Interval) -> dict:
    f = interval.to_float()
    return {"lo": float(f.lo), "hi": float(f.hi)}


def _add_bset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--elements", help="comma-separated elements, e.g. 2,3,5")
    p.add_argument("--tail-bound", type=float, default=0.0)
    p.add_argument("--complete-below", type=int, default=None)
    p.add_argument("--bset-file", help="path to a BSet JSON file")
    p.add_argument("--gen", choices=GENERATOR_NAMES, help="named generator")
    p.add_argument("--cutoff", type=int, default=1000, help="generator cutoff")


def _resolve_bset(args) -> BSet:
    if args.gen:
        return make_bset(args.gen, args.cutoff)
    if args.bset_file:
        with open(args.bset_file, "r", encoding="utf-8") as fh:
            return BSet.from_json(fh.read())
    if args.elements:
        elems = [int(x) for x in args.elements.split(",")]
        return validate(elems, args.tail_bound, args.complete_below)
    raise InvalidInput("provide --elements, --bset-file or --gen")


def _bset_config(bset: BSet) -> dict:
    return json.loads(bset.to_json())


def _emit(payload: dict, out=sys.stdout) -> None:
    json.dump(payload, out, indent=2)
    out.write("\n")


def _potential_from_args(args) -> tuple[Potential2, tuple[float, float, float] | None]:
    if getattr(args, "potential", None):
        vals = [float(x) for x in args.potential.split(",")]
        if len(vals) != 4:
            raise InvalidInput("--potential needs v00,v01,v10,v11")
        return Potential2(*vals), None
    abc = (args.a00, args.a01, args.a1)
    return Potential2.paper_family(*abc), abc


# --- bset ------------------------------------------------------------------


def cmd_bset(args) -> int:
    if args.action == "validate":
        bset = _resolve_bset(args)
        _emit({"command": "bset.validate", "config": _bset_config(bset), "result": {"valid": True}})
        return EXIT_OK
    bset = _resolve_bset(args)
    d = free_density(bset)
    table = [
        {"k": k, "b": bset.elements[k - 1], "mset_density": float(v), "exact": str(v)}
        for k, v in davenport_erdos_table(bset)
    ]
    result = {
        "free_density": _iv(d),
        "entropy": _iv(topological_entropy(bset)),
        "davenport_erdos": table,
    }
    if args.log_density_n:
        result["log_density_mset"] = {
            "N": args.log_density_n,
            "value": log_density_mset(bset, args.log_density_n),
        }
    if args.format == "csv":
        print("k,b,mset_density")
        for row in table:
            print(f"{row['k']},{row['b']},{row['mset_density']!r}")
        return EXIT_OK
    _emit({"command": "bset.report", "config": _bset_config(bset), "result": result})
    return EXIT_OK


# --- lang ------------------------------------------------------------------


def cmd_lang(args) -> int:
    bset = _resolve_bset(args)
    config = {"bset": _bset_config(bset), "n": args.n}
    if args.action == "count":
        count = count_language(args.n, bset, args.max_nodes)
        _emit({"command": "lang.count", "config": config, "result": {"count": count}})
        return EXIT_OK
    if args.action == "enum":
        for w in enumerate_language(args.n, bset, cap=args.cap):
            print(w.bits)
        return EXIT_OK
    res = max_ones(args.n, bset, method=args.method, scan_window=args.scan_window,
                   max_nodes=args.max_nodes)
    config["method"] = args.method
    _emit(
        {
            "command": "lang.maxones",
            "config": config,
            "result": {"count": res.count, "witness": res.witness.bits},
        }
    )
    return EXIT_OK


def cmd_eta(args) -> int:
    bset = _resolve_bset(args)
    window = eta_window(bset, args.start, args.end)
    print(window.to_json())
    return EXIT_OK


# --- measure ---------------------------------------------------------------


def cmd_measure(args) -> int:
    bset = _resolve_bset(args)
    word = Word(args.word)
    if args.kind == "bernoulli":
        measure = BernoulliMeasure(args.q)
        method = "closed-product"
    elif args.kind == "convolved":
        measure = ConvolvedMeasure(MirskyMeasure(bset), args.q)
        method = "superset-sum"
    else:
        measure = MirskyMeasure(bset)
        method = "incl-excl"
    exact_iv = measure.cylinder(word)
    iv = exact_iv.to_float()
    result = {"word": word.bits, "lo": float(iv.lo), "hi": float(iv.hi), "method": method}
    if args.oracle == "crt":
        if args.kind != "mirsky":
            raise InvalidInput("--oracle crt applies to the Mirsky measure")
        exact = mirsky_crt_oracle(bset, word)
        result["oracle"] = {"method": "crt", "value": float(exact), "exact": str(exact)}
        result["oracle_contained"] = bool(exact_iv.contains(exact))
    elif args.oracle == "bruteforce":
        if args.kind != "convolved":
            raise InvalidInput("--oracle bruteforce applies to the convolved measure")
        val = convolve_bruteforce_oracle(MirskyMeasure(bset), args.q, word)
        result["oracle"] = {"method": "bruteforce", "value": val}
        result["oracle_contained"] = bool(
            float(iv.lo) - 1e-12 <= val <= float(iv.hi) + 1e-12
        )
    config = {"bset": _bset_config(bset), "kind": args.kind, "q": args.q}
    _emit({"command": "measure.eval", "config": config, "result": result})
    return EXIT_OK


# --- thermo ----------------------------------------------------------------


def _ns_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def cmd_thermo(args) -> int:
    bset = _resolve_bset(args)
    config = {"bset": _bset_config(bset)}
    if args.action == "pressure":
        phi, abc = _potential_from_args(args)
        ns = _ns_list(args.ns)
        if abc is None:
            from .thermo import partition_pressure_numeric

            rows = [(n, partition_pressure_numeric(n, phi, bset, args.max_nodes)) for n in ns]
            result = {"numeric_upper": [{"n": n, "log2_Z_over_n": v} for n, v in rows]}
        else:
            report = pressure_report(*abc, bset, ns, args.max_nodes)
            result = report.to_dict()
        config["potential"] = vars_potential(args)
        if args.format == "csv":
            print("n,log2_Z_over_n")
            for row in result["numeric_upper"]:
                print(f"{row['n']},{row['log2_Z_over_n']!r}")
            return EXIT_OK
        _emit({"command": "thermo.pressure", "config": config, "result": result})
        return EXIT_OK

    if args.action == "equilibrium":
        abc = (args.a00, args.a01, args.a1)
        d = free_density(bset)
        p = equilibrium_p(*abc)
        result = {
            "p": p,
            "pressure": _iv(pressure_closed_form(*abc, d)),
            "entropy": _iv(entropy_convolved(p, d)),
            "integral": _iv(integral_convolved_closed(*abc, p, d)),
            "residual": _iv(equilibrium_residual(*abc, d)),
        }
        config["potential"] = {"a00": args.a00, "a01": args.a01, "a1": args.a1}
        _emit({"command": "thermo.equilibrium", "config": config, "result": result})
        return EXIT_OK

    if args.action == "densities":
        phi, abc = _potential_from_args(args)
        ns = _ns_list(args.ns)
        rows = [{"n": n, "upper": dphi_numeric_upper(n, phi, bset, args.max_nodes)} for n in ns]
        result = {"numeric_upper": rows}
        if abc is not None:
            result["lower"] = _iv(dphi_lower(*abc, free_density(bset)))
        config["potential"] = vars_potential(args)
        if args.format == "csv":
            print("n,upper")
            for row in rows:
                print(f"{row['n']},{row['upper']!r}")
            return EXIT_OK
        _emit({"command": "thermo.densities", "config": config, "result": result})
        return EXIT_OK

    if args.action == "certify":
        abc = (args.a00, args.a01, args.a1)
        phi = Potential2.paper_family(*abc)
        d = free_density(bset)
        q = args.q if args.q is not None else equilibrium_p(*abc)
        cert = gibbs_certificate(
            phi, q, d, dphi_lower(*abc, d), pressure_closed_form(*abc, d)
        )
        config["potential"] = {"a00": args.a00, "a01": args.a01, "a1": args.a1}
        _emit({"command": "thermo.certify", "config": config, "result": cert.to_dict()})
        return EXIT_INDETERMINATE if cert.verdict == INDETERMINATE else EXIT_OK

    # trajectory
    abc = (args.a00, args.a01, args.a1)
    traj = gibbs_trajectory(*abc, bset, _ns_list(args.ngrid), max_nodes=args.max_nodes)
    if args.format == "csv":
        sys.stdout.write(traj.to_csv())
        return EXIT_OK
    config["potential"] = {"a00": args.a00, "a01": args.a01, "a1": args.a1}
    _emit({"command": "thermo.trajectory", "config": config, "result": traj.to_dict()})
    return EXIT_OK


def vars_potential(args) -> dict:
    if getattr(args, "potential", None):
        return {"table": args.potential}
    return {"a00": args.a00, "a01": args.a01, "a1": args.a1}


# --- odometer ----------------------------------------------------------------


def cmd_odometer(args) -> int:
    bset = _resolve_bset(args)
    config = {"bset": _bset_config(bset), "seed": args.seed}
    if args.action == "sample":
        rng = make_rng(args.seed)
        pt = haar_sample(bset, rng)
        if args.advance:
            from .odometer import advance

            pt = advance(pt, args.advance)
        _emit(
            {
                "command": "odometer.sample",
                "config": config,
                "result": {"residues": list(pt.residues)},
            }
        )
        return EXIT_OK
    est = mc_estimate_cylinder(bset, Word(args.word), args.samples, args.seed)
    _emit(
        {
            "command": "odometer.estimate",
            "config": {**config, "samples": args.samples},
            "result": est.to_dict(Word(args.word)),
        }
    )
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="bfree", description=__doc__)
    top.add_argument("--version", action="version", version=f"bfree {__version__} ({BACKEND})")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, budget=False, fmt=False):
        _add_bset_args(p)
        if budget:
            p.add_argument("--max-nodes", type=int, default=50_000_000)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("bset", help="validate a BSet or report its densities")
    p.add_argument("action", choices=("report", "validate"))
    p.add_argument("--log-density-n", type=int, default=None)
    common(p, fmt=True)
    p.set_defaults(func=cmd_bset)

    p = sub.add_parser("lang", help="language counting and enumeration")
    p.add_argument("action", choices=("count", "enum", "maxones"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--method", choices=("exact", "scan"), default="exact")
    p.add_argument("--scan-window", type=int, default=None)
    common(p, budget=True)
    p.set_defaults(func=cmd_lang)

    p = sub.add_parser("eta", help="window of the characteristic point")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("measure", help="evaluate cylinder measures")
    p.add_argument("action", choices=("eval",))
    p.add_argument("--word", required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--mirsky", dest="kind", action="store_const", const="mirsky")
    kind.add_argument("--bernoulli", dest="kind", action="store_const", const="bernoulli")
    kind.add_argument("--convolved", dest="kind", action="store_const", const="convolved")
    p.set_defaults(kind="mirsky")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--oracle", choices=("none", "crt", "bruteforce"), default="none")
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("thermo", help="pressure, equilibrium, certificates, trajectories")
    p.add_argument("action", choices=("pressure", "equilibrium", "densities", "certify", "trajectory"))
    p.add_argument("--a00", type=float, default=0.0)
    p.add_argument("--a01", type=float, default=0.0)
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--potential", help="general table v00,v01,v10,v11")
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--ns", default="6,12,18,24")
    p.add_argument("--ngrid", default="4,8,16,32,64")
    common(p, budget=True, fmt=True)
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("odometer", help="Haar sampling and Monte Carlo estimates")
    p.add_argument("action", choices=("sample", "estimate"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--word", default="1")
    p.add_argument("--advance", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_odometer)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_INVALID
    except BudgetExceeded as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
