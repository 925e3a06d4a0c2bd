"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 computational refusal (search budget, depth or undecidable enclosure).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import certificates as certs
from .construction import (
    Params,
    PhiFamily,
    Schedule,
    Sequence,
    build_sequence,
    build_sequence_phi,
    invariant_failures,
    load_sequence,
)
from .errors import ArtifactError, InvalidArgument
from .numerics import parse_int, parse_rational
from .oracle import DEFAULT_BUDGET, psi_star_enclosure, psi_star_exhaustive
from .spectrum import (
    check_phi_admissible,
    liouville_check,
    phi_ratio_scan,
    ratio_csv,
    records_csv,
    theta_scan,
)
from .witnesses import build_witness

VERIFY_SEARCH_BUDGET = 3 * 10**5


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def cmd_construct(args) -> int:
    params = Params(args.n, parse_rational(args.c), Schedule.parse(args.schedule), args.depth)
    _emit(build_sequence(params).dumps(), args.out)
    return 0


def cmd_phi_build(args) -> int:
    params = Params(args.n, None, Schedule.parse(args.schedule), args.depth)
    _emit(build_sequence_phi(params, PhiFamily.parse(args.phi)).dumps(), args.out)
    return 0


def cmd_witness(args) -> int:
    seq = load_sequence(args.seq)
    _emit(_dump(build_witness(seq, parse_int(args.Q)).to_json()), args.out)
    return 0


def cmd_psi(args) -> int:
    seq = load_sequence(args.seq)
    Q = parse_int(args.Q)
    if args.mode == "exhaustive":
        res = psi_star_exhaustive(seq, Q, k=args.k, budget=args.budget, workers=args.threads)
    else:
        res = psi_star_enclosure(seq, Q)
    _emit(_dump(res.to_json()), args.out)
    return 0


def cmd_scan(args) -> int:
    seq = load_sequence(args.seq)
    _emit(records_csv(theta_scan(seq, args.k_min, args.k_max, workers=args.threads)), args.out)
    return 0


def cmd_liouville(args) -> int:
    seq = load_sequence(args.seq)
    k_max = min(args.k_max, seq.K - 1)
    results = [{"k": k, "pass": liouville_check(seq, args.N, k)} for k in range(1, k_max + 1)]
    _emit(_dump({"N": args.N, "results": results, "liouville": any(r["pass"] for r in results)}), args.out)
    return 0


def cmd_phi_scan(args) -> int:
    seq = load_sequence(args.seq)
    _emit(ratio_csv(phi_ratio_scan(seq, args.k_min, args.k_max)), args.out)
    return 0


def cmd_phi_check(args) -> int:
    samples = [parse_int(s) for s in args.samples.split(",") if s.strip()]
    rep = check_phi_admissible(PhiFamily.parse(args.phi), args.n, samples)
    _emit(_dump(rep.to_json()), args.out)
    return 0


def verify_report(seq: Sequence, budget: int = VERIFY_SEARCH_BUDGET, workers: int = 1) -> list:
    """Every check `verify` runs, as a flat list of :class:`certificates.Check`."""
    Check = certs.Check
    n, K = seq.n, seq.K
    checks = []
    bad = invariant_failures(seq)
    checks.append(Check("sequence_invariants", not bad, "; ".join(bad[:5])))
    checks.extend(certs.check_schedule(seq).checks)
    for k in range(0, K + 1):
        for i in range(1, n + 1):
            try:
                certs.verify_reducedness(seq, i, k)
                checks.append(Check(f"reduced[i={i},k={k}]", True, f"denominator a_{n * k + i}"))
            except ArtifactError as exc:
                checks.append(Check(f"reduced[i={i},k={k}]", False, str(exc)))
    for k in range(1, K):
        try:
            cert = certs.lower_bound_certificate(seq, k)
            checks.append(Check(f"lower_bound[k={k}]", True, f"Q^n·lower = {float(cert.normalized):.9g}"))
        except ArtifactError as exc:
            checks.append(Check(f"lower_bound[k={k}]", False, str(exc)))
    for Q in certs.sample_heights(seq):
        try:
            w = build_witness(seq, Q)
        except ArtifactError as exc:
            checks.append(Check(f"witness[Q={Q}]", False, str(exc)))
            continue
        checks.append(certs.witness_bound_check(seq, w))
        if w.tag.case == 3:
            try:
                certs.integrality_checks(seq, w)
                checks.append(Check(f"integrality[Q={Q}]", True, f"k={w.tag.k}, e={w.tag.e}"))
            except ArtifactError as exc:
                checks.append(Check(f"integrality[Q={Q}]", False, str(exc)))
    heights = [seq.term(n)] + [seq.term(n * k + 1) - 1 for k in range(1, K)]
    for Q in heights:
        if (2 * Q + 1) ** n > budget:
            continue
        name = f"sandwich[Q={Q}]"
        try:
            ex = psi_star_exhaustive(seq, Q, budget=budget, workers=workers)
            en = psi_star_enclosure(seq, Q)
            ok = en.value.lo <= ex.value.lo and ex.value.hi <= en.value.hi
            detail = (f"exhaustive Q^n·psi in [{float(ex.normalized.lo):.9g}, {float(ex.normalized.hi):.9g}], "
                      f"certified [{float(en.normalized.lo):.9g}, {float(en.normalized.hi):.9g}]")
            checks.append(Check(name, ok, detail))
        except ArtifactError as exc:
            checks.append(Check(name, False, str(exc)))
    return checks


def cmd_verify(args) -> int:
    try:
        seq = load_sequence(args.seq, strict=False)
    except ArtifactError as exc:
        _emit(_dump({"pass": False, "checks": [{"name": "load", "pass": False, "detail": str(exc)}]}), args.out)
        return 1
    checks = verify_report(seq, budget=args.budget, workers=args.threads)
    ok = all(c.passed for c in checks)
    _emit(_dump({"pass": ok, "checks": [c.to_json() for c in checks]}), args.out)
    return 0 if ok else 1


def _exact_int(text: str) -> int:
    try:
        return parse_int(text)
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dirichlet-spectrum", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    def seq_arg(sp):
        sp.add_argument("--seq", required=True, help="sequence JSON file")

    sp = sub.add_parser("construct", help="build and save a sequence for a target constant c")
    sp.add_argument("--n", type=_exact_int, required=True)
    sp.add_argument("--c", required=True, help="target constant as p/q")
    sp.add_argument("--schedule", default="const:2", help="const:m | ramp:m0 | list:m1,m2,...")
    sp.add_argument("--depth", type=_exact_int, required=True, help="number of blocks K")
    out(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("phi-build", help="build a sequence driven by a target function phi")
    sp.add_argument("--n", type=_exact_int, required=True)
    sp.add_argument("--phi", required=True, help="power:A:s | powerlog:A:s:r")
    sp.add_argument("--schedule", default="const:2")
    sp.add_argument("--depth", type=_exact_int, required=True)
    out(sp)
    sp.set_defaults(func=cmd_phi_build)

    sp = sub.add_parser("witness", help="print the witness form at height Q")
    seq_arg(sp)
    sp.add_argument("--Q", required=True)
    out(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("psi", help="psi*(Q) by exhaustive search or certified enclosure")
    seq_arg(sp)
    sp.add_argument("--Q", required=True)
    sp.add_argument("--mode", choices=("exhaustive", "enclosure"), default="enclosure")
    sp.add_argument("--k", type=_exact_int, default=None, help="truncation level for exhaustive mode")
    sp.add_argument("--threads", type=_exact_int, default=1)
    sp.add_argument("--budget", type=_exact_int, default=DEFAULT_BUDGET)
    out(sp)
    sp.set_defaults(func=cmd_psi)

    sp = sub.add_parser("scan", help="normalized enclosures at the critical heights (CSV)")
    seq_arg(sp)
    sp.add_argument("--k-min", type=_exact_int, default=1)
    sp.add_argument("--k-max", type=_exact_int, required=True)
    sp.add_argument("--threads", type=_exact_int, default=1)
    out(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("verify", help="run every certificate and report pass/fail")
    seq_arg(sp)
    sp.add_argument("--threads", type=_exact_int, default=1)
    sp.add_argument("--budget", type=_exact_int, default=VERIFY_SEARCH_BUDGET,
                    help="largest exhaustive search used for sandwich checks")
    out(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("liouville", help="check psi*(a_{nk+1}) <= a_{nk+1}^-N for k <= k-max")
    seq_arg(sp)
    sp.add_argument("--N", type=_exact_int, required=True)
    sp.add_argument("--k-max", type=_exact_int, required=True)
    out(sp)
    sp.set_defaults(func=cmd_liouville)

    sp = sub.add_parser("phi-scan", help="ratio psi*/phi at the critical heights (CSV)")
    seq_arg(sp)
    sp.add_argument("--k-min", type=_exact_int, default=1)
    sp.add_argument("--k-max", type=_exact_int, required=True)
    out(sp)
    sp.set_defaults(func=cmd_phi_scan)

    sp = sub.add_parser("phi-check", help="heuristic admissibility report for phi")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--n", type=_exact_int, required=True)
    sp.add_argument("--samples", default="2,3,10,100,1000,1000000")
    out(sp)
    sp.set_defaults(func=cmd_phi_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArtifactError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
