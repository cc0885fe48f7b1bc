"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .certify import INCONCLUSIVE, PROVED, REFUTED, CertificateFileError, ProofReport, deserialize, serialize
from .expr import ExprError
from .hyper import HyperTermError
from .pricing import PriceTag
from .recurrence import IdentityError, RecurrenceError, prove_identity, sum_recurrence, verify_bundle
from .telescope import OrderBoundExceeded, TelescopeError
from . import qcorpus

EXIT = {PROVED: 0, REFUTED: 1, INCONCLUSIVE: 2}
INPUT_ERROR = 3

CORPUS = [
    ("5", "sum(k, 0, n, binomial(n, k)*a^k*b^(n - k)) = (a + b)^n", PROVED),
    ("6", "sum(k, -n, n, (-1)^k*binomial(2*n, n + k)^3) = product_form", PROVED),
    ("6 explicit", "sum(k, -n, n, (-1)^k*binomial(2*n, n + k)^3) = factorial(3*n)/factorial(n)^3", PROVED),
    ("6 as printed", "sum(k, -n, n, (-1)^k*binomial(2*n, n + k)^3) = binomial(3*n, n)", REFUTED),
]


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def exit_code(verdict: str) -> int:
    return EXIT[verdict]


def confidence_text(price: PriceTag) -> str:
    e = price.confidence_exponent
    if e is None:
        return "unpriced"
    if e == math.inf:
        return "2^-inf (proved)"
    return f"2^-{e}"


def price_text(price: PriceTag) -> str:
    c = price.cost.counters()
    counters = ", ".join(f"{k}={v}" for k, v in c.items())
    if price.confidence_exponent is None:
        return f"{price.rigor}; cost: {counters}"
    return f"{price.rigor}; error probability <= {confidence_text(price)}; cost: {counters}"


def _default_seed() -> int:
    raw = os.environ.get("WZ_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"WZ_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wzproof", description="Certificate-based proofs of hypergeometric identities.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pr = sub.add_parser("prove", help="prove an identity lhs = rhs")
    pr.add_argument("identity")
    pr.add_argument("--max-order", type=int, default=6)
    pr.add_argument("--mode", choices=["rigorous", "semi"], default="rigorous")
    pr.add_argument("--trials", type=int, default=20)
    pr.add_argument("--seed", type=int, default=None)
    pr.add_argument("--emit-cert", metavar="FILE")
    pr.add_argument("--json", action="store_true", dest="json_sub")

    vf = sub.add_parser("verify", help="re-check a certificate file")
    vf.add_argument("cert_file")
    vf.add_argument("--mode", choices=["rigorous", "prob"], default="rigorous")
    vf.add_argument("--trials", type=int, default=20)
    vf.add_argument("--seed", type=int, default=None)
    vf.add_argument("--json", action="store_true", dest="json_sub")

    rc = sub.add_parser("recurrence", help="find the minimal recurrence of a sum")
    rc.add_argument("sum_expr")
    rc.add_argument("--max-order", type=int, default=6)
    rc.add_argument("--json", action="store_true", dest="json_sub")

    qc = sub.add_parser("qcheck", help="check a q-identity")
    qc.add_argument("--identity", required=True, choices=["7", "8", "rr", "jacobi"])
    g = qc.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--order", type=int)
    qc.add_argument("--json", action="store_true", dest="json_sub")

    co = sub.add_parser("corpus", help="run the bundled identity suite")
    co.add_argument("--seed", type=int, default=None)
    co.add_argument("--json", action="store_true", dest="json_sub")
    return p


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))


def _report_lines(report: ProofReport) -> list[str]:
    d = report.details
    lines = []
    if "identity" in d:
        lines.append(f"identity:    {d['identity']}")
    lines.append(f"verdict:     {report.verdict}")
    if report.reason:
        lines.append(f"reason:      {report.reason}")
    if report.witness is not None:
        lines.append(f"witness:     {json.dumps(report.summary()['witness'])}")
    if "recurrence" in d:
        lines.append(f"recurrence:  {d['recurrence']}")
    if "closed_form" in d:
        lines.append(f"closed form: {d['closed_form']}")
    for i, c in enumerate(d.get("certificates", []), 1):
        lines.append(f"certificate {i}: R = {c}")
    if "check_range" in d:
        lines.append(f"initial values checked for {d.get('outer_var', 'n')} = 0..{d['check_range']}")
    lines.append(f"price:       {price_text(report.price)}")
    return lines


def cmd_prove(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    report = prove_identity(args.identity, mode=args.mode, L_max=args.max_order, trials=args.trials, seed=seed)
    _emit(args, report.summary(), _report_lines(report))
    if args.emit_cert:
        if report.bundle is None:
            print(f"no certificate written: verdict is {report.verdict}", file=sys.stderr)
        else:
            with open(args.emit_cert, "w", encoding="utf-8") as fh:
                fh.write(serialize(report.bundle))
    return exit_code(report.verdict)


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        with open(args.cert_file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(str(e)) from None
    bundle = deserialize(text)
    mode = "rigorous" if args.mode == "rigorous" else "prob"
    report = verify_bundle(bundle, mode, args.trials, seed)
    _emit(args, report.summary(), _report_lines(report))
    return exit_code(report.verdict)


def cmd_recurrence(args) -> int:
    try:
        rec, certs, ident = sum_recurrence(args.sum_expr, args.max_order)
    except OrderBoundExceeded as e:
        _emit(args, {"verdict": INCONCLUSIVE, "reason": str(e)}, [f"verdict: {INCONCLUSIVE}", f"reason: {e}"])
        return EXIT[INCONCLUSIVE]
    payload = {
        "order": rec.order,
        "coeffs": [str(c) for c in rec.coeffs],
        "recurrence": str(rec),
        "certificates": [str(c) for c in certs],
    }
    lines = [f"order:       {rec.order}", f"recurrence:  {rec}"]
    lines += [f"certificate {i}: R = {c}" for i, c in enumerate(certs, 1)]
    _emit(args, payload, lines)
    return 0


def cmd_qcheck(args) -> int:
    ident = args.identity
    if ident in ("7", "8"):
        if args.n is None:
            raise InputError(f"identity {ident} needs --n")
        if args.n < 0:
            raise InputError("--n must be >= 0")
        ok = qcorpus.check_identity7(args.n) if ident == "7" else qcorpus.check_identity8(args.n)
        payload = {"identity": ident, "n": args.n, "holds": ok}
        lines = [f"identity {ident} at n = {args.n}: {'holds' if ok else 'FAILS'}"]
    else:
        if args.order is None:
            raise InputError(f"identity {ident} needs --order")
        if args.order < 1:
            raise InputError("--order must be >= 1")
        check = qcorpus.check_rr_limit if ident == "rr" else qcorpus.check_jacobi_limit
        ok = check(args.order)
        coeffs = qcorpus.series_for(ident, args.order)
        payload = {"identity": ident, "order": args.order, "holds": ok, "coefficients": coeffs}
        lines = [f"{ident} limit to order {args.order}: {'holds' if ok else 'FAILS'}",
                 "coefficients: " + ", ".join(str(c) for c in coeffs)]
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_corpus(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rows = []
    all_ok = True
    for name, text, expected in CORPUS:
        for mode in ("rigorous", "semi"):
            r = prove_identity(text, mode=mode, seed=seed)
            ok = r.verdict == expected
            all_ok &= ok
            rows.append({"identity": name, "mode": mode, "verdict": r.verdict, "expected": expected,
                         "confidence": confidence_text(r.price), "cost": r.price.cost.counters()})
    q_rows = [
        ("7", "n <= 8", all(qcorpus.check_identity7(n) for n in range(9))),
        ("8", "n <= 8", all(qcorpus.check_identity8(n) for n in range(9))),
        ("rr", "order 30", qcorpus.check_rr_limit(30)),
        ("jacobi", "order 30", qcorpus.check_jacobi_limit(30)),
    ]
    for name, scope, ok in q_rows:
        all_ok &= ok
        rows.append({"identity": name, "mode": "exact", "verdict": "verified" if ok else "FAILED", "expected": "verified",
                     "confidence": "2^-inf (proved)" if ok else "-", "cost": None, "scope": scope})
    lines = [f"{'identity':<14}{'mode':<10}{'verdict':<14}{'expected':<14}{'confidence':<18}cost (mults/unknowns/peak)"]
    for row in rows:
        c = row["cost"]
        cost = f"{c['mults']}/{c['unknowns']}/{c['peak_terms']}" if c else row.get("scope", "")
        lines.append(f"{row['identity']:<14}{row['mode']:<10}{row['verdict']:<14}{row['expected']:<14}{row['confidence']:<18}{cost}")
    _emit(args, {"rows": rows, "all_as_expected": all_ok}, lines)
    return 0 if all_ok else 1


COMMANDS = {"prove": cmd_prove, "verify": cmd_verify, "recurrence": cmd_recurrence, "qcheck": cmd_qcheck,
            "corpus": cmd_corpus}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = args.json or getattr(args, "json_sub", False)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ExprError, IdentityError, CertificateFileError, HyperTermError, RecurrenceError,
            TelescopeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
