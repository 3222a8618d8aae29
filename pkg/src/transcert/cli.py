"""Command-line front end: one subcommand per process, one JSON report per run.

Exit codes: 0 when every check passes, 1 on a certified violation, 2 when a
question stays undetermined after precision escalation, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from . import __version__
from .numerics import DEFAULT_PREC, MAX_PREC, CertificationError, decimal_string

SCHEMA_VERSION = 1
CONFIG_ENV = "TRANSCERT_CONFIG"

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_UNDETERMINED = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision_bits: int = DEFAULT_PREC
    sieve_limit: int = 100_000
    expand_trunc: int = 500
    aux_trunc: int | None = None
    constants_path: str | None = None
    output_path: str | None = None

    def validate(self) -> "RunConfig":
        if not isinstance(self.precision_bits, int) or not 16 <= self.precision_bits <= MAX_PREC:
            raise UsageError(f"precision_bits must be an integer in [16, {MAX_PREC}]")
        if not isinstance(self.sieve_limit, int) or self.sieve_limit < 100:
            raise UsageError("sieve_limit must be an integer >= 100")
        if not isinstance(self.expand_trunc, int) or self.expand_trunc < 1:
            raise UsageError("expand_trunc must be a positive integer")
        if self.aux_trunc is not None and (not isinstance(self.aux_trunc, int) or self.aux_trunc < 1):
            raise UsageError("aux_trunc must be a positive integer or null")
        for name in ("constants_path", "output_path"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                raise UsageError(f"{name} must be a string or null")
        return self

    def dumps(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**raw).validate()

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls().validate()
        try:
            return cls.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- argument parsing helpers -----------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal or rational number: {text!r}") from None


def _nome(text: str):
    """A real ``0.5`` / ``1/3`` or a complex ``0.3+0.2j``, kept exact."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        z = complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real or complex number: {text!r}") from None
    return (Fraction(repr(z.real)), Fraction(repr(z.imag)))


def _residue(text: str) -> tuple[int, int]:
    try:
        a, d = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("residue must be 'a,d'") from None
    if d < 1:
        raise argparse.ArgumentTypeError("modulus must be positive")
    return a, d


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="transcert", description="Certified checks of the transcendence-proof ingredients.")
    p.add_argument("--config", help=f"RunConfig JSON file (default: ${CONFIG_ENV})")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.add_argument("--prec", type=_positive, help="working precision in bits")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("expand", help="exact q-expansion of delta, j or e4")
    s.add_argument("--form", choices=("delta", "j", "e4"), required=True)
    s.add_argument("--trunc", type=_positive)
    s.add_argument("--out", required=True)

    s = sub.add_parser("certify-hecke", help="check |c(k)| <= C1^N k^(12N) for Delta^(2N) J^l")
    s.add_argument("--N", type=_positive, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--trunc", type=_positive, default=200)

    s = sub.add_parser("build-aux", help="build the auxiliary polynomial A and the series of F")
    s.add_argument("--N", type=_positive, required=True)
    s.add_argument("--trunc", type=_positive)
    s.add_argument("--out", required=True)
    s.add_argument("--samples", type=int, default=0, help="certify the upper bound at this many disk points")
    s.add_argument("--q-abs", type=_fraction, default=Fraction(1, 2), help="|q| fixing the disk radius")

    s = sub.add_parser("scan-primes", help="first prime P with F(q^P) certified nonzero")
    s.add_argument("--q", type=_nome, required=True)
    s.add_argument("--pmax", type=_positive, required=True)
    s.add_argument("--residue", type=_residue)
    s.add_argument("--N", type=_positive, default=4)

    s = sub.add_parser("height", help="Mahler measure and Weil height of an algebraic number")
    s.add_argument("--minpoly", required=True, help='coefficients "c0,c1,..." in increasing degree')
    s.add_argument("--root", type=int, default=0, help="index of the conjugate used for |a|")

    s = sub.add_parser("modpoly", help="classical modular polynomials")
    s.add_argument("--p", type=_positive, required=True)
    s.add_argument("--compute", action="store_true", help="list the coefficients")
    s.add_argument("--verify", action="store_true", help="check the q-expansion identity")
    s.add_argument("--certify", action="store_true", help="certify the coefficient height bounds")
    s.add_argument("--K", type=_positive, default=30, help="truncation of the identity check")
    s.add_argument("--out", help="write the polynomial in 'a b c' format")
    s.add_argument("--in", dest="infile", help="read the polynomial from this file")

    s = sub.add_parser("primes", help="prime tables and prime-sum inequalities")
    psub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = psub.add_parser("certify")
    c.add_argument("--limit", type=_positive)
    c.add_argument("--residue", type=_residue)

    s = sub.add_parser("chain", help="the constant ledger and the contradiction chain")
    csub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = csub.add_parser("run")
    c.add_argument("--q", type=_nome, help="the nome (analytic mode)")
    c.add_argument("--q-abs", type=_fraction, help="|q| alone (hypothetical mode, needs --P)")
    c.add_argument("--N", type=_positive, required=True)
    c.add_argument("--P", type=_positive)
    c.add_argument("--deg-q", type=_positive, default=1)
    c.add_argument("--h-q", type=_fraction, default=Fraction(69, 100))
    c.add_argument("--deg-j", type=_positive, default=1)
    c.add_argument("--h-j", type=_fraction, default=Fraction(0))
    c.add_argument("--constants", help="JSON file of user-configured constants")
    c = csub.add_parser("cutoff")
    c.add_argument("--deg-q", type=_positive, required=True)
    c.add_argument("--N", type=_positive, required=True)
    c.add_argument("--floor", type=_positive, default=2)
    c = csub.add_parser("threshold")
    c.add_argument("--c18", type=_fraction, required=True)
    c = csub.add_parser("min-n")
    c.add_argument("--q-abs", type=_fraction, required=True)
    return p


# -- subcommands -----------------------------------------------------------------------


def _status(ok: bool) -> str:
    return "pass" if ok else "violation"


def cmd_expand(args, cfg: RunConfig):
    from .qseries import delta_expansion, e4_expansion, j_expansion, write_series

    K = args.trunc or cfg.expand_trunc
    build = {"delta": delta_expansion, "j": j_expansion, "e4": e4_expansion}[args.form]
    s = build(K)
    write_series(s, args.out)
    head = [str(s[k]) for k in range(s.valuation, min(s.valuation + 5, s.trunc))]
    return {"form": args.form, "valuation": s.valuation, "trunc": s.trunc, "first_coefficients": head, "path": args.out}, "pass"


def cmd_certify_hecke(args, cfg: RunConfig):
    from .modforms import certify_hecke, cusp_coeffs, stored_hecke_constant

    if not 0 <= args.l <= args.N:
        raise UsageError("need 0 <= l <= N")
    rep = certify_hecke(cusp_coeffs(args.N, args.l, args.trunc), stored_hecke_constant().c1)
    return rep.to_dict(), _status(rep.passed)


def cmd_build_aux(args, cfg: RunConfig):
    from .auxfn import build_auxiliary, check_upper_bound, sample_disk

    f = build_auxiliary(args.N, args.trunc or cfg.aux_trunc)
    s = f.series
    result = f.to_dict()
    result["series"] = {"valuation": s.valuation, "trunc": s.trunc, "coefficients": [str(c) for c in s.coeffs]}
    ok = f.dual_assembly_agrees and f.length_bound_holds
    if args.samples > 0:
        if not 0 < args.q_abs < 1:
            raise UsageError("--q-abs must lie in (0, 1)")
        radius = (1 + args.q_abs) / 2 - Fraction(1, 20)
        reports = [check_upper_bound(f, z, radius=(1 + args.q_abs) / 2, prec=cfg.precision_bits) for z in sample_disk(radius, args.samples)]
        passed = sum(r.passed for r in reports)
        result["upper_bound"] = {"radius": str(radius), "samples": len(reports), "passed": passed}
        ok = ok and passed == len(reports)
    Path(args.out).write_text(json.dumps(result, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    summary = {k: result[k] for k in ("N", "L", "M", "d0", "trunc", "length", "dual_assembly_agrees", "length_bound_holds")}
    summary["path"] = args.out
    if "upper_bound" in result:
        summary["upper_bound"] = result["upper_bound"]
    return summary, _status(ok)


def cmd_scan_primes(args, cfg: RunConfig):
    from .auxfn import PrimeScanExhaustedError, build_auxiliary, first_good_prime

    f = build_auxiliary(args.N, cfg.aux_trunc)
    try:
        good = first_good_prime(args.q, f, args.pmax, args.residue, cfg.precision_bits)
    except PrimeScanExhaustedError as exc:
        return {"N": args.N, "pmax": args.pmax, "found": False, "uncertain": [{"p": p, "radius": r} for p, r in exc.uncertain]}, "undetermined"
    d = good.to_dict()
    d.update({"N": args.N, "M": f.M, "pmax": args.pmax, "found": True})
    return d, "pass"


def cmd_height(args, cfg: RunConfig):
    from .heights import AlgebraicNumber, height_measures, liouville_check, parse_minpoly, report_dict

    a = AlgebraicNumber.from_minpoly(parse_minpoly(args.minpoly), index=args.root)
    hm = height_measures(a, cfg.precision_bits).to_dict()
    if not a.is_zero:
        lv = liouville_check(a, cfg.precision_bits)
        hm["liouville"] = report_dict(lv)
        ok = all(s.holds for s in lv.steps)
    else:
        ok = True
    hm["minpoly"] = list(a.minpoly)
    return hm, _status(ok)


def cmd_modpoly(args, cfg: RunConfig):
    from .modpoly import ModularPolynomial, certify_phi_height, compute_phi_p, verify_phi_identity

    if not (args.compute or args.verify or args.certify):
        raise UsageError("choose at least one of --compute, --verify, --certify")
    phi = ModularPolynomial.read(args.infile) if args.infile else compute_phi_p(args.p)
    if phi.level != args.p:
        raise UsageError(f"file holds level {phi.level}, not {args.p}")
    if args.out:
        phi.write(args.out)
    result = {"level": phi.level, "degree": phi.degree_x, "symmetric": phi.is_symmetric, "height": str(phi.height)}
    ok = phi.is_symmetric
    if args.compute:
        result["terms"] = phi.to_dict()["terms"]
    if args.verify:
        rep = verify_phi_identity(phi, args.K)
        result["identity"] = rep.to_dict()
        ok = ok and rep.passed
    if args.certify:
        rep = certify_phi_height(phi, cfg.precision_bits)
        result["height_bounds"] = rep.to_dict()
        ok = ok and rep.passed
        if any(s.status == "undetermined" for s in rep.bounds.steps):
            return result, "undetermined"
    return result, _status(ok)


def cmd_primes(args, cfg: RunConfig):
    from .primes import certify_prime_bounds

    rep = certify_prime_bounds(args.limit or cfg.sieve_limit, args.residue)
    return rep.to_dict(), _status(not rep.claim_violated)


def cmd_chain(args, cfg: RunConfig):
    from . import chain

    if args.action == "cutoff":
        return chain.algebraic_cutoff(args.deg_q, args.N, args.floor).to_dict(), "pass"
    if args.action == "threshold":
        if args.c18 <= 0:
            raise UsageError("--c18 must be positive")
        return {"c18": str(args.c18), "threshold_M": chain.contradiction_threshold(args.c18)}, "pass"
    if args.action == "min-n":
        if not 0 < args.q_abs < 1:
            raise UsageError("--q-abs must lie in (0, 1)")
        return {"q_abs": str(args.q_abs), "min_N": chain.min_N_for_radius(args.q_abs)}, "pass"

    if args.q is None and (args.q_abs is None or args.P is None):
        raise UsageError("chain run needs --q, or --q-abs together with --P")
    if args.N < 2:
        raise UsageError("--N must be at least 2")
    try:
        user = chain.load_user_constants(args.constants or cfg.constants_path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load constants: {exc}") from None
    inst = chain.build_instance(
        args.N, q=args.q, q_abs=args.q_abs, P=args.P, deg_q=args.deg_q, h_q=args.h_q,
        deg_Jq=args.deg_j, h_Jq=args.h_j, prec=cfg.precision_bits,
    )
    try:
        run = chain.run_chain(inst, user, prime_limit=cfg.sieve_limit)
    except chain.MissingConstantError as exc:
        raise UsageError(str(exc)) from None
    result = run.to_dict()
    if not run.determinate:
        return result, "undetermined"
    return result, _status(not run.violations)


COMMANDS = {
    "expand": cmd_expand,
    "certify-hecke": cmd_certify_hecke,
    "build-aux": cmd_build_aux,
    "scan-primes": cmd_scan_primes,
    "height": cmd_height,
    "modpoly": cmd_modpoly,
    "primes": cmd_primes,
    "chain": cmd_chain,
}

EXIT_FOR = {"pass": EXIT_PASS, "violation": EXIT_VIOLATION, "undetermined": EXIT_UNDETERMINED}


def _provenance(cfg: RunConfig, result: dict) -> dict:
    from .modforms import hecke_constant_to_dict, stored_hecke_constant

    prov = {
        "package_version": __version__,
        "precision_bits": cfg.precision_bits,
        "hecke_constant": hecke_constant_to_dict(stored_hecke_constant()),
    }
    if "ledger" in result:
        prov["constant_ledger"] = result["ledger"]
    else:
        from .chain import load_user_constants

        try:
            user = load_user_constants(cfg.constants_path)
            prov["user_constants"] = {k: str(v) for k, v in sorted(user.items())}
        except (OSError, ValueError, KeyError):
            prov["user_constants"] = None
    prov["c1"] = decimal_string(stored_hecke_constant().c1)
    return prov


def render_report(command: str, result: dict, status: str, cfg: RunConfig) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "provenance": _provenance(cfg, result),
        "result": result,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.load(args.config)
        if args.prec is not None:
            cfg.precision_bits = args.prec
        if args.output is not None:
            cfg.output_path = args.output
        cfg.validate()
        name = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
        result, status = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"transcert: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as exc:
        print(f"transcert: undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (ValueError, KeyError) as exc:
        print(f"transcert: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_report(name, result, status, cfg)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_FOR[status]


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
