"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 computation error, 3 invalid certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Sequence

from . import bounds, lpsolve, oracles
from .errors import (GenusBoundError, HypothesisViolated, InvalidCertificate, NoConstraint,
                     UnboundedSystem, VerificationInconclusive)
from .exactnum import QuadValue, RatInterval, rat, rat_to_str
from .places import LinearSystem, inequality_system
from .weil import (WeilClass, admissible_elliptic_traces, class_from_json, make_elliptic_class,
                   prime_power)

EXIT_OK, EXIT_USAGE, EXIT_COMPUTATION, EXIT_INVALID_CERT = 0, 1, 2, 3
METHODS = ("b1", "b2", "lemma", "lemma_custom", "lp", "ilp", "all")
DEFAULT_D_MAX = 30
# options whose values may start with "-" (negative traces)
LIST_OPTIONS = ("--traces", "--angles", "--T")
COMPUTATION_ERRORS = (UnboundedSystem, NoConstraint, HypothesisViolated,
                      VerificationInconclusive)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Input handling
# ---------------------------------------------------------------------------

def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"invalid {what} list: {text!r}") from None


def parse_rat_list(text: str, what: str) -> list[Fraction]:
    try:
        return [rat(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"invalid {what} list: {text!r}") from None


def parse_coeff(obj) -> Fraction | QuadValue:
    if isinstance(obj, dict):
        return QuadValue.from_json(obj)
    return rat(obj) if isinstance(obj, str) else Fraction(obj)


class Problem:
    """Resolved problem description; flags take precedence over the problem file."""

    def __init__(self, args: argparse.Namespace):
        spec = load_json(args.problem) if getattr(args, "problem", None) else {}
        if not isinstance(spec, dict):
            raise UsageError("problem file must contain a JSON object")
        if spec.get("format", 1) != 1:
            raise UsageError(f"unsupported problem format {spec.get('format')!r}")

        def pick(name, key=None, default=None):
            v = getattr(args, name, None)
            if v is not None:
                return v
            return spec.get(key or name, default)

        q = pick("q")
        if q is None:
            raise UsageError("field size q is required (--q or problem file)")
        self.q = int(q)
        prime_power(self.q)
        self.enforce = not (getattr(args, "no_admissibility_check", False)
                            or spec.get("no_admissibility_check", False))

        traces = getattr(args, "traces", None)
        classes_path = getattr(args, "classes", None)
        angles = getattr(args, "angles", None)
        self.classes: list[WeilClass] | None = None
        self.angles: list[Fraction] | None = None
        if traces is not None:
            self.classes = self._elliptic(parse_int_list(traces, "trace"))
        elif classes_path is not None:
            self.classes = self._from_class_json(load_json(classes_path))
        elif angles is not None:
            self.angles = parse_rat_list(angles, "angle")
        elif "traces" in spec:
            self.classes = self._elliptic([int(t) for t in spec["traces"]])
        elif "classes" in spec:
            self.classes = self._from_class_json(spec["classes"])
        elif "angles" in spec:
            self.angles = [rat(x) if isinstance(x, str) else Fraction(x) for x in spec["angles"]]
        if self.classes is not None and any(c.q != self.q for c in self.classes):
            from .errors import InconsistentFieldSize
            raise InconsistentFieldSize("inconsistent field size")

        D = pick("degree", "D", "auto")
        if D == "auto":
            self.D = None
        else:
            try:
                self.D = int(D)
            except (TypeError, ValueError):
                raise UsageError(f"degree must be a positive integer or 'auto', got {D!r}")
            if self.D < 1:
                raise UsageError("degree must be at least 1")
        self.method = pick("method", default="all")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        T = getattr(args, "T", None)
        if T is not None:
            self.T = parse_rat_list(T, "T coefficient")
        elif "T" in spec:
            self.T = [parse_coeff(x) for x in spec["T"]]
        else:
            self.T = None
        self.genus = pick("genus")
        self.json = bool(getattr(args, "json", False) or spec.get("output") == "json")
        self.approx = bool(getattr(args, "approx", False) or spec.get("approx", False))
        self.jobs = int(pick("jobs", default=1))
        self.d_max = int(pick("d_max", default=DEFAULT_D_MAX))

    def _elliptic(self, traces: Sequence[int]) -> list[WeilClass]:
        if not traces:
            raise UsageError("empty trace list")
        return [make_elliptic_class(self.q, t, self.enforce) for t in traces]

    def _from_class_json(self, obj) -> list[WeilClass]:
        if isinstance(obj, dict) and "classes" in obj:
            obj = obj["classes"]
        if not isinstance(obj, list) or not obj:
            raise UsageError("classes must be a nonempty JSON list")
        return [class_from_json(c, self.enforce) for c in obj]

    def angle_set(self) -> bounds.AngleSet:
        if self.classes is not None:
            return bounds.AngleSet.from_classes(self.classes)
        if self.angles is not None:
            return bounds.AngleSet.from_pi_fractions(self.q, self.angles)
        raise UsageError("no angle data: give --traces, --classes or --angles")

    def system(self) -> tuple[LinearSystem, lpsolve.LPResult]:
        if self.classes is None:
            raise UsageError("LP/ILP methods need classes (--traces or --classes)")
        if self.D is None:
            return lpsolve.auto_degree(
                lambda D: inequality_system(self.q, self.classes, D), self.d_max)
        sys_ = inequality_system(self.q, self.classes, self.D)
        return sys_, lpsolve.lp_maximize(sys_)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def approx_str(v) -> str:
    if isinstance(v, RatInterval):
        v = v.hi
    if isinstance(v, QuadValue):
        if v.is_rational:
            v = v.a
        else:
            v = v.enclosure(96).mid
    v = rat(v)
    with localcontext() as ctx:
        ctx.prec = 6
        return str(+(Decimal(v.numerator) / Decimal(v.denominator)))


def value_str(v, approx: bool) -> str:
    if approx:
        return approx_str(v)
    if isinstance(v, QuadValue) and not v.is_rational:
        return str(v)
    if isinstance(v, QuadValue):
        v = v.a
    return rat_to_str(v)


def report_line(rep: bounds.BoundReport, approx: bool) -> str:
    rel = "<" if rep.strict else "<="
    note = "" if rep.exact else " (rigorous upper approximation)"
    extra = f", D={rep.details['D']}" if "D" in rep.details else ""
    return (f"{rep.method}: g {rel} {value_str(rep.value, approx)}{note}{extra}"
            f" -> genus <= {rep.genus_cap}")


def emit(obj: dict, stream=None) -> None:
    stream = stream or sys.stdout
    json.dump(obj, stream, indent=2, ensure_ascii=False)
    stream.write("\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def lp_report(method: str, sys_: LinearSystem, res: lpsolve.LPResult) -> bounds.BoundReport:
    if res.status == lpsolve.UNBOUNDED:
        raise UnboundedSystem("increase D: system does not bound the genus")
    if method == "ilp":
        res = lpsolve.ilp_maximize(sys_)
    if res.status == lpsolve.INFEASIBLE:
        raise GenusBoundError("system is infeasible")
    details = {"D": sys_.D, "labels": list(sys_.labels),
               "primal": [rat_to_str(x) for x in res.primal],
               "dual": [rat_to_str(x) for x in res.dual]}
    if method == "ilp":
        details["nodes"] = res.nodes
    return bounds.BoundReport.make(method, res.value, False, **details)


def run_method(problem: Problem, method: str) -> bounds.BoundReport:
    if method in ("lp", "ilp"):
        sys_, res = problem.system()
        return lp_report(method, sys_, res)
    S = problem.angle_set()
    if method == "b1":
        if S.s == 0:
            raise NoConstraint("no constraint: empty angle set")
        return bounds.bound_b1(problem.q, S.s)
    if method == "b2":
        return bounds.theorem_bounds(S)[1]
    if method == "lemma":
        return bounds.lemma_bound_canonical(S)[0]
    if method == "lemma_custom":
        if problem.T is None:
            raise UsageError("lemma_custom needs T coefficients (--T or problem file)")
        return bounds.lemma_bound_custom(S, problem.T)
    raise UsageError(f"unknown method {method!r}")


def cmd_bound(args) -> int:
    problem = Problem(args)
    if problem.method != "all":
        rep = run_method(problem, problem.method)
        if problem.json:
            emit(rep.to_json())
        else:
            print(report_line(rep, problem.approx))
        return EXIT_OK
    methods = ["b1", "b2", "lemma"]
    if problem.T is not None:
        methods.append("lemma_custom")
    if problem.classes is not None:
        methods += ["lp", "ilp"]
    reports, failures = [], {}
    for m in methods:
        try:
            reports.append(run_method(problem, m))
        except COMPUTATION_ERRORS as exc:
            failures[m] = str(exc)
    if not reports:
        raise NoConstraint("no method produced a bound: " + "; ".join(failures.values()))
    best = min(reports, key=lambda r: r.genus_cap)
    if problem.json:
        emit({"format": 1, "method": "all", "genus_cap": best.genus_cap,
              "best_method": best.method, "reports": [r.to_json() for r in reports],
              "errors": failures})
    else:
        for r in reports:
            print(report_line(r, problem.approx))
        for m, msg in failures.items():
            print(f"{m}: not applicable ({msg})")
        print(f"best: genus <= {best.genus_cap} ({best.method})")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    problem = Problem(args)
    if problem.genus is None:
        raise UsageError("enumerate needs --genus")
    g = int(problem.genus)
    if g < 0:
        raise UsageError("genus must be nonnegative")
    sys_, _ = problem.system()
    decs = lpsolve.enumerate_decompositions(sys_, g, jobs=problem.jobs)
    if problem.json:
        emit({"format": 1, "q": problem.q, "labels": list(sys_.labels), "D": sys_.D,
              "genus": g, "decompositions": [{"e": list(d.e), "render": d.render()}
                                             for d in decs]})
    else:
        for d in decs:
            print(d.render())
    return EXIT_OK


def cmd_traces(args) -> int:
    q = args.q
    traces = oracles.weierstrass_traces(q) if args.brute_force else admissible_elliptic_traces(q)
    if args.json:
        emit({"format": 1, "q": q, "traces": traces,
              "source": "weierstrass" if args.brute_force else "classification"})
    else:
        print(" ".join(str(t) for t in traces))
    return EXIT_OK


def certificate_system(obj: dict) -> LinearSystem:
    if "system" in obj:
        try:
            return LinearSystem.from_json(obj["system"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidCertificate(f"malformed system: {exc}") from None
    if "problem" in obj:
        p = obj["problem"]
        q = int(p["q"])
        if "traces" in p:
            classes = [make_elliptic_class(q, int(t)) for t in p["traces"]]
        else:
            classes = [class_from_json(c) for c in p["classes"]]
        return inequality_system(q, classes, int(p["D"]))
    raise InvalidCertificate("certificate names no system (need 'system' or 'problem')")


def cmd_verify_cert(args) -> int:
    obj = load_json(args.file)
    if not isinstance(obj, dict) or "multipliers" not in obj:
        raise InvalidCertificate("certificate must be an object with 'multipliers'")
    if obj.get("format", 1) != 1:
        raise InvalidCertificate(f"unsupported certificate format {obj.get('format')!r}")
    sys_ = certificate_system(obj)
    try:
        y = [parse_coeff(x) for x in obj["multipliers"]]
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidCertificate("multipliers must be rationals") from None
    cert = lpsolve.verify_certificate(sys_, y)
    claims = {"combined": [rat_to_str(x) for x in cert.combined], "rhs": rat_to_str(cert.rhs),
              "scale": rat_to_str(cert.scale), "genus_cap": cert.genus_cap}
    for key, actual in claims.items():
        if key not in obj:
            continue
        claimed = obj[key]
        if key == "genus_cap":
            ok = int(claimed) == actual
        elif key == "combined":
            ok = [rat(str(x)) for x in claimed] == list(cert.combined)
        else:
            ok = rat(str(claimed)) == rat(actual)
        if not ok:
            raise InvalidCertificate(f"claimed {key} {claimed!r} does not match {actual!r}")
    if args.json:
        out = cert.to_json()
        out["valid"] = True
        emit(out)
    else:
        print(f"valid, genus ≤ {cert.genus_cap}")
    return EXIT_OK


def cmd_x0_filter(args) -> int:
    n = bounds.x0_level_filter(args.genus)
    if args.json:
        emit({"format": 1, "genus": args.genus, "max_level": n})
    else:
        print(n)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_all

    only = set(parse_int_list(args.only, "criterion")) if args.only else None
    checks = run_all(only)
    if args.json:
        emit({"format": 1, "checks": [{"number": c.number, "name": c.name, "passed": c.passed,
                                       "detail": c.detail, "seconds": round(c.seconds, 3)}
                                      for c in checks]})
    else:
        for c in checks:
            print(c.line())
        print(f"{sum(c.passed for c in checks)}/{len(checks)} passed")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_COMPUTATION


# ---------------------------------------------------------------------------

def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="field size (a prime power)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--traces", help="comma-separated elliptic traces, e.g. -2,-1,0,1,2")
    src.add_argument("--classes", metavar="FILE", help="JSON list of Weil classes")
    src.add_argument("--angles", help="comma-separated angles as rational multiples of pi")
    p.add_argument("--problem", metavar="FILE", help="problem description JSON")
    p.add_argument("--degree", help="number of place-count rows D, or 'auto'")
    p.add_argument("--d-max", type=int, dest="d_max", help="largest D tried by 'auto'")
    p.add_argument("--no-admissibility-check", action="store_true",
                   help="accept traces that are not realized by elliptic curves")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genusbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="genus bound by one method or all of them")
    _add_problem_args(p)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--T", help="comma-separated coefficients a_1..a_n for lemma_custom")
    p.add_argument("--approx", action="store_true", help="decimal output (6 digits)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("enumerate", help="feasible decompositions at a fixed genus")
    _add_problem_args(p)
    p.add_argument("--genus", type=int)
    p.add_argument("--jobs", type=int, help="worker processes")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("traces", help="traces of elliptic curves over F_q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--brute-force", action="store_true",
                   help="count points on every Weierstrass equation instead")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("verify-cert", help="check a dual certificate file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("x0-filter", help="largest level N allowed by a genus bound G")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_x0_filter)

    p = sub.add_parser("reproduce-paper", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _join_list_options(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for a in it:
        if a in LIST_OPTIONS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_list_options(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidCertificate as exc:
        print(f"invalid certificate: {exc}", file=sys.stderr)
        return EXIT_INVALID_CERT
    except COMPUTATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except GenusBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
