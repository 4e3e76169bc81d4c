"""``ultraparadox`` command-line front end.

Every subcommand produces a JSON report with the top-level keys
``version``, ``config``, ``checks`` and ``summary``. Reports are
canonically ordered and carry no timings, so identical configurations give
byte-identical output whatever the worker count (``ULTRAPARADOX_WORKERS``).

Exit codes: 0 when no record failed or errored, 1 otherwise, 2 for usage
or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import __version__

WORKERS_ENV = "ULTRAPARADOX_WORKERS"
STATUSES = ("pass", "fail", "boundary-unchecked", "error")


class UsageError(Exception):
    """Bad flags, config entries or inputs; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would call sys.exit(2) itself
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


# --------------------------------------------------------------------------
# records and reports


def record(name: str, status: str, counts: dict | None = None, witnesses: Sequence = ()) -> dict:
    if status not in STATUSES:
        raise ValueError(status)
    return {"name": name, "status": status, "counts": dict(sorted((counts or {}).items())),
            "witnesses": [str(w) for w in witnesses]}


def make_report(config: dict, checks: list[dict]) -> dict:
    checks = sorted(checks, key=lambda r: r["name"])
    summary = {s: sum(r["status"] == s for r in checks) for s in STATUSES}
    summary["total"] = len(checks)
    summary["ok"] = summary["fail"] == 0 and summary["error"] == 0
    return {"version": __version__, "config": dict(sorted(config.items())),
            "checks": checks, "summary": summary}


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    lines = [f"ultraparadox {report['version']}"]
    for k, v in report["config"].items():
        lines.append(f"  {k} = {v}")
    for r in report["checks"]:
        counts = ", ".join(f"{k}={v}" for k, v in r["counts"].items())
        lines.append(f"{r['status'].upper():<19} {r['name']}  {counts}")
        for w in r["witnesses"][:5]:
            lines.append(f"    {w}")
    s = report["summary"]
    lines.append("summary: " + ", ".join(f"{k}={s[k]}" for k in (*STATUSES, "total"))
                 + (" -> OK" if s["ok"] else " -> FAILED"))
    return "\n".join(lines) + "\n"


def workers_from_env() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def run_tasks(fn: Callable, tasks: list, workers: int) -> list:
    """Map ``fn`` over ``tasks``; results keep task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


# --------------------------------------------------------------------------
# check workers (module level so that they pickle)

PAIR_SETS = {
    "magnus": ("magnus-0-1", "magnus-1-2"),
    "standard": ("magnus-0-1", "magnus-1-2", "rational", "integral", "transcendental-f2s"),
}


def named_pair(label: str):
    from fractions import Fraction as Fr

    from .matrices import Mat, magnus, transcendental_pair
    from .valued_fields import RationalFunctions, RationalsPadic, power

    q2 = RationalsPadic(2)
    if label == "magnus-0-1":
        return magnus(0, q2), magnus(1, q2)
    if label == "magnus-1-2":
        return magnus(1, q2), magnus(2, q2)
    if label == "rational":
        return (Mat(q2, [[2, Fr(1, 3)], [3, 1]]), Mat(q2, [[Fr(1, 2), 0], [5, 2]]))
    if label == "integral":
        return Mat(q2, [[3, 2], [1, 1]]), Mat(q2, [[1, -1], [-1, 2]])
    if label == "transcendental-f2s":
        A, B, _ = transcendental_pair(RationalFunctions(2, (0, 1)), power(2, 1))
        return A, B
    raise UsageError(f"unknown pair {label!r}")


def fricke_task(args) -> dict:
    label, maxlen = args
    from .trace_poly import Evaluator, phi
    from .words import _word, canonical_class

    A, B = named_pair(label)
    ev = Evaluator(A.trace(), B.trace(), (A @ B).trace())
    char = A.field.char
    gens = {"a": A, "A": A.inverse(), "b": B, "B": B.inverse()}
    # traces along a depth-first walk that reuses prefix products
    count, bad = 0, []
    stack = [("", None)]
    while stack:
        w, M = stack.pop()
        tr = M.trace() if M is not None else A.field(2)
        rhs = ev(phi(canonical_class(_word(w)), char))
        count += 1
        if tr != rhs:
            bad.append(f"{w or '1'}: trace {tr} but polynomial gives {rhs}")
        if len(w) < maxlen:
            last = {"a": "A", "A": "a", "b": "B", "B": "b"}.get(w[-1:], None)
            for c in "BbAa":
                if c != last:
                    stack.append((w + c, gens[c] if M is None else M @ gens[c]))
    return record(f"fricke[{label}]", "pass" if not bad else "fail",
                  {"words": count, "mismatches": len(bad)}, bad[:10])


def special_table_record() -> dict:
    from .trace_poly import phi
    from .words import Word, canonical_class

    expected = {
        "1": "2", "a": "X", "b": "Y", "ab": "Z", "Ab": "X*Y - Z",
        "aa": "X^2 - 2", "abAB": "-X*Y*Z + X^2 + Y^2 + Z^2 - 2",
        "abAb": "X*Y*Z - X^2 - Z^2 + 2",
    }
    bad = []
    for w, want in expected.items():
        got = str(phi(canonical_class(Word.parse(w))))
        if got != want:
            bad.append(f"{w}: got {got!r}, expected {want!r}")
    return record("special-classes", "pass" if not bad else "fail",
                  {"classes": len(expected), "mismatches": len(bad)}, bad)


def psi_task(args) -> dict:
    field_name, maxlen = args
    from .trace_poly import Evaluator, check_fgh, fgh_functions, psi_magnitude
    from .valued_fields import magnitude, parse_field
    from .words import conjugacy_classes

    fld = parse_field(field_name)
    q, f, g, h = fgh_functions(fld)
    check_fgh(f, g, h)
    ev = Evaluator(f, g, h)
    bad, n = [], 0
    for W in conjugacy_classes(maxlen):
        if W.is_identity:
            continue
        n += 1
        rep = psi_magnitude(W, f, g, h, ev, checked=True)
        if not rep.equal:
            bad.append(f"{W}: |psi| = {rep.actual}, predicted {rep.predicted}")
    vals = {"abs_f": str(magnitude(f)), "abs_h": str(magnitude(h))}
    return record(f"psi[{field_name}]", "pass" if not bad else "fail",
                  {"classes": n, "mismatches": len(bad), **vals}, bad[:10])


def fgh_values_record(field_name: str) -> dict:
    from .trace_poly import fgh_functions
    from .valued_fields import magnitude, parse_field, power

    fld = parse_field(field_name)
    _, f, _, h = fgh_functions(fld)
    ok = magnitude(f) == power(2, -1) and magnitude(h) == power(2, -2)
    return record(f"fgh-values[{field_name}]", "pass" if ok else "fail",
                  {"abs_f": str(magnitude(f)), "abs_h": str(magnitude(h))})


def isometry_task(args) -> dict:
    field_name, samples, seed = args
    from .matrices import isometry_audit
    from .sampling import audit_vectors, random_matrix
    from .valued_fields import parse_field

    fld = parse_field(field_name)
    rng = random.Random(f"{seed}:{field_name}")
    exceptions, isometries = [], 0
    for k in range(samples):
        n = rng.choice((2, 3))
        M = random_matrix(fld, n, rng)
        rep = isometry_audit(M, audit_vectors(fld, n, rng))
        isometries += rep.conditions[4]
        if not rep.consistent:
            exceptions.append(f"sample {k}: conditions {rep.conditions}")
    return record(f"isometry[{field_name}]", "pass" if not exceptions else "fail",
                  {"samples": samples, "isometries": isometries, "exceptions": len(exceptions)},
                  exceptions[:10])


def verify_cert_task(args) -> list[dict]:
    path, depth = args
    from .paradox import Certificate, verify_certificate

    try:
        cert = Certificate.loads(Path(path).read_text())
    except (OSError, ValueError, KeyError) as exc:
        return [record(f"{Path(path).name}:load", "error", {}, [exc])]
    rep = verify_certificate(cert, N=depth)
    prefix = Path(path).name
    return [record(f"{prefix}:{r.name}", r.status, r.counts, r.witnesses) for r in rep.records]


# --------------------------------------------------------------------------
# subcommands


def _field(name: str):
    from .valued_fields import FieldError, parse_field

    try:
        return parse_field(name)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify_traces(a, workers):
    if a.maxlen < 0:
        raise UsageError("--maxlen must be non-negative")
    labels = PAIR_SETS.get(a.pairs, None) or tuple(a.pairs.split(","))
    for l in labels:
        named_pair(l)
    checks = run_tasks(fricke_task, [(l, a.maxlen) for l in labels], workers)
    checks.append(special_table_record())
    return {"maxlen": a.maxlen, "pairs": list(labels)}, checks


def cmd_verify_psi(a, workers):
    if a.maxlen < 1:
        raise UsageError("--maxlen must be positive")
    names = {"both": ["f2s-q", "qs-q"], "char2": ["f2s-q"], "char0": ["qs-q"]}.get(a.setting)
    if names is None:
        raise UsageError(f"unknown setting {a.setting!r}")
    checks = run_tasks(psi_task, [(n, a.maxlen) for n in names], workers)
    checks += [fgh_values_record(n) for n in names]
    return {"maxlen": a.maxlen, "setting": a.setting}, checks


def cmd_freeness_audit(a, workers):
    from .kernels import BACKEND, trace_scan
    from .matrices import magnus, magnus_eps_pair
    from .valued_fields import RationalsPadic, power

    if a.maxlen < 0:
        raise UsageError("--maxlen must be non-negative")
    if a.pair == "magnus":
        A, B = magnus(a.i), magnus(a.i + 1)
        label = f"A{a.i},A{a.i + 1}"
    elif a.pair == "magnus-eps":
        if a.p is None or a.eps_exp is None:
            raise UsageError("--pair magnus-eps needs --p and --eps-exp")
        A, B, (m1, m2) = magnus_eps_pair(power(a.p, a.eps_exp), a.p, RationalsPadic(a.p))
        label = f"A{m1},A{m2}"
    else:
        raise UsageError(f"unknown pair {a.pair!r}")
    rows = [[int(x.value) for x in r] for r in A.rows], [[int(x.value) for x in r] for r in B.rows]
    backend = None if a.backend == "auto" else a.backend
    count, hits = trace_scan(*rows, a.maxlen, backend=backend)
    checks = [record(f"nonparabolic[{label}]", "pass" if not hits else "fail",
                     {"words": count, "parabolic": len(hits)}, hits[:10])]
    return {"maxlen": a.maxlen, "pair": label, "backend": a.backend,
            "available_backend": BACKEND}, checks


def cmd_isometry_check(a, workers):
    if a.samples < 1:
        raise UsageError("--samples must be positive")
    names = a.fields.split(",")
    for n in names:
        _field(n)
    checks = run_tasks(isometry_task, [(n, a.samples, a.seed) for n in names], workers)
    return {"fields": names, "samples": a.samples, "seed": a.seed}, checks


def cmd_cover_ball(a, workers):
    from .geometry import cover_ball, verify_cover
    from .valued_fields import FieldError

    fld = _field(a.field)
    if a.n < 1 or a.j < a.i:
        raise UsageError("need n >= 1 and j >= i")
    try:
        translates = cover_ball(a.i, a.j, a.n, fld)
    except FieldError as exc:
        raise UsageError(str(exc)) from None
    rep = verify_cover(translates, a.i, a.j, a.n, fld)
    listing = ["(" + ", ".join(str(x) for x in t) + ")" for t in translates]
    checks = [record("cover", "pass" if rep.ok else "fail",
                     {"translates": rep.count, "expected": rep.expected,
                      "grid_points": rep.grid_points, "inside": int(rep.inside),
                      "disjoint": int(rep.disjoint), "exhaustive": int(rep.exhaustive)},
                     listing)]
    return {"field": a.field, "n": a.n, "i": a.i, "j": a.j}, checks


def cmd_build(a, workers):
    from .paradox import StructuralError, build_certificate, check_structure, verify_certificate
    from .valued_fields import FieldError

    fld = _field(a.field)
    center = None
    if a.center:
        center = tuple(_parse_scalar(fld, c) for c in a.center.split(","))
    radii = [int(r) for r in a.radii.split(",")] if a.radii else None
    try:
        cert = build_certificate(a.target, fld, a.n, center=center, radius_exp=a.radius_exp,
                                 eps_exp=a.eps_exp, kind=a.kind, radii=radii)
    except (ValueError, FieldError, StructuralError) as exc:
        raise UsageError(str(exc)) from None
    out = Path(a.out or f"{cert.target}-{a.field}-n{a.n}.json")
    out.write_text(cert.dumps() + "\n")
    problems = check_structure(cert)
    checks = [record("build", "pass" if not problems else "error",
                     {"pieces": len(cert.pieces), "generators": len(cert.generators),
                      "seeds": len(cert.seeds)}, problems)]
    if a.depth is not None:
        rep = verify_certificate(cert, N=a.depth)
        checks += [record(f"verify:{r.name}", r.status, r.counts, r.witnesses) for r in rep.records]
    cfg = {"target": cert.target, "field": a.field, "n": a.n, "kind": a.kind,
           "radius_exp": a.radius_exp, "eps_exp": a.eps_exp, "out": str(out),
           "pieces": len(cert.pieces)}
    return cfg, checks


def _parse_scalar(fld, text: str):
    from fractions import Fraction

    try:
        return fld(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad coordinate {text!r}") from None


def cmd_verify(a, workers):
    if a.depth < 0:
        raise UsageError("--depth must be non-negative")
    for p in a.cert:
        if not Path(p).is_file():
            raise UsageError(f"no such certificate file: {p}")
    results = run_tasks(verify_cert_task, [(p, a.depth) for p in a.cert], workers)
    return {"certs": [Path(p).name for p in a.cert], "depth": a.depth}, \
        [r for rs in results for r in rs]


def cmd_report(a, workers):
    try:
        data = json.loads(Path(a.path).read_text())
        checks = data["checks"]
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read report {a.path}: {exc}") from None
    return data.get("config", {}), checks


COMMANDS = {
    "verify-traces": cmd_verify_traces,
    "verify-psi": cmd_verify_psi,
    "freeness-audit": cmd_freeness_audit,
    "isometry-check": cmd_isometry_check,
    "cover-ball": cmd_cover_ball,
    "build-decomposition": cmd_build,
    "verify-decomposition": cmd_verify,
    "report": cmd_report,
}

# subcommand -> {option dest: (type, default)}
OPTIONS: dict[str, dict[str, tuple]] = {
    "verify-traces": {"maxlen": (int, 8), "pairs": (str, "standard")},
    "verify-psi": {"maxlen": (int, 8), "setting": (str, "both")},
    "freeness-audit": {"maxlen": (int, 10), "pair": (str, "magnus"), "i": (int, 0),
                       "p": (int, None), "eps_exp": (int, None), "backend": (str, "auto")},
    "isometry-check": {"fields": (str, "q2,q3,f2s"), "samples": (int, 200), "seed": (int, 0)},
    "cover-ball": {"field": (str, "q2"), "n": (int, 2), "i": (int, 0), "j": (int, 1)},
    "build-decomposition": {"target": (str, None), "field": (str, "q2"), "n": (int, 2),
                            "center": (str, None), "radius_exp": (int, None),
                            "eps_exp": (int, 1), "kind": (str, "ball"), "radii": (str, None),
                            "out": (str, None), "depth": (int, None)},
    "verify-decomposition": {"depth": (int, 5)},
    "report": {},
}

_CHOICES = {"backend": ("auto", "cython", "python"),
            "kind": ("ball", "open-ball", "sphere")}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ultraparadox", description="Audits and paradoxical-decomposition "
                     "certificates over non-Archimedean fields.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value file; command-line flags win")
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
        for dest, (typ, _) in OPTIONS[name].items():
            kw = {"type": typ, "default": None, "dest": dest}
            if dest in _CHOICES:
                kw["choices"] = _CHOICES[dest]
            p.add_argument("--" + dest.replace("_", "-"), **kw)
        if name == "verify-decomposition":
            p.add_argument("--cert", nargs="+", required=True, help="certificate JSON file(s)")
        if name == "report":
            p.add_argument("path", help="JSON report to render")
    return parser


def read_config(path: str) -> dict[str, str]:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def resolve_options(args: argparse.Namespace) -> None:
    """Fill unset flags from the config file, then from defaults."""
    spec = OPTIONS[args.command]
    cfg = read_config(args.config) if args.config else {}
    for k in cfg:
        if k not in spec:
            raise UsageError(f"config key {k!r} is not an option of {args.command}")
    for dest, (typ, default) in spec.items():
        if getattr(args, dest) is not None:
            continue
        if dest in cfg:
            try:
                val = typ(cfg[dest])
            except ValueError:
                raise UsageError(f"config value for {dest!r} is not a valid {typ.__name__}") from None
            if dest in _CHOICES and val not in _CHOICES[dest]:
                raise UsageError(f"config value for {dest!r} must be one of {_CHOICES[dest]}")
            setattr(args, dest, val)
        else:
            setattr(args, dest, default)
    if args.command == "build-decomposition" and not args.target:
        raise UsageError("build-decomposition needs --target")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        resolve_options(args)
        workers = workers_from_env()
        config, checks = COMMANDS[args.command](args, workers)
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip() + "\n")
        return 2
    config = {"command": args.command, **config}
    report = make_report(config, checks)
    text = dumps_report(report) if args.format == "json" else render_text(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["ok"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
