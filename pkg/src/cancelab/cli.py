"""Command line entry point.

    cancelab verify four-var --out cert.json
    cancelab verify rank-family --n 3
    cancelab verify char-p --p 2 --format text
    cancelab verify extension --n 3 --minpoly "x^3-2" --q x
    cancelab verify all --out certs/
    cancelab gb --ring "QQ[x,y,z,t]" --order grevlex --gens "x; y*z; z*t-1"
    cancelab syz --ring "QQ[x,y,z]" --matrix "x, y, z"
    cancelab nf --ring "QQ[x,y]" --gens "x^2; y" --poly "x^3 + y"

Exit codes: 0 success (all conclusion flags true), 1 verification failure,
2 usage, parse, resource or I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import signal
import sys
import tempfile
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .groebner import Ideal, ResourceLimitError, buchberger, ideal_member, normal_form, resource_limits
from .lab import Certificate, ExampleError, run_full_certificate
from .linalg import Matrix, syzygies
from .polyring import PolynomialRing, parse_ring

__all__ = ["main", "CliConfig", "write_certificate", "ALL_RUNS"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# the runs behind `verify all`
ALL_RUNS = [
    ("four_variable", {}),
    ("rank_family", {"n": 2}),
    ("rank_family", {"n": 3}),
    ("char_p", {"p": 2}),
    ("char_p", {"p": 3}),
    ("extension", {"n": 2}),
    ("extension", {"n": 3}),
]

_FAMILY = {"four-var": "four_variable", "rank-family": "rank_family",
           "char-p": "char_p", "extension": "extension"}


@dataclass
class CliConfig:
    command: str
    example: str | None = None
    field: str | None = None
    params: dict = dc_field(default_factory=dict)
    out: str | None = None
    fmt: str = "json"
    max_degree: int | None = None
    max_steps: int | None = None
    timeout_ms: int | None = None

    def __post_init__(self):
        for name in ("max_degree", "max_steps", "timeout_ms"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name.replace('_', '-')} must be positive")


class UsageError(Exception):
    pass


def write_certificate(cert: Certificate, path: str | os.PathLike, fmt: str = "json") -> None:
    """Serialize to ``path`` atomically (temporary file in the same directory, then rename)."""
    text = cert.to_json() if fmt == "json" else cert.to_text()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _summary(cert: Certificate) -> str:
    lines = []
    for s in cert.steps:
        line = f"  [{s.status:7}] {s.id} {s.desc}"
        if s.status == "fail":
            line += f"\n            -> {s.witness.get('error', '')}"
        lines.append(line)
    params = ", ".join(f"{k}={v}" for k, v in sorted(cert.params.items()))
    head = f"{cert.example}" + (f" ({params})" if params else "") + f" over {cert.field}"
    tail = (f"  stably_isomorphic={str(cert.stably_isomorphic).lower()} "
            f"obstruction_unsolvable={str(cert.obstruction_unsolvable).lower()}")
    return "\n".join([head] + lines + [tail])


@contextlib.contextmanager
def _deadline(ms: int | None):
    if not ms or not hasattr(signal, "setitimer"):
        yield
        return

    def handler(signum, frame):
        raise TimeoutError(f"timed out after {ms} ms")

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, ms / 1000)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cancelab",
                                description="Certify stably isomorphic, non-isomorphic reflexive module pairs.")
    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--max-degree", type=int, help="cap on S-polynomial degree")
    caps.add_argument("--max-steps", type=int, help="cap on Buchberger reductions (env CANCELAB_MAX_STEPS)")
    caps.add_argument("--timeout", type=int, help="wall-clock limit in milliseconds")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="build and verify a certificate")
    vsub = v.add_subparsers(dest="example", required=True)
    common = argparse.ArgumentParser(add_help=False, parents=[caps])
    common.add_argument("--field", help="field descriptor, e.g. QQ or GF(3)")
    common.add_argument("--out", help="certificate path (a directory for 'all')")
    common.add_argument("--format", dest="fmt", choices=["json", "text"], default="json")
    common.add_argument("--v1", help="override v1, entries separated by ';'")
    common.add_argument("--v2", help="override v2, entries separated by ';'")
    vsub.add_parser("four-var", parents=[common])
    rf = vsub.add_parser("rank-family", parents=[common])
    rf.add_argument("--n", type=int, default=2)
    cp = vsub.add_parser("char-p", parents=[common])
    cp.add_argument("--p", type=int, default=2)
    ex = vsub.add_parser("extension", parents=[common])
    ex.add_argument("--n", type=int, default=2)
    ex.add_argument("--minpoly", help='defaults to "x^n-2"')
    ex.add_argument("--q", help='defaults to "x"')
    vsub.add_parser("all", parents=[common])

    g = sub.add_parser("gb", parents=[caps], help="reduced Gröbner basis")
    g.add_argument("--ring", required=True)
    g.add_argument("--order", default="grevlex")
    g.add_argument("--gens", required=True, help="generators separated by ';'")

    s = sub.add_parser("syz", parents=[caps], help="syzygies of the columns of a matrix")
    s.add_argument("--ring", required=True)
    s.add_argument("--order", default="grevlex")
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--gens", help="a single row, entries separated by ';'")
    grp.add_argument("--matrix", help="rows separated by ';', entries by ','")

    n = sub.add_parser("nf", parents=[caps], help="normal form and membership")
    n.add_argument("--ring", required=True)
    n.add_argument("--order", default="grevlex")
    n.add_argument("--gens", required=True)
    n.add_argument("--poly", required=True)
    return p


def _split(text: str, sep: str = ";") -> list[str]:
    return [t.strip() for t in text.split(sep) if t.strip()]


def _ring(args) -> PolynomialRing:
    return parse_ring(args.ring, args.order)


def _cmd_gb(args) -> int:
    R = _ring(args)
    G = buchberger(Ideal(R, [R(g) for g in _split(args.gens)]))
    print("{" + ", ".join(str(g) for g in G.basis) + "}")
    return EXIT_OK


def _cmd_syz(args) -> int:
    R = _ring(args)
    if args.gens:
        rows = [_split(args.gens)]
    else:
        rows = [_split(row, ",") for row in _split(args.matrix)]
    if len({len(r) for r in rows}) != 1:
        raise UsageError("matrix rows have different lengths")
    A = Matrix(R, [[R(e) for e in r] for r in rows], len(rows), len(rows[0]))
    S = syzygies(A)
    if not (A * S).is_zero():  # pragma: no cover
        raise ArithmeticError("syzygy check failed")
    for j in range(S.ncols):
        print("(" + ", ".join(str(S[i, j]) for i in range(S.nrows)) + ")")
    return EXIT_OK


def _cmd_nf(args) -> int:
    R = _ring(args)
    I = Ideal(R, [R(g) for g in _split(args.gens)])
    f = R(args.poly)
    print(f"normal form: {normal_form(f, buchberger(I))}")
    ok, cof = ideal_member(f, I)
    print(f"member: {str(ok).lower()}")
    if ok:
        print("cofactors: " + "; ".join(str(c) for c in cof))
    return EXIT_OK


def _params(args) -> dict:
    params = {}
    for k in ("n", "p", "minpoly", "q", "v1", "v2"):
        v = getattr(args, k, None)
        if v is not None:
            params[k] = v
    return params


def _cmd_verify(args) -> int:
    fmt = args.fmt
    ext = "json" if fmt == "json" else "txt"
    if args.example == "all":
        if args.v1 or args.v2:
            raise UsageError("--v1/--v2 apply to a single family")
        runs = [(fam, dict(p)) for fam, p in ALL_RUNS]
    else:
        runs = [(_FAMILY[args.example], _params(args))]
    all_ok = True
    for fam, params in runs:
        cert = run_full_certificate(fam, params, args.field)
        print(_summary(cert))
        overridden = "v1" in params or "v2" in params
        if not overridden and [s.id for s in cert.failed_steps()] == ["B0"]:
            # bad family parameters are a usage error; a bad override pair is a finding
            raise UsageError(cert.steps[0].witness.get("error", "invalid example parameters"))
        if args.out:
            if args.example == "all":
                tag = "-".join([cert.example] + [f"{k}{v}" for k, v in sorted(params.items())])
                path = Path(args.out) / f"{tag}.{ext}"
            else:
                path = Path(args.out)
            write_certificate(cert, path, fmt)
        elif fmt == "text":
            sys.stdout.write(cert.to_text())
        all_ok = all_ok and cert.ok
    return EXIT_OK if all_ok else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        CliConfig(args.command, getattr(args, "example", None), getattr(args, "field", None),
                  out=getattr(args, "out", None), fmt=getattr(args, "fmt", "json"),
                  max_degree=args.max_degree, max_steps=args.max_steps, timeout_ms=args.timeout)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    handler = {"verify": _cmd_verify, "gb": _cmd_gb, "syz": _cmd_syz, "nf": _cmd_nf}[args.command]
    try:
        with resource_limits(args.max_steps, args.max_degree), _deadline(args.timeout):
            return handler(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
    except TimeoutError as exc:
        print(f"timeout: {exc}", file=sys.stderr)
    except (UsageError, ExampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
