"""``perideno`` command line: run verifiers, dump root data, inspect the
polynomial A of the thin proof."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import CutoffTooTight
from .lattice import format_coeff
from .roots import Borel, make_root_datum
from .verify import IDENTITIES, Strategy, Verdict, VerificationReport, run_identity
from .weyl import compute_A, j_value, regular_part, supp_A_violations

SELECTORS = IDENTITIES + ("all",)


@dataclass(frozen=True)
class RunConfig:
    identity: str
    ns: tuple[int, ...]
    strategy: str | None = None
    phi: tuple[int, ...] | None = None
    cutoff: int | None = None
    euler_bound: int | None = None
    fmt: str = "text"
    jobs: int = 1
    sign_convention: str = "derived"
    timing: bool = False

    def validate(self) -> None:
        if not self.ns or min(self.ns) < 1:
            raise ValueError("n must be >= 1")
        if self.cutoff is not None and self.cutoff < 1:
            raise ValueError("cutoff D must be >= 1")
        if self.identity in ("kac-euler", "all") and self.euler_bound is not None:
            D = self.cutoff if self.cutoff is not None else 1
            if self.euler_bound < D:
                raise ValueError(f"Euler bound M={self.euler_bound} must be >= D={D}")
        if self.phi is not None and any(len(self.phi) != n for n in self.ns):
            raise ValueError("--phi length must equal n (use a single n)")
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")


def parse_range(text: str) -> tuple[int, ...]:
    """``"3"`` or ``"a..b"`` (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return tuple(range(lo, hi + 1))
        return (int(text),)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None


def parse_phi(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("PERIDENO_THREADS", "1")))
    except ValueError:
        return 1


def _task(args):
    identity, n, cfg = args
    strategy = None
    if cfg.strategy == "exact":
        strategy = Strategy.exact()
    elif cfg.strategy == "series":
        strategy = Strategy.series(cfg.phi, cfg.cutoff)
    return run_identity(identity, n, strategy, cfg.cutoff, cfg.euler_bound, cfg.sign_convention, cfg.phi)


def run_reports(cfg: RunConfig) -> list[VerificationReport]:
    selectors = IDENTITIES if cfg.identity == "all" else (cfg.identity,)
    tasks = [(ident, n, cfg) for ident in selectors for n in cfg.ns]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            batches = list(pool.map(_task, tasks))
    else:
        batches = [_task(t) for t in tasks]
    return [r for batch in batches for r in batch]


def format_text(rep: VerificationReport, timing: bool = True) -> str:
    mark = {Verdict.VERIFIED: "✓", Verdict.REFUTED: "✗", Verdict.INAPPLICABLE: "-"}[rep.verdict]
    head = f"{mark} {rep.identity_id} n={rep.n} [{rep.strategy.kind}] {rep.verdict.value}"
    if timing:
        head += f" ({rep.wall_time * 1000:.1f} ms)"
    lines = [head]
    if rep.reason:
        lines.append(f"    {rep.reason}")
    for c in rep.checks:
        cm = "✓" if c.ok else ("✗" if c.verdict is Verdict.REFUTED else "-")
        lines.append(f"    {cm} {c.name}  lhs_terms={c.lhs_terms} rhs_terms={c.rhs_terms}")
        for w in c.witnesses[:3]:
            deg = f" deg={w.degree}" if w.degree is not None else ""
            lines.append(f"        at e{list(w.weight)}{deg}: lhs={format_coeff(w.lhs)} rhs={format_coeff(w.rhs)}")
    return "\n".join(lines)


def run(cfg: RunConfig, out=None) -> int:
    """Execute ``cfg``; returns the exit code (0 all verified, 1 any refuted)."""
    out = out or sys.stdout
    reports = run_reports(cfg)
    for rep in reports:
        if cfg.fmt == "json":
            out.write(json.dumps(rep.to_json(timing=cfg.timing), sort_keys=True, ensure_ascii=False) + "\n")
        else:
            out.write(format_text(rep, timing=True) + "\n")
    out.flush()
    if any(r.verdict is Verdict.REFUTED for r in reports):
        return 1
    return 0 if all(r.verdict is Verdict.VERIFIED for r in reports) else 1


def analyze_A(n: int) -> dict:
    A = compute_A(n)
    d = make_root_datum(n, Borel.THIN)
    reg = regular_part(A)
    orbit = {tuple(sorted(d.rho, reverse=True))}
    outside = sorted(w for w in reg.support() if tuple(sorted(w, reverse=True)) not in orbit)
    return {
        "n": n,
        "terms": len(A),
        "support_violations": [list(w) for w in supp_A_violations(n, A)],
        "regular_terms": len(reg),
        "regular_outside_W_rho": [list(w) for w in outside],
        "a_rho": format_coeff(A.coeff(d.rho)),
        "j": j_value(n, A),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perideno", description="Check denominator identities for p(n).")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity verifiers")
    v.add_argument("--identity", choices=SELECTORS, default="all")
    v.add_argument("--n", type=parse_range, default=(1, 2, 3, 4), help="N or A..B inclusive (default 1..4)")
    v.add_argument("--strategy", choices=("exact", "series"), default=None,
                   help="default: exact for thin-th1, series otherwise")
    v.add_argument("--phi", type=parse_phi, default=None, help="grading functional, e.g. -1,-2,-3")
    v.add_argument("--cutoff", type=int, default=None, help="series cutoff D")
    v.add_argument("--euler-bound", type=int, default=None, help="largest i_1 summed in kac-euler (M)")
    v.add_argument("--kac-sign-convention", choices=("derived", "all-plus"), default="derived")
    v.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
    v.add_argument("--jobs", type=int, default=None, help="worker processes (default $PERIDENO_THREADS or 1)")
    v.add_argument("--out", default=None, help="write the reports to FILE instead of stdout")
    v.add_argument("--timing", action="store_true", help="record wall_time_ms in JSON (off keeps output byte-stable)")

    d = sub.add_parser("dump-roots", help="print the root datum as JSON")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--borel", choices=[b.value for b in Borel], required=True)

    a = sub.add_parser("analyze-A", help="support and regular part of the polynomial A")
    a.add_argument("--n", type=int, required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "dump-roots":
        if args.n < 1:
            parser.error("n must be >= 1")
        print(json.dumps(make_root_datum(args.n, args.borel).to_json(), sort_keys=True))
        return 0
    if args.command == "analyze-A":
        if args.n < 2:
            parser.error("analyze-A needs n >= 2")
        info = analyze_A(args.n)
        print(json.dumps(info, sort_keys=True))
        return 0 if not info["support_violations"] and not info["regular_outside_W_rho"] else 1

    cfg = RunConfig(
        identity=args.identity,
        ns=args.n,
        strategy=args.strategy,
        phi=args.phi,
        cutoff=args.cutoff,
        euler_bound=args.euler_bound,
        fmt=args.fmt,
        jobs=args.jobs if args.jobs is not None else _default_jobs(),
        sign_convention=args.kac_sign_convention,
        timing=args.timing,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                return run(cfg, fh)
        return run(cfg)
    except (CutoffTooTight, ValueError) as exc:
        print(f"perideno: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
