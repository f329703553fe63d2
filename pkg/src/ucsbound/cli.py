"""Command-line front end.

Every subcommand prints a short human summary to stdout and can write a
JSON report with ``--out`` (``--out -`` streams the JSON to stdout).
When a report is written to a file, a run manifest goes next to it as
``<out>.manifest.json``.  Reports are written atomically: a temp file in
the target directory is renamed into place, so readers never observe a
half-written JSON.

Exit codes: 0 on success, 1 when the requested check or search failed
on the merits (a verification mismatch, a bisection bracket that does
not straddle, an entropy violation), 2 on bad input.

``--no-timestamps`` strips wall-clock fields from reports and manifests
so that identical invocations produce byte-identical files; the test
suite relies on this.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone

from . import __version__
from .errors import BracketFailure, RankDeficient, UcsBoundError, VerificationFailed
from .maxcorr import JointDist, binary_coupling, correlation_spectrum, maximal_correlation, pearson
from .optimizer import (
    SearchConfig,
    find_tmax,
    gamma_hat,
    verify_reference_point,
)
from .ucslab import (
    coupling_entropies,
    element_frequencies,
    enumerate_or_closed,
    sample_or_closed,
)

SCHEMA_VERSION = 1

__all__ = ["main", "build_parser", "RunManifest", "SCHEMA_VERSION"]


@dataclass(frozen=True)
class RunManifest:
    """What ran, with what, and what it wrote."""

    subcommand: str
    parameters: dict
    tool_version: str
    schema_version: int
    started_at: str | None
    finished_at: str | None
    outputs: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "schema_version": self.schema_version,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "outputs": list(self.outputs),
        }


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ucsbound-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _manifest_params(args: argparse.Namespace) -> dict:
    out = {}
    for key, value in vars(args).items():
        if key in ("func", "subcommand"):
            continue
        if isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def _emit(
    args: argparse.Namespace,
    payload: dict,
    started_at: str | None,
    extra_outputs: tuple[str, ...] = (),
) -> None:
    """Write the report (and manifest, when going to a file)."""
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    if args.no_timestamps:
        payload.pop("wall_time_ms", None)
    text = _dump_json(payload)
    if args.out is None:
        return
    if args.out == "-":
        sys.stdout.write(text)
        return
    _atomic_write_text(args.out, text)
    manifest = RunManifest(
        subcommand=args.subcommand,
        parameters=_manifest_params(args),
        tool_version=__version__,
        schema_version=SCHEMA_VERSION,
        started_at=started_at,
        finished_at=None if args.no_timestamps else _utcnow(),
        outputs=(args.out,) + extra_outputs,
    )
    _atomic_write_text(args.out + ".manifest.json", _dump_json(manifest.to_json_dict()))


def _search_config(args: argparse.Namespace) -> SearchConfig:
    kwargs = {}
    if getattr(args, "grid", None) is not None:
        kwargs["grid_points_per_axis"] = args.grid
    if getattr(args, "refine_rounds", None) is not None:
        kwargs["refine_rounds"] = args.refine_rounds
    if getattr(args, "multistart", None) is not None:
        kwargs["multistart_count"] = args.multistart
    if getattr(args, "pin_b2", False):
        kwargs["b2_pinned_to_one"] = True
    return SearchConfig(**kwargs)


def _parse_alpha(raw: str):
    if raw == "auto":
        return "auto"
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f'--alpha must be "auto" or a number, got {raw!r}') from None


# -- subcommands -----------------------------------------------------------


def cmd_gamma_hat(args: argparse.Namespace) -> int:
    started = None if args.no_timestamps else _utcnow()
    cert = gamma_hat(args.t, _parse_alpha(args.alpha), _search_config(args))
    verdict = "certifies" if cert.certifies else "does not certify"
    print(
        f"t={cert.t}: bound {cert.gamma_hat_lower:.10f} at alpha={cert.alpha_star:.6f} "
        f"({cert.branch}, {cert.evaluations} evaluations) -> {verdict} t"
    )
    _emit(args, cert.to_json_dict(), started)
    return 0


def cmd_tmax(args: argparse.Namespace) -> int:
    started = None if args.no_timestamps else _utcnow()
    result = find_tmax(
        _search_config(args),
        margin=args.margin,
        bracket=tuple(args.bracket),
        t_tol=args.t_tol,
        alphas=_parse_alpha(args.alpha),
    )
    print(
        f"largest certified t: {result.t_certified:.7f} "
        f"(ceiling {result.t_ceiling:.7f}, margin {result.margin}, {result.steps} steps)"
    )
    payload = result.to_json_dict()
    if args.no_timestamps:
        payload["certificate"].pop("wall_time_ms", None)
    _emit(args, payload, started)
    return 0


def cmd_verify_paper(args: argparse.Namespace) -> int:
    started = None if args.no_timestamps else _utcnow()
    config = None
    if args.grid is not None or args.refine_rounds is not None or args.multistart is not None:
        config = _search_config(args)
    cert = verify_reference_point(config=config, strict=args.strict)
    fam = cert.argmin
    print(f"reference evaluation reproduced (strict={args.strict}):")
    print(f"  min_ratio {cert.gamma_hat_lower:.10f}  (published 1.00000889)")
    print(f"  argmin a1={fam.a1:.7f} a2={fam.a2:.7f} b1={fam.b1:.7f} b2={fam.b2:.7f}")
    print(f"  beta {fam.beta:.7f}  (published 0.1560676)")
    _emit(args, cert.to_json_dict(), started)
    return 0


def _family_rows(families, check_entropy: bool, size_cap: int, iterations: int):
    """CSV rows plus the per-family entropy results (None when skipped)."""
    eligible = [f for f in families if check_entropy and 2 <= f.size <= size_cap]
    stars = dict(zip((f.mask for f in eligible), coupling_entropies(eligible, iterations)))
    rows = []
    for fam in families:
        freqs = element_frequencies(fam)
        h_x = math.log2(fam.size)
        h_star = stars.get(fam.mask)
        ratio = (h_star / h_x) if (h_star is not None and h_x > 0) else None
        rows.append(
            {
                "n": fam.n,
                "size": fam.size,
                "mask": fam.hex_mask,
                "p_A": float(freqs.max()),
                "freqs": ";".join(repr(float(v)) for v in freqs),
                "H_X": h_x,
                "H_star": h_star,
                "ratio": ratio,
            }
        )
    return rows, stars


def cmd_enumerate(args: argparse.Namespace) -> int:
    started = None if args.no_timestamps else _utcnow()
    if args.sample is not None:
        families = sample_or_closed(args.n, args.sample, args.seed)
        sampled = True
    else:
        families = list(enumerate_or_closed(args.n))
        sampled = False

    rows, stars = _family_rows(families, args.check_entropy, args.size_cap, args.iterations)

    if args.csv is not None:
        fieldnames = ["n", "size", "mask", "p_A", "freqs", "H_X", "H_star", "ratio"]
        sink = io.StringIO()
        writer = csv.DictWriter(sink, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
        _atomic_write_text(args.csv, sink.getvalue())

    # The {empty set} family says nothing about element frequencies.
    eligible = [(row, fam) for row, fam in zip(rows, families) if fam.mask != 1]
    if eligible:
        min_row, min_fam = min(eligible, key=lambda rf: (rf[0]["p_A"], rf[1].mask))
        min_pa, witness = min_row["p_A"], min_fam.hex_mask
    else:
        min_pa, witness = None, None

    violations = []
    for row, fam in zip(rows, families):
        h_star = stars.get(fam.mask)
        if h_star is not None and h_star > row["H_X"] + args.tol:
            violations.append(
                f"{fam.hex_mask}: H_star={h_star!r} exceeds log2|A|={row['H_X']!r}"
            )

    payload: dict = {
        "n": args.n,
        "family_count": len(families),
        "sampled": sampled,
        "min_pA": min_pa,
        "witness_mask": witness,
        "violations": violations,
    }
    if args.check_entropy:
        checked = [r["ratio"] for r in rows if r["ratio"] is not None]
        payload["entropy_check"] = {
            "tol": args.tol,
            "size_cap": args.size_cap,
            "checked": len(checked),
            "skipped": len(families) - len(checked),
            "ratio_min": min(checked) if checked else None,
            "ratio_max": max(checked) if checked else None,
        }

    source = "sampled" if sampled else "enumerated"
    print(
        f"n={args.n}: {len(families)} {source} OR-closed families, "
        f"min p_A = {min_pa} (witness {witness}), {len(violations)} violations"
    )
    extra = (args.csv,) if args.csv is not None else ()
    _emit(args, payload, started, extra_outputs=extra)
    return 1 if violations else 0


def cmd_maxcorr(args: argparse.Namespace) -> int:
    started = None if args.no_timestamps else _utcnow()
    if (args.joint is None) == (args.pq is None):
        raise ValueError("give exactly one of --joint FILE or --pq P Q R")
    if args.pq is not None:
        p, q, r = args.pq
        joint = binary_coupling(p, q, r)
        source = {"kind": "pq", "p": p, "q": q, "joint_on": r}
    else:
        with open(args.joint) as fh:
            joint = JointDist.from_json_dict(json.load(fh))
        source = {"kind": "file", "path": args.joint}

    spectrum = correlation_spectrum(joint)
    rho = maximal_correlation(joint)
    try:
        rho_pearson = pearson(joint)
    except (ValueError, RankDeficient):
        rho_pearson = None

    shown = "n/a" if rho_pearson is None else f"{rho_pearson:.9f}"
    print(
        f"maximal correlation {rho:.9f}; pearson {shown}; "
        f"top singular value {spectrum[0]:.9f}"
    )
    payload = {
        "source": source,
        "maximal_correlation": rho,
        "pearson": rho_pearson,
        "singular_values": [float(s) for s in spectrum],
    }
    _emit(args, payload, started)
    return 0


# -- parser ----------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="write a JSON report here ('-' for stdout)")
    sub.add_argument(
        "--no-timestamps",
        action="store_true",
        help="omit wall-clock fields so identical runs give identical bytes",
    )


def _add_search_knobs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--grid", type=int, help="grid points per axis (default 64)")
    sub.add_argument("--refine-rounds", type=int, help="refinement rounds (default 6)")
    sub.add_argument("--multistart", type=int, help="grid points to refine (default 16)")
    sub.add_argument(
        "--pin-b2",
        action="store_true",
        help="restrict the high block to b2 = 1",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ucsbound",
        description="Entropy-ratio certificates for union-closed frequency bounds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser(
        "gamma-hat",
        help="evaluate the certificate bound at one mean target t",
    )
    p.add_argument("--t", type=float, required=True, help="mean target in (0, 1/2)")
    p.add_argument(
        "--alpha",
        default="auto",
        help='blend weight: a number to pin, or "auto" to sweep (default)',
    )
    _add_search_knobs(p)
    _add_common(p)
    p.set_defaults(func=cmd_gamma_hat)

    p = subs.add_parser("tmax", help="bisect for the largest certifiable t")
    p.add_argument("--margin", type=float, default=1e-7, help="certify bound > 1 + margin")
    p.add_argument(
        "--bracket",
        type=float,
        nargs=2,
        default=(0.37, 0.40),
        metavar=("LO", "HI"),
        help="initial bisection bracket (default 0.37 0.40)",
    )
    p.add_argument("--t-tol", type=float, default=1e-6, help="final bracket width")
    p.add_argument("--alpha", default="auto", help='blend weights, as in gamma-hat')
    _add_search_knobs(p)
    _add_common(p)
    p.set_defaults(func=cmd_tmax)

    p = subs.add_parser(
        "verify-paper",
        help="re-run the published reference evaluation and compare against it",
    )
    p.add_argument("--strict", action="store_true", help="tighten the ratio tolerance to 1e-6")
    _add_search_knobs(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify_paper)

    p = subs.add_parser(
        "enumerate",
        help="enumerate (or sample) OR-closed families and report frequencies",
    )
    p.add_argument("--n", type=int, required=True, help="ground-set size")
    p.add_argument("--csv", help="write one row per family here")
    p.add_argument(
        "--check-entropy",
        action="store_true",
        help="also maximise symmetric-coupling OR entropy per family",
    )
    p.add_argument("--tol", type=float, default=1e-6, help="entropy ceiling tolerance")
    p.add_argument("--size-cap", type=int, default=16, help="largest |A| to check")
    p.add_argument("--iterations", type=int, default=200, help="ascent iteration cap")
    p.add_argument(
        "--sample",
        type=int,
        help="sample this many random closures instead of enumerating (for n = 5)",
    )
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    _add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("maxcorr", help="maximal correlation of a finite joint")
    p.add_argument("--joint", help="JSON file with x_labels, y_labels, matrix")
    p.add_argument(
        "--pq",
        type=float,
        nargs=3,
        metavar=("P", "Q", "R"),
        help="2x2 coupling of Bernoulli(P), Bernoulli(Q) with joint on-mass R",
    )
    _add_common(p)
    p.set_defaults(func=cmd_maxcorr)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (VerificationFailed, BracketFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UcsBoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
