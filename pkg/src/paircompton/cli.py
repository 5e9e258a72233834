"""Command-line front end.

Subcommands:

* ``sample`` -- generate pair events and write them to CSV or JSON;
* ``marginals`` -- histogram the second photon's polarization-relative
  azimuth for one or more pipelines, with the analytic curve and moment
  estimates in a summary block;
* ``fit`` -- moment estimates of the azimuthal modulations without
  histogram output;
* ``verify`` -- run the full identity battery, one line per check;
* ``scan-ansatz`` -- map the feasible region of the two-parameter family;
* ``quantum-check`` -- run the polarization-state identities only.

Every command is deterministic given its full flag set: event generation
is a pure function of (model, samples, seed, workers), and floats are
written with 17 significant digits so files round-trip exactly.  Exit
codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import analysis, sampling, verify
from .analysis import Histogram
from .kinematics import TWO_PI
from .models import ModelKind, ModelSpec

MODEL_CHOICES = (
    "kn-independent",
    "pw-direct",
    "pw-joint",
    "naive-phi",
    "recommended",
    "ansatz",
)

DEFAULT_MARGINALS = ("kn-independent", "pw-direct", "pw-joint", "recommended")

SEED_ENV_VAR = "PAIRCOMPTON_SEED"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_dumps(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return pad + "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_json_dumps(v, indent + 2).lstrip()}'
            for k, v in obj.items()
        )
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return pad + "[]"
        items = ",\n".join(f"{pad}  {_json_dumps(v, indent + 2).lstrip()}" for v in obj)
        return f"{pad}[\n{items}\n{pad}]"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return pad + ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + _fmt(obj)
    if obj is None:
        return pad + "null"
    return pad + json.dumps(str(obj))


class OutputError(Exception):
    pass


def _write_text(path, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# histogram serialization

def histogram_csv(h: Histogram, summary: dict) -> str:
    """CSV text: a `# summary:` comment, then bin_lo,bin_hi,count,density,analytic.

    Densities are per radian, pre-scaled by 2 pi so the flat level sits at
    1 (the display convention of the reduced-distribution plots).
    """
    lines = [f"# summary: {json.dumps(summary, default=float)}"]
    lines.append("bin_lo,bin_hi,count,density,analytic")
    total = max(h.total, 1)
    widths = h.widths
    for i in range(h.counts.size):
        density = h.counts[i] / (total * widths[i]) * TWO_PI
        analytic = "" if h.analytic is None else _fmt(h.analytic[i] / widths[i] * TWO_PI)
        lines.append(
            f"{_fmt(h.edges[i])},{_fmt(h.edges[i + 1])},{int(h.counts[i])},{_fmt(density)},{analytic}"
        )
    return "\n".join(lines) + "\n"


def histogram_json(h: Histogram, summary: dict) -> str:
    total = max(h.total, 1)
    widths = h.widths
    bins = []
    for i in range(h.counts.size):
        bins.append(
            {
                "bin_lo": float(h.edges[i]),
                "bin_hi": float(h.edges[i + 1]),
                "count": int(h.counts[i]),
                "density": float(h.counts[i] / (total * widths[i]) * TWO_PI),
                "analytic": None
                if h.analytic is None
                else float(h.analytic[i] / widths[i] * TWO_PI),
            }
        )
    return _json_dumps({"summary": summary, "bins": bins}) + "\n"


def parse_histogram_csv(text: str):
    """Inverse of histogram_csv; returns (Histogram, summary dict)."""
    summary = {}
    edges, counts, analytic = [], [], []
    have_analytic = False
    for line in text.splitlines():
        if line.startswith("# summary:"):
            summary = json.loads(line[len("# summary:") :])
            continue
        if not line or line.startswith("#") or line.startswith("bin_lo"):
            continue
        lo, hi, count, _density, ana = line.split(",")
        if not edges:
            edges.append(float(lo))
        edges.append(float(hi))
        counts.append(int(count))
        if ana != "":
            have_analytic = True
            width = float(hi) - float(lo)
            analytic.append(float(ana) * width / TWO_PI)
    return (
        Histogram(
            edges=np.array(edges),
            counts=np.array(counts, dtype=np.uint64),
            analytic=np.array(analytic) if have_analytic else None,
        ),
        summary,
    )


# ---------------------------------------------------------------------------
# subcommands

def _resolve_model(args):
    if args.model == "ansatz":
        return ModelSpec(ModelKind.ANSATZ_FAMILY, args.bff, args.bgg)
    if args.model == "pw-direct":
        return sampling.PW_DIRECT
    return ModelSpec.from_name(args.model)


def _run(args, model):
    return sampling.run_pipeline(model, args.samples, seed=args.seed, workers=args.workers)


def _fit_summary(events) -> dict:
    est1 = analysis.estimate_modulation(events.photon1.phi)
    est2 = analysis.estimate_modulation(events.photon2.phi)
    d_pol = np.cos(2.0 * (np.asarray(events.photon2.phi) - np.asarray(events.photon1.phi)))
    d_fix = np.cos(2.0 * (np.asarray(events.fixed2_phi) - np.asarray(events.fixed1_phi)))
    name = events.meta["model"]
    summary = {
        "model": name,
        "n": events.meta["n"],
        "seed": events.meta["seed"],
        "workers": events.meta["workers"],
        "k1_hat": est1.k_hat,
        "k1_err": est1.std_err,
        "k2_hat": est2.k_hat,
        "k2_err": est2.std_err,
        "delta_pol": 2.0 * float(d_pol.mean()),
        "delta_pol_err": 2.0 * float(np.sqrt(d_pol.var(ddof=1) / d_pol.size)),
        "delta_fixed": 2.0 * float(d_fix.mean()),
        "analytic_k": analysis.analytic_marginal(name),
        "analytic_delta_pol": analysis.analytic_delta_modulation(name),
    }
    if "acceptance" in events.meta:
        summary["acceptance"] = events.meta["acceptance"]
    return summary


def cmd_sample(args) -> int:
    events = _run(args, _resolve_model(args))
    sign = np.asarray(events.frame.orth_sign, dtype=int)
    columns = (
        ("big_phi", np.asarray(events.frame.big_phi)),
        ("orth_sign", sign),
        ("chi1", np.asarray(events.photon1.chi)),
        ("phi1", np.asarray(events.photon1.phi)),
        ("chi2", np.asarray(events.photon2.chi)),
        ("phi2", np.asarray(events.photon2.phi)),
        ("fixed1_phi", np.asarray(events.fixed1_phi)),
        ("fixed2_phi", np.asarray(events.fixed2_phi)),
    )
    if args.format == "csv":
        lines = [f"# summary: {json.dumps(events.meta, default=float)}"]
        lines.append(",".join(name for name, _ in columns))
        for i in range(len(events)):
            lines.append(
                ",".join(
                    str(int(col[i])) if name == "orth_sign" else _fmt(col[i])
                    for name, col in columns
                )
            )
        text = "\n".join(lines) + "\n"
    else:
        text = _json_dumps(
            {
                "summary": events.meta,
                "events": {name: list(col) for name, col in columns},
            }
        ) + "\n"
    _write_text(args.out, text)
    return 0


def cmd_marginals(args) -> int:
    names = args.model or list(DEFAULT_MARGINALS)
    multiple = len(names) > 1
    out = Path(args.out)
    if multiple:
        out.mkdir(parents=True, exist_ok=True)
    for name in names:
        ns = argparse.Namespace(**vars(args))
        ns.model = name
        events = _run(ns, _resolve_model(ns))
        hist = analysis.histogram_phi(events, selector="phi2", bins=args.bins)
        summary = _fit_summary(events)
        text = (
            histogram_csv(hist, summary)
            if args.format == "csv"
            else histogram_json(hist, summary)
        )
        path = out / f"marginals_{name}.{args.format}" if multiple else out
        _write_text(path, text)
    return 0


def cmd_fit(args) -> int:
    events = _run(args, _resolve_model(args))
    text = _json_dumps(_fit_summary(events)) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _report(checks, out, json_out) -> int:
    for check in checks:
        print(check.line())
    if json_out:
        payload = {
            "all_passed": all(c.passed for c in checks),
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "value": c.value,
                    "threshold": c.threshold,
                    "detail": c.detail,
                }
                for c in checks
            ],
        }
        _write_text(out, _json_dumps(payload) + "\n")
    failing = [c for c in checks if not c.passed]
    if failing:
        print(f"FAILED: {failing[0].name}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    checks = verify.run_verification(fast=args.fast, seed=args.seed)
    return _report(checks, args.out, args.out is not None)


def cmd_quantum_check(args) -> int:
    checks = verify.quantum_suite()
    return _report(checks, args.out, args.out is not None)


def _parse_range(text: str):
    try:
        lo, hi = text.split(":")
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"malformed range {text!r}; expected lo:hi"
        ) from None
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return lo, hi


def cmd_scan_ansatz(args) -> int:
    fmap = analysis.scan_ansatz(args.bff_range, args.bgg_range, args.res)
    if args.format == "csv":
        lines = ["b_ff,b_gg,min_density,feasible"]
        for i, bf in enumerate(fmap.b_ff):
            for j, bg in enumerate(fmap.b_gg):
                lines.append(
                    f"{_fmt(bf)},{_fmt(bg)},{_fmt(fmap.min_density[i, j])},"
                    f"{'true' if fmap.feasible[i, j] else 'false'}"
                )
        text = "\n".join(lines) + "\n"
    else:
        rows = [
            {
                "b_ff": float(bf),
                "b_gg": float(bg),
                "min_density": float(fmap.min_density[i, j]),
                "feasible": bool(fmap.feasible[i, j]),
            }
            for i, bf in enumerate(fmap.b_ff)
            for j, bg in enumerate(fmap.b_gg)
        ]
        text = _json_dumps({"scan": rows}) + "\n"
    _write_text(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_sampling_args(p, with_model_default=True):
    if with_model_default:
        p.add_argument("--model", choices=MODEL_CHOICES, default="recommended")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bff", type=float, default=0.0, help="ansatz b_ff parameter")
    p.add_argument("--bgg", type=float, default=0.0, help="ansatz b_gg parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paircompton",
        description="Monte Carlo models of joint Compton scattering for "
        "back-to-back 511 keV annihilation photon pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="generate events and write them to a file")
    _add_sampling_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("marginals", help="phi2 marginal histograms with analytic curves")
    p.add_argument(
        "--model",
        choices=MODEL_CHOICES,
        action="append",
        help="pipeline to histogram; repeatable (default: the four reference pipelines)",
    )
    _add_sampling_args(p, with_model_default=False)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--out", required=True, help="file (one model) or directory (several)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_marginals)

    p = sub.add_parser("fit", help="moment estimates of the azimuthal modulations")
    _add_sampling_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run the identity battery")
    p.add_argument("--fast", action="store_true", help="looser tolerances, < 10 s")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan-ansatz", help="map the feasible ansatz parameter region")
    p.add_argument("--bff-range", type=_parse_range, default=(-0.01, 0.01))
    p.add_argument("--bgg-range", type=_parse_range, default=(-0.04, 0.04))
    p.add_argument("--res", type=int, default=41)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan_ansatz)

    p = sub.add_parser("quantum-check", help="run the polarization-state identities")
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_quantum_check)

    # let values like "-1:1" or "-1e-3" pass as option arguments
    negative_value = re.compile(r"^-\d[\d.:eE+-]*$")
    for sp in [parser] + list(sub.choices.values()):
        sp._negative_number_matcher = negative_value

    return parser


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "12345"))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = _default_seed()
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return 2
    if getattr(args, "bins", 2) < 2:
        print("error: --bins must be at least 2", file=sys.stderr)
        return 2
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2
    if getattr(args, "res", 1) < 1:
        print("error: --res must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (OutputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
