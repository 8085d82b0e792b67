"""Command line interface.

Subcommands: curve (metric vs snr tables), classify (exhaustive labeling
classes), sample (random labeling classes), labeling (named labelings),
verify (self-checks of the tail approximations, derivative identities, and
Monte Carlo agreement).

Exit codes: 0 success, 1 usage or argument error, 2 verification failure,
3 I/O or file format error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .constellation import (
    Constellation,
    InputDistribution,
    a_constant,
    db_to_snr,
    entropy,
    log_q_function,
    mpam,
    normalize_energy,
    uniform_distribution,
)
from .labeling import (
    BitProbabilities,
    Labeling,
    agc,
    brgc,
    class_representatives,
    enumerate_classes,
    induced_distribution,
    nbc,
    r_value,
    sample_classes,
)
from .exact import (
    QuadratureSpec,
    bicm_mmse_exact,
    gmi_exact,
    k_mi,
    k_mmse,
    log_bep_exact,
    log_bicm_mmse_exact,
    log_conditional_entropy_exact,
    log_gmi_gap_exact,
    log_mmse_exact,
    log_sep_exact,
    mi_exact,
)
from .asymptotic import limit_constant, verify_limit
from .montecarlo import SimConfig, simulate_bep, simulate_mi, simulate_mmse, simulate_sep
from .exact import bep_exact, mmse_exact, sep_exact
from . import report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3

_CURVE_METRICS = ("mi", "gmi", "mmse", "bicm_mmse", "sep", "bep", "kmi", "kmmse")
_NEEDS_LABELING = {"gmi", "bicm_mmse", "bep", "kmi", "kmmse"}
_NAMED_LABELINGS = {"nbc": nbc, "brgc": brgc, "gc": brgc, "agc": agc}
_VERIFY_SUITES = (
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem4",
    "theorem5",
    "theorem6",
    "mimmse",
    "oracle",
    "all",
)


class UsageError(Exception):
    pass


class InputFileError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for verification failures; argparse uses it
    # for bad arguments by default, so route those to 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="constinfo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"constinfo {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_source_flags(sp, with_dist=True):
        sp.add_argument("--mpam", type=int, metavar="M_BITS", help="equally spaced 2^m points")
        sp.add_argument("--constellation", metavar="FILE", help="JSON file with points (and optional probs)")
        sp.add_argument("--no-normalize", action="store_true", help="skip rescaling to unit average energy")
        if with_dist:
            sp.add_argument("--uniform", action="store_true", help="uniform symbol probabilities (default)")
            sp.add_argument("--probs", metavar="CSV", help="comma separated symbol probabilities")
            sp.add_argument("--bitprobs", metavar="CSV", help="comma separated per-bit probabilities of 0 (needs --labeling)")
            sp.add_argument("--labeling", metavar="NAME_OR_FILE", help="nbc, brgc, gc, agc, or a JSON file")

    def add_output_flags(sp, with_plot=False):
        sp.add_argument("--out", metavar="FILE", help="write the table here instead of stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if with_plot:
            sp.add_argument("--plot", action="store_true", help="also render a PNG next to --out")

    sp = sub.add_parser("curve", help="metric vs snr table")
    sp.add_argument("metric", choices=_CURVE_METRICS)
    add_source_flags(sp)
    sp.add_argument("--snr", default="0:30:1", metavar="START:STOP:STEP", help="snr grid in dB")
    sp.add_argument("--nodes", type=int, default=QuadratureSpec().nodes)
    add_output_flags(sp, with_plot=True)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("classify", help="exhaustive labeling classes (at most 8 points)")
    add_source_flags(sp, with_dist=False)
    add_output_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sample", help="labeling classes from random sampling")
    add_source_flags(sp, with_dist=False)
    sp.add_argument("--count", type=int, default=100000, help="number of random labelings")
    sp.add_argument("--seed", type=int, default=0)
    add_output_flags(sp, with_plot=True)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("labeling", help="print a named labeling as a JSON list")
    sp.add_argument("name", choices=sorted(_NAMED_LABELINGS))
    sp.add_argument("bits", type=int)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_labeling)

    sp = sub.add_parser("verify", help="run self-check suites")
    sp.add_argument("suite", choices=_VERIFY_SUITES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1000000)
    sp.add_argument("--nodes", type=int, default=QuadratureSpec().nodes)
    sp.set_defaults(func=cmd_verify)

    return parser


def _parse_csv_floats(text: str, what: str) -> np.ndarray:
    try:
        vals = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"could not parse {what} {text!r} as comma separated floats")
    return vals


def _parse_snr_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"snr grid must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError:
        raise UsageError(f"snr grid must look like start:stop:step, got {text!r}")
    if step <= 0.0 or stop < start:
        raise UsageError("snr grid needs stop >= start and step > 0")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputFileError(f"cannot read {path}: {e}")
    except ValueError as e:
        raise InputFileError(f"{path} is not valid JSON: {e}")


def _load_constellation_file(path: str):
    doc = _load_json(path)
    if not isinstance(doc, dict) or "points" not in doc:
        raise InputFileError(f"{path} must be a JSON object with a 'points' array")
    try:
        c = Constellation(np.asarray(doc["points"], dtype=float))
        probs = doc.get("probs")
        p = InputDistribution(np.asarray(probs, dtype=float)) if probs is not None else None
    except (TypeError, ValueError) as e:
        raise InputFileError(f"{path}: {e}")
    return c, p


def _resolve_labeling(spec_text: str, bits: int) -> Labeling:
    if spec_text in _NAMED_LABELINGS:
        return _NAMED_LABELINGS[spec_text](bits)
    doc = _load_json(spec_text)
    try:
        lab = Labeling(np.asarray(doc, dtype=np.int64))
    except (TypeError, ValueError) as e:
        raise InputFileError(f"{spec_text}: {e}")
    if lab.bits != bits:
        raise UsageError(
            f"labeling file {spec_text} has {lab.bits} bits, constellation needs {bits}"
        )
    return lab


def _resolve_setup(args, need_labeling: bool):
    if (args.mpam is None) == (args.constellation is None):
        raise UsageError("exactly one of --mpam or --constellation is required")
    file_probs = None
    if args.mpam is not None:
        if args.mpam < 1:
            raise UsageError("--mpam needs a positive bit count")
        c = mpam(args.mpam)
        source = f"mpam-{args.mpam}"
    else:
        c, file_probs = _load_constellation_file(args.constellation)
        source = args.constellation

    lab = None
    labeling_spec = getattr(args, "labeling", None)
    if labeling_spec is not None:
        lab = _resolve_labeling(labeling_spec, c.bits)
    elif need_labeling:
        lab = brgc(c.bits)
        labeling_spec = "brgc"
    if lab is not None and lab.size != c.size:
        raise UsageError("labeling size does not match the constellation")

    chosen = [
        name
        for name, val in (
            ("--uniform", getattr(args, "uniform", False)),
            ("--probs", getattr(args, "probs", None)),
            ("--bitprobs", getattr(args, "bitprobs", None)),
        )
        if val
    ]
    if len(chosen) > 1:
        raise UsageError(f"{' and '.join(chosen)} are mutually exclusive")
    bp = None
    if getattr(args, "probs", None):
        vals = _parse_csv_floats(args.probs, "--probs")
        if vals.size != c.size:
            raise UsageError(f"--probs needs {c.size} values, got {vals.size}")
        p = InputDistribution(vals)
    elif getattr(args, "bitprobs", None):
        if lab is None:
            raise UsageError("--bitprobs requires --labeling")
        vals = _parse_csv_floats(args.bitprobs, "--bitprobs")
        bp = BitProbabilities(vals)
        if bp.bits != c.bits:
            raise UsageError(f"--bitprobs needs {c.bits} values, got {bp.bits}")
        p = induced_distribution(lab, bp)
    elif getattr(args, "uniform", False) or file_probs is None:
        p = uniform_distribution(c.size)
    else:
        p = file_probs
    if p.size != c.size:
        raise UsageError("probability count does not match the constellation")

    if not args.no_normalize:
        c = normalize_energy(c, p)

    meta = {
        "command": args.command,
        "version": __version__,
        "constellation": source,
        "points": c.points,
        "probs": p.probs,
        "normalized": not args.no_normalize,
    }
    if lab is not None:
        meta["labeling"] = lab.codes
        meta["labeling_source"] = labeling_spec
    if bp is not None:
        meta["bitprobs"] = bp.p0
    return c, p, lab, meta


def _png_path(out: str) -> str:
    return os.path.splitext(out)[0] + ".png"


def cmd_curve(args) -> int:
    metric = args.metric
    c, p, lab, meta = _resolve_setup(args, need_labeling=metric in _NEEDS_LABELING)
    if args.plot and not args.out:
        raise UsageError("--plot requires --out")
    grid_db = _parse_snr_grid(args.snr)
    quad = QuadratureSpec(args.nodes)
    meta.update({"metric": metric, "snr_db": args.snr, "nodes": args.nodes})

    rho_grid = db_to_snr(grid_db)
    rows = []
    if metric in ("kmi", "kmmse"):
        fn = k_mi if metric == "kmi" else k_mmse
        limit = r_value(c, p, lab)
        for db, rho in zip(grid_db, rho_grid):
            val = fn(c, p, lab, rho, quad)
            rows.append([db, val, limit, val / limit])
        columns = ["rho_db", metric, "limit", "ratio"]
        series = {metric: [r[1] for r in rows], "limit": [limit] * len(rows)}
        logy = False
    else:
        if metric == "mi":
            gap_log_fn = lambda rho: log_conditional_entropy_exact(c, p, rho, quad)
            value_fn = lambda rho: mi_exact(c, p, rho, quad)
            const = limit_constant("conditional_entropy", c, p)
        elif metric == "gmi":
            gap_log_fn = lambda rho: log_gmi_gap_exact(c, p, lab, rho, quad)
            value_fn = lambda rho: gmi_exact(c, p, lab, rho, quad)
            const = limit_constant("gmi_gap", c, p, lab)
        elif metric == "mmse":
            gap_log_fn = lambda rho: log_mmse_exact(c, p, rho, quad)
            value_fn = None
            const = limit_constant("mmse", c, p)
        elif metric == "bicm_mmse":
            gap_log_fn = lambda rho: log_bicm_mmse_exact(c, p, lab, rho, quad)
            value_fn = None
            const = limit_constant("bicm_mmse", c, p, lab)
        elif metric == "sep":
            gap_log_fn = lambda rho: log_sep_exact(c, p, rho)
            value_fn = None
            const = limit_constant("sep", c, p)
        else:
            gap_log_fn = lambda rho: log_bep_exact(c, p, lab, rho)
            value_fn = None
            const = limit_constant("bep", c, p, lab)
        for db, rho in zip(grid_db, rho_grid):
            gap_log = gap_log_fn(rho)
            asym_log = math.log(const) + log_q_function(math.sqrt(rho) * _med(c) / 2.0)
            ratio = math.exp(gap_log - asym_log)
            if value_fn is not None:
                rows.append([db, value_fn(rho), math.exp(gap_log), math.exp(asym_log), ratio])
            else:
                rows.append([db, math.exp(gap_log), math.exp(asym_log), ratio])
        if value_fn is not None:
            columns = ["rho_db", metric, "gap", "asymptotic", "ratio"]
            series = {"gap": [r[2] for r in rows], "asymptotic": [r[3] for r in rows]}
        else:
            columns = ["rho_db", metric, "asymptotic", "ratio"]
            series = {metric: [r[1] for r in rows], "asymptotic": [r[2] for r in rows]}
        logy = True

    text = report.write_table(args.out, meta, columns, rows, args.format)
    if not args.out:
        sys.stdout.write(text)
    elif args.plot:
        from .plotting import save_curve_plot

        save_curve_plot(_png_path(args.out), grid_db, series, metric, logy=logy)
    return EXIT_OK


def _med(c: Constellation) -> float:
    return float(np.diff(c.points).min())


def cmd_classify(args) -> int:
    c, p, _lab, meta = _resolve_setup(args, need_labeling=False)
    counts = enumerate_classes(c)
    reps = class_representatives(c)
    a = a_constant(c)
    total = sum(counts.values())
    meta.update({"classes": len(counts), "labelings": total})
    rows = []
    for cv in sorted(counts):
        rows.append(
            [
                cv,
                cv / a,
                counts[cv],
                counts[cv] / total,
                cv == a,
                " ".join(str(int(v)) for v in reps[cv].codes),
            ]
        )
    columns = ["c", "r", "count", "fraction", "is_gray_class", "representative"]
    text = report.write_table(args.out, meta, columns, rows, args.format)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sample(args) -> int:
    c, p, _lab, meta = _resolve_setup(args, need_labeling=False)
    if args.plot and not args.out:
        raise UsageError("--plot requires --out")
    if args.count < 1:
        raise UsageError("--count must be positive")
    counts = sample_classes(c, args.count, args.seed)
    a = a_constant(c)
    meta.update({"samples": args.count, "seed": args.seed, "classes": len(counts)})
    rows = [
        [cv, cv / a, counts[cv], counts[cv] / args.count, cv == a]
        for cv in sorted(counts)
    ]
    columns = ["c", "r", "count", "frequency", "is_gray_class"]
    text = report.write_table(args.out, meta, columns, rows, args.format)
    if not args.out:
        sys.stdout.write(text)
    elif args.plot:
        from .plotting import save_class_plot

        save_class_plot(
            _png_path(args.out),
            [r[0] for r in rows],
            [r[3] for r in rows],
            gray_c=a,
        )
    return EXIT_OK


def cmd_labeling(args) -> int:
    if args.bits < 1:
        raise UsageError("bit count must be positive")
    lab = _NAMED_LABELINGS[args.name](args.bits)
    text = json.dumps([int(v) for v in lab.codes]) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verify_corpus(needs_labeling: bool):
    cases = []
    for bits, name in ((2, "4pam"), (3, "8pam")):
        p = uniform_distribution(1 << bits)
        c = normalize_energy(mpam(bits), p)
        if needs_labeling:
            for lab_name in ("brgc", "nbc", "agc"):
                cases.append((f"{name}-{lab_name}", c, p, _NAMED_LABELINGS[lab_name](bits)))
        else:
            cases.append((f"{name}-uniform", c, p, None))
    return cases


def _theorem_suite(index: int, nodes: int, emit) -> bool:
    metric = ("conditional_entropy", "mmse", "sep", "gmi_gap", "bicm_mmse", "bep")[index - 1]
    needs_lab = metric in ("gmi_gap", "bicm_mmse", "bep")
    if metric in ("mmse", "bicm_mmse"):
        # the squared-error integrand needs a denser rule for the same depth
        nodes *= 2
    quad = QuadratureSpec(nodes)
    ok = True
    for case, c, p, lab in _verify_corpus(needs_lab):
        # end the sweep where sqrt(rho) d / 2 reaches 6: deep enough for the
        # ratio band, still inside the default rule's trust region
        d = _med(c)
        end_db = 10.0 * math.log10((12.0 / d) ** 2)
        grid = end_db - 15.0 + np.arange(16.0)
        rep = verify_limit(metric, c, p, lab, grid_db=grid, quad=quad)
        ok &= rep.converged
        emit(
            f"{'PASS' if rep.converged else 'FAIL'} theorem{index} {case}: "
            f"final ratio {rep.ratio[-1]:.4f} (constant {rep.constant:.6g})"
        )
    return ok


def _mimmse_suite(nodes: int, emit) -> bool:
    p = uniform_distribution(4)
    c = normalize_energy(mpam(2), p)
    lab = brgc(2)
    quad = QuadratureSpec(nodes)
    h = 1e-4
    ok = True
    for rho in (0.5, 1.0, 2.0, 5.0):
        deriv = (mi_exact(c, p, rho + h, quad) - mi_exact(c, p, rho - h, quad)) / (2 * h)
        err = abs(mmse_exact(c, p, rho, quad) - 2.0 * deriv)
        good = err <= 1e-5
        ok &= good
        emit(f"{'PASS' if good else 'FAIL'} mimmse mi rho={rho}: |mmse - 2 dI/drho| = {err:.3e}")
        deriv = (
            gmi_exact(c, p, lab, rho + h, quad) - gmi_exact(c, p, lab, rho - h, quad)
        ) / (2 * h)
        err = abs(bicm_mmse_exact(c, p, lab, rho, quad) - 2.0 * deriv)
        good = err <= 1e-4
        ok &= good
        emit(f"{'PASS' if good else 'FAIL'} mimmse gmi rho={rho}: |bicm_mmse - 2 dG/drho| = {err:.3e}")
    return ok


def oracle_cases():
    """Configurations exercised by the Monte Carlo agreement suite."""
    bpsk_p = uniform_distribution(2)
    p4 = uniform_distribution(4)
    p8 = uniform_distribution(8)
    skew = InputDistribution([0.97, 0.01, 0.01, 0.01])
    nonuni = InputDistribution([0.1, 0.2, 0.3, 0.4])
    wide = Constellation([-4.0, -2.0, 2.0, 4.0])
    return [
        ("bpsk-uniform", normalize_energy(mpam(1), bpsk_p), bpsk_p, nbc(1), 4.0),
        ("4pam-uniform-gc", normalize_energy(mpam(2), p4), p4, brgc(2), 10.0),
        ("wide4-nonuniform-nbc", normalize_energy(wide, nonuni), nonuni, nbc(2), 9.0),
        ("4pam-skew-gc", normalize_energy(mpam(2), skew), skew, brgc(2), 0.01),
        ("8pam-uniform-agc", normalize_energy(mpam(3), p8), p8, agc(3), 10.0 ** 0.8),
    ]


def oracle_checks(c, p, lab, rho, samples, seed, quad=None):
    """(name, exact, estimate) triples comparing analytic and simulated values."""
    cfg = SimConfig(samples, seed, rho)
    return [
        ("sep", sep_exact(c, p, rho), simulate_sep(c, p, cfg)),
        ("bep", bep_exact(c, p, lab, rho), simulate_bep(c, p, lab, cfg)),
        ("mi", mi_exact(c, p, rho, quad), simulate_mi(c, p, cfg)),
        ("mmse", mmse_exact(c, p, rho, quad), simulate_mmse(c, p, cfg)),
    ]


def _oracle_suite(samples: int, seed: int, emit) -> bool:
    ok = True
    for i, (case, c, p, lab, rho) in enumerate(oracle_cases()):
        for name, exact, est in oracle_checks(c, p, lab, rho, samples, seed + i):
            slack = 4.0 * est.standard_error
            good = abs(exact - est.estimate) <= slack
            ok &= good
            emit(
                f"{'PASS' if good else 'FAIL'} oracle {case} {name}: "
                f"exact {exact:.6g}, simulated {est.estimate:.6g} "
                f"(4 se = {slack:.2e})"
            )
    return ok


def cmd_verify(args) -> int:
    emit = print
    ok = True
    suite = args.suite
    if suite.startswith("theorem"):
        ok = _theorem_suite(int(suite[-1]), args.nodes, emit)
    elif suite == "mimmse":
        ok = _mimmse_suite(args.nodes, emit)
    elif suite == "oracle":
        ok = _oracle_suite(args.samples, args.seed, emit)
    else:
        for idx in range(1, 7):
            ok &= _theorem_suite(idx, args.nodes, emit)
        ok &= _mimmse_suite(args.nodes, emit)
        ok &= _oracle_suite(args.samples, args.seed, emit)
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InputFileError as e:
        print(f"constinfo: {e}", file=sys.stderr)
        return EXIT_IO
    except UsageError as e:
        print(f"constinfo: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OverflowError) as e:
        print(f"constinfo: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"constinfo: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
