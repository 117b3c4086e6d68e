"""Command-line front end.

    sparsebounds --kernel gaussian:sigma=1 --criterion coherence:gamma=0.5 \\
                 --synth n=500,dim=3,dist=gaussian --seed 7 --mode all --out report.json

Exit status: 0 when no certificate is violated, 1 when some are, 2 on usage
errors, 3 when a computation failed (the report then carries an ``error``).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import _backend, synth
from .bounds import Direction, Status, certify_dictionary, count_violations
from .criteria import CriterionConfig, run_stream
from .errors import InputError, SparseBoundsError
from .features import epsilon_sq, kpca, kpca_certificates, mean_certificates
from .kernels import KernelSpec, as_points, gram, norm_bounds

SCHEMA = 1
MODES = ("sparsify", "certify", "mean", "kpca", "all")
EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3
CORRUPTION = 1.0


@dataclass(frozen=True)
class RunConfig:
    kernel: KernelSpec
    criterion: CriterionConfig
    mode: str = "all"
    input_path: str | None = None
    synth: dict | None = None
    kpca_axes: int = 5
    output_path: str = "-"
    seed: int = 0
    selfcheck: str | None = None

    def echo(self) -> dict:
        return {
            "kernel": str(self.kernel),
            "criterion": str(self.criterion),
            "mode": self.mode,
            "input_path": self.input_path,
            "synth": self.synth,
            "kpca_axes": self.kpca_axes,
            "seed": self.seed,
            "selfcheck": self.selfcheck,
        }


def _kernel_arg(text):
    try:
        return KernelSpec.parse(text)
    except SparseBoundsError as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: {exc}") from None


def _criterion_arg(text):
    try:
        return CriterionConfig.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: {exc}") from None


def _synth_arg(text):
    spec = {}
    for item in text.split(","):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in ("n", "dim", "dist") or key in spec:
            raise argparse.ArgumentTypeError(f"bad synth field {item!r}")
        spec[key] = value.strip()
    if set(spec) != {"n", "dim", "dist"}:
        raise argparse.ArgumentTypeError(f"{text!r}: synth needs n=..,dim=..,dist=..")
    try:
        n, dim = int(spec["n"]), int(spec["dim"])
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r}: n and dim must be integers") from None
    if n < 1 or dim < 1 or spec["dist"] not in synth.DISTRIBUTIONS:
        raise argparse.ArgumentTypeError(f"{text!r}: need n, dim >= 1 and dist in {synth.DISTRIBUTIONS}")
    return {"n": n, "dim": dim, "distribution": spec["dist"]}


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r}: seed must be unsigned")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sparsebounds",
        description="Sparsify a sample stream with an online kernel criterion and certify its error bounds.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="CSV file, one sample per row, optional header")
    src.add_argument("--synth", type=_synth_arg, metavar="n=N,dim=D,dist=gaussian|uniform")
    p.add_argument("--kernel", type=_kernel_arg, required=True, metavar="SPEC",
                   help="linear | poly:p=2,c=1 | exp | gaussian:sigma=1.0")
    p.add_argument("--criterion", type=_criterion_arg, required=True, metavar="SPEC",
                   help="approx:delta=.. | distance:delta=.. | coherence:gamma=.. | babel:gamma=..")
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--kpca-axes", type=_positive_int, default=5, metavar="K")
    p.add_argument("--seed", type=_seed, default=0, metavar="S")
    p.add_argument("--out", default="-", metavar="PATH", help="report path ('-' for stdout)")
    p.add_argument("--selfcheck", choices=("corrupt",), help=argparse.SUPPRESS)
    return p


def parse_args(argv=None) -> RunConfig:
    """Validate command-line arguments; exits with status 2 on usage errors."""
    ns = build_parser().parse_args(argv)
    return RunConfig(
        kernel=ns.kernel,
        criterion=ns.criterion,
        mode=ns.mode,
        input_path=ns.input,
        synth=ns.synth,
        kpca_axes=ns.kpca_axes,
        output_path=ns.out,
        seed=ns.seed,
        selfcheck=ns.selfcheck,
    )


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path) -> np.ndarray:
    """Read samples from a CSV file; a non-numeric first row is a header."""
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not any(cells):
                continue
            if not rows and width is None and not all(_is_number(c) for c in cells):
                width = len(cells)  # header
                continue
            if width is None:
                width = len(cells)
            if len(cells) != width:
                raise InputError(f"{path}: row {lineno} has {len(cells)} columns, expected {width}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                raise InputError(f"{path}: row {lineno} has a non-numeric cell") from None
    if not rows:
        raise InputError(f"{path}: no samples")
    X = np.array(rows)
    if not np.all(np.isfinite(X)):
        raise InputError(f"{path}: non-finite values")
    return X


def samples_digest(X: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(np.asarray(X.shape, dtype="<i8").tobytes())
    h.update(np.ascontiguousarray(X, dtype="<f8").tobytes())
    return h.hexdigest()


def _record_dict(r) -> dict:
    return {
        "stream_index": r.stream_index,
        "decision": r.decision.value,
        "statistic": r.statistic,
        "threshold_used": r.threshold_used,
        "dictionary_size": r.dictionary_size,
        "initial": r.initial,
        "numeric_dependence": r.numeric_dependence,
    }


class _Timer:
    def __init__(self):
        self.ms = {}

    def phase(self, name):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.ms[name] = round((time.perf_counter() - self.t0) * 1000.0, 3)

        return _Ctx()


def _certify_phases(cfg, d, records, X, nb, K, axes, eps, perturb):
    certs = []
    features = {}
    mode = cfg.mode
    if mode in ("certify", "all"):
        certs += certify_dictionary(d, records, cfg.criterion, nb, X, perturb)
    if mode in ("mean", "all"):
        mc, err = mean_certificates(d, X, cfg.criterion, eps, nb, K, perturb.get("mean", 0.0))
        certs += mc
        features["mean"] = {"squared_error": err}
    if mode in ("kpca", "all"):
        kc, errs = kpca_certificates(d, axes, eps, nb, perturb)
        certs += kc
        features["kpca"] = {
            "principal_values": [float(v) for v in axes.principal_values],
            "squared_errors": errs,
            "numerical_rank": axes.numerical_rank,
            "requested_axes": cfg.kpca_axes,
            "retained_axes": axes.retained_count,
            "centered": False,
        }
    return certs, features


def _corruption_target(certs):
    """First subject whose certificates are all upper bounds that hold now and
    would fail after adding ``CORRUPTION`` to the measured value."""
    by_subject = {}
    for c in certs:
        by_subject.setdefault(c.subject, []).append(c)
    for subject, group in by_subject.items():
        if all(
            c.direction is Direction.UPPER
            and c.status is Status.HOLDS
            and c.measured_value + CORRUPTION > c.bound_value + 1e-9
            for c in group
        ):
            return subject
    return None


def execute(cfg: RunConfig):
    """Run every phase the mode asks for; returns ``(report, exit_status)``."""
    timer = _Timer()
    report = {"schema": SCHEMA, "config": cfg.echo()}
    try:
        with timer.phase("load"):
            if cfg.synth is not None:
                X = synth.generate(cfg.synth["n"], cfg.synth["dim"], cfg.synth["distribution"], cfg.seed)
                source = "synth"
            else:
                X = load_csv(cfg.input_path)
                source = "csv"
            X = as_points(X)
        report["input"] = {"source": source, "n": X.shape[0], "dim": X.shape[1], "sha256": samples_digest(X)}
        nb = norm_bounds(cfg.kernel, X)
        report["norm_bounds"] = {"r_sq": nb.r_sq, "R_sq": nb.R_sq, "provenance": nb.provenance.value}

        with timer.phase("sparsify"):
            d, records = run_stream(X, cfg.kernel, cfg.criterion)
        report["dictionary"] = {"m": d.size, "origin_indices": list(d.origin_indices)}
        report["records"] = [_record_dict(r) for r in records]

        K = axes = eps = None
        if cfg.mode in ("mean", "kpca", "all"):
            with timer.phase("features"):
                K = gram(cfg.kernel, X)
                eps = epsilon_sq(cfg.criterion, d, records, X, nb)
                if cfg.mode in ("kpca", "all"):
                    axes = kpca(X, cfg.kernel, cfg.kpca_axes, K, clamp=True)
            report["epsilon_sq"] = eps

        with timer.phase("certify"):
            certs, features = _certify_phases(cfg, d, records, X, nb, K, axes, eps, {})
            if cfg.selfcheck == "corrupt":
                target = _corruption_target(certs)
                if target is None:
                    raise SparseBoundsError("selfcheck: no certificate subject can be corrupted")
                baseline = {(c.bound_id, c.subject): c.status for c in certs}
                certs, features = _certify_phases(cfg, d, records, X, nb, K, axes, eps, {target: CORRUPTION})
                report["selfcheck"] = {
                    "subject": target,
                    "offset": CORRUPTION,
                    "flipped": [
                        c.bound_id.value for c in certs
                        if c.status is Status.VIOLATED and baseline[(c.bound_id, c.subject)] is not Status.VIOLATED
                    ],
                }
        report["features"] = features
        report["certificates"] = [c.to_dict() for c in certs]
        violations = count_violations(certs)
        by_status = {s.value: sum(c.status is s for c in certs) for s in Status}
        report["summary"] = {"certificates": len(certs), "by_status": by_status}
        report["violations"] = violations
        status = EXIT_OK if violations == 0 else EXIT_VIOLATIONS
    except (SparseBoundsError, ValueError, OSError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        status = EXIT_ERROR
    report["timing"] = {"deterministic": False, "backend": _backend.NAME, "phases_ms": timer.ms}
    return report, status


def dumps(report: dict) -> str:
    """Canonical serialization: sorted keys, fixed indentation, no NaN."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def main(argv=None) -> int:
    cfg = parse_args(argv)
    report, status = execute(cfg)
    text = dumps(report)
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    if "error" in report:
        print(f"sparsebounds: {report['error']['message']}", file=sys.stderr)
    elif report["violations"]:
        print(f"sparsebounds: {report['violations']} violated certificate(s)", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
