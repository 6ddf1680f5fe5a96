"""Command-line harness: degrade / restore / evaluate / sweep.

Settings resolve as defaults < config file < explicit flags. The config file
is a flat ``key = value`` text file; every key has a default shown below and
in ``--help``. A degraded image is written together with a JSON sidecar
recording the degradation parameters, so restoration needs no
re-specification.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import ParameterError, PnpDeblurError
from .imageio import read_image, write_image
from .bridge import external_bridge_denoiser, external_denoise  # noqa: F401 (re-export)
from .metrics import MetricReport, compute_metrics
from .proximal import dct_softthresh_denoiser, identity_denoiser
from .simulate import DegradeSpec, degrade, gaussian_psf
from .grid import Problem
from .linops import psf_to_otf
from .solver import GammaSchedule, RunConfig, StrengthPolicy, run

__all__ = ["main", "cmd_degrade", "cmd_restore", "cmd_evaluate", "cmd_sweep", "DEFAULTS"]

# Printed defaults; the solver ones follow the experimental protocol
# (2500 iterations, gamma0 = 1000, alpha = mu = 1.001, k_max = iters/2,
# strength 0.1).
DEFAULTS = {
    "iters": 2500,
    "gamma0": 1000.0,
    "alpha": 1.001,
    "mu": 1.001,
    "k_max": None,  # -> iters // 2
    "adaptive": "on",
    "literal_gamma": "off",
    "strength": 0.1,
    "strength_policy": "fixed_product",
    "denoiser": "dct",
    "sigma": 1.0,
    "radius": None,  # -> ceil(4 * sigma)
    "b": 0.0,
    "nu": 20.0,
    "seed": 0,
    "trace_every": 1,
    "residual_tol": 0.0,
}

_COERCE = {
    "iters": int,
    "gamma0": float,
    "alpha": float,
    "mu": float,
    "k_max": int,
    "adaptive": str,
    "literal_gamma": str,
    "strength": float,
    "strength_policy": str,
    "denoiser": str,
    "sigma": float,
    "radius": int,
    "b": float,
    "nu": float,
    "seed": int,
    "trace_every": int,
    "residual_tol": float,
}


def parse_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    settings = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _COERCE:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            settings[key] = _COERCE[key](value)
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return settings


def _resolve(args, overrides=None) -> dict:
    """defaults < config file < extra overrides < explicit CLI flags."""
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        settings.update(parse_config_file(args.config))
    if overrides:
        settings.update({k: v for k, v in overrides.items() if v is not None})
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    if settings["k_max"] is None:
        settings["k_max"] = settings["iters"] // 2
    if settings["radius"] is None:
        settings["radius"] = max(1, math.ceil(4.0 * settings["sigma"]))
    for key in ("adaptive", "literal_gamma"):
        if settings[key] not in ("on", "off"):
            raise ParameterError(f"{key} must be 'on' or 'off', got {settings[key]!r}")
    return settings


def _make_denoiser(selector: str):
    """Return (denoiser, closer) for an in-process or external selector."""
    if selector == "identity":
        return identity_denoiser(), lambda: None
    if selector == "dct":
        return dct_softthresh_denoiser(), lambda: None
    if selector.startswith("external:"):
        command = selector[len("external:"):]
        if not command.strip():
            raise ParameterError("empty external denoiser command")
        denoiser, session = external_bridge_denoiser(command)
        return denoiser, session.close
    raise ParameterError(f"unknown denoiser {selector!r}")


def _run_config(settings, denoiser) -> RunConfig:
    return RunConfig(
        max_iter=settings["iters"],
        gamma0=settings["gamma0"],
        denoiser=denoiser,
        schedule=GammaSchedule(
            alpha=settings["alpha"],
            mu=settings["mu"],
            k_max=settings["k_max"],
            mode="adaptive" if settings["adaptive"] == "on" else "fixed",
            literal=settings["literal_gamma"] == "on",
        ),
        strength_policy=StrengthPolicy(settings["strength_policy"], settings["strength"]),
        residual_tol=settings["residual_tol"],
        trace_every=settings["trace_every"],
    )


def _fmt(value: float) -> str:
    return repr(float(value))


def write_trace_csv(path, trace) -> None:
    lines = ["k,gamma,primal,dual,kl"]
    for pt in trace:
        lines.append(
            f"{pt.k},{_fmt(pt.gamma)},{_fmt(pt.primal)},{_fmt(pt.dual)},{_fmt(pt.kl)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_metrics_csv(path, report: MetricReport) -> None:
    Path(path).write_text(
        "mse,re,psnr,ssim\n"
        f"{_fmt(report.mse)},{_fmt(report.re)},{_fmt(report.psnr)},{_fmt(report.ssim)}\n"
    )


def _mean_metrics(reports) -> MetricReport:
    return MetricReport(
        mse=float(np.mean([r.mse for r in reports])),
        re=float(np.mean([r.re for r in reports])),
        psnr=float(np.mean([r.psnr for r in reports])),
        ssim=float(np.mean([r.ssim for r in reports])),
    )


def _metadata_path(image_path: Path) -> Path:
    return image_path.with_suffix(".json")


def cmd_degrade(args) -> int:
    settings = _resolve(args)
    in_path = Path(args.input)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    loaded = read_image(in_path)

    degraded_channels = []
    otf = None
    for idx, channel in enumerate(loaded.channels):
        spec = DegradeSpec(
            sigma=settings["sigma"],
            kernel_radius=settings["radius"],
            b=settings["b"],
            nu=settings["nu"],
            seed=settings["seed"] + idx,
        )
        result = degrade(channel, spec)
        otf = result.otf
        degraded_channels.append(result.g)

    g_scale = max(1.0, max(float(ch.max()) for ch in degraded_channels))
    scaled = [ch / g_scale for ch in degraded_channels]

    # Grayscale is written at 16-bit depth to keep quantization loss small;
    # RGB stays 8-bit (PNG).
    if len(scaled) == 1:
        out_maxval = 65535
    else:
        out_maxval = 255
    ext = in_path.suffix.lower() if len(scaled) == 3 else (".png" if in_path.suffix.lower() == ".png" else ".pgm")
    img_path = out_dir / f"{in_path.stem}_degraded{ext}"
    write_image(img_path, scaled, maxval=out_maxval)

    meta = {
        "sigma": settings["sigma"],
        "kernel_radius": settings["radius"],
        "b": settings["b"],
        "nu": settings["nu"],
        "seed": settings["seed"],
        "g_scale": g_scale,
        "channels": len(scaled),
        "height": loaded.shape[0],
        "width": loaded.shape[1],
        "source": str(in_path),
    }
    meta_path = _metadata_path(img_path)
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"wrote {img_path} and {meta_path}")
    return 0


def _load_degraded(args, settings):
    in_path = Path(args.input)
    meta_path = Path(args.metadata) if getattr(args, "metadata", None) else _metadata_path(in_path)
    if not meta_path.exists():
        raise ParameterError(f"metadata file {meta_path} not found (pass --metadata)")
    meta = json.loads(meta_path.read_text())
    loaded = read_image(in_path)
    g_scale = float(meta.get("g_scale", 1.0))
    channels = [ch * g_scale for ch in loaded.channels]

    # Explicit flags override the sidecar; otherwise the recorded degradation
    # parameters are authoritative.
    sigma = args.sigma if args.sigma is not None else float(meta["sigma"])
    radius = args.radius if getattr(args, "radius", None) is not None else int(meta["kernel_radius"])
    b = args.b if args.b is not None else float(meta["b"])

    h, w = channels[0].shape
    otf = psf_to_otf(gaussian_psf(sigma, radius, h, w), h, w)
    problems = [
        Problem(g=ch, otf=otf, b=b, beta_gamma_target=settings["strength"])
        for ch in channels
    ]
    return problems, meta, loaded


def cmd_restore(args) -> int:
    settings = _resolve(args)
    problems, meta, _ = _load_degraded(args, settings)
    in_path = Path(args.input)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)

    denoiser, closer = _make_denoiser(settings["denoiser"])
    try:
        reports = [run(problem, _run_config(settings, denoiser)) for problem in problems]
    finally:
        closer()

    restored = [report.restored for report in reports]
    stem = in_path.stem.replace("_degraded", "") or in_path.stem
    ext = ".png" if len(restored) == 3 else in_path.suffix.lower()
    img_path = out_dir / f"{stem}_restored{ext}"
    write_image(img_path, restored, maxval=65535 if len(restored) == 1 else 255)

    if len(reports) == 1:
        write_trace_csv(out_dir / f"{stem}_trace.csv", reports[0].trace)
    else:
        for idx, report in enumerate(reports):
            write_trace_csv(out_dir / f"{stem}_trace_c{idx}.csv", report.trace)
    print(f"wrote {img_path}")

    if args.truth:
        truth = read_image(args.truth)
        if len(truth.channels) != len(restored):
            raise ParameterError("truth channel count differs from restored image")
        per_channel = [
            compute_metrics(t, r) for t, r in zip(truth.channels, restored)
        ]
        report = _mean_metrics(per_channel)
        write_metrics_csv(out_dir / f"{stem}_metrics.csv", report)
        print(
            f"mse={report.mse:.6g} re={report.re:.6g} "
            f"psnr={report.psnr:.4f} ssim={report.ssim:.4f}"
        )
    return 0


def cmd_evaluate(args) -> int:
    truth = read_image(args.truth)
    restored = read_image(args.restored)
    if len(truth.channels) != len(restored.channels):
        raise ParameterError("channel count mismatch between truth and restored")
    report = _mean_metrics(
        [compute_metrics(t, r) for t, r in zip(truth.channels, restored.channels)]
    )
    if args.output:
        write_metrics_csv(args.output, report)
    print(
        f"mse={report.mse:.6g} re={report.re:.6g} "
        f"psnr={report.psnr:.4f} ssim={report.ssim:.4f}"
    )
    return 0


def cmd_sweep(args) -> int:
    settings = _resolve(args)
    problems, meta, _ = _load_degraded(args, settings)
    if not args.truth:
        raise ParameterError("sweep requires --truth for the quality columns")
    truth = read_image(args.truth)
    if len(truth.channels) != len(problems):
        raise ParameterError("truth channel count differs from degraded image")

    gamma0_list = [float(tok) for tok in args.gamma0_list.split(",") if tok.strip()]
    if not gamma0_list:
        raise ParameterError("empty gamma0 list")

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = ["gamma0,mode,mse,re,psnr,ssim"]
    for gamma0 in gamma0_list:
        for mode in ("fixed", "adaptive"):
            cell = dict(settings)
            cell["gamma0"] = gamma0
            cell["adaptive"] = "on" if mode == "adaptive" else "off"
            denoiser, closer = _make_denoiser(cell["denoiser"])
            try:
                reports = [run(p, _run_config(cell, denoiser)) for p in problems]
            finally:
                closer()
            metric = _mean_metrics(
                [
                    compute_metrics(t, rep.restored)
                    for t, rep in zip(truth.channels, reports)
                ]
            )
            rows.append(
                f"{_fmt(gamma0)},{mode},{_fmt(metric.mse)},{_fmt(metric.re)},"
                f"{_fmt(metric.psnr)},{_fmt(metric.ssim)}"
            )
            print(rows[-1])
    csv_path = out_dir / "sweep.csv"
    csv_path.write_text("\n".join(rows) + "\n")
    print(f"wrote {csv_path}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value settings file")
    parser.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULTS['seed']})")
    parser.add_argument("--nu", type=float, help=f"Poisson noise level (default {DEFAULTS['nu']})")
    parser.add_argument("--sigma", type=float, help=f"Gaussian PSF std-dev (default {DEFAULTS['sigma']})")
    parser.add_argument("--radius", type=int, help="PSF kernel radius (default ceil(4*sigma))")
    parser.add_argument("--b", type=float, help=f"background level (default {DEFAULTS['b']})")


def _add_solver(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--denoiser", help="identity | dct | external:<command> (default dct)")
    parser.add_argument("--gamma0", type=float, help=f"initial penalty parameter (default {DEFAULTS['gamma0']})")
    parser.add_argument("--iters", type=int, help=f"iteration cap (default {DEFAULTS['iters']})")
    parser.add_argument("--adaptive", choices=("on", "off"), help="adaptive gamma schedule (default on)")
    parser.add_argument("--strength", type=float, help=f"denoiser strength product (default {DEFAULTS['strength']})")
    parser.add_argument("--strength-policy", dest="strength_policy", choices=("fixed_product", "fixed_beta"))
    parser.add_argument("--alpha", type=float, help=f"gamma step factor (default {DEFAULTS['alpha']})")
    parser.add_argument("--mu", type=float, help=f"residual dominance ratio (default {DEFAULTS['mu']})")
    parser.add_argument("--k-max", dest="k_max", type=int, help="last adaptive iteration (default iters/2)")
    parser.add_argument("--literal-gamma", dest="literal_gamma", choices=("on", "off"),
                        help="use the reciprocal first branch of the gamma update (default off)")
    parser.add_argument("--trace-every", dest="trace_every", type=int, help="trace sampling stride (default 1)")
    parser.add_argument("--residual-tol", dest="residual_tol", type=float,
                        help="stop when max residual falls below (0 disables)")
    parser.add_argument("--metadata", help="sidecar JSON path (default: alongside the input)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnpdeblur",
        description="Restore blurred, Poisson-noisy images with split ADMM and plug-in denoisers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degrade", help="blur + Poisson-degrade an image, with sidecar metadata")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="output directory")
    _add_common(p)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("restore", help="run the solver on a degraded image")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--truth", help="ground-truth image for quality metrics")
    _add_common(p)
    _add_solver(p)
    p.set_defaults(func=cmd_restore)

    p = sub.add_parser("evaluate", help="quality metrics between two images")
    p.add_argument("truth")
    p.add_argument("restored")
    p.add_argument("-o", "--output", help="optional metrics CSV path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="fixed-vs-adaptive table over initial gamma values")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--truth", required=True, help="ground-truth image")
    p.add_argument("--gamma0-list", dest="gamma0_list", required=True,
                   help="comma-separated initial gamma values")
    _add_common(p)
    _add_solver(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PnpDeblurError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
