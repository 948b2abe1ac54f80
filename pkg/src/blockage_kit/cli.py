"""Command-line entry point: ``blockage-kit <subcommand> ...``.

Exit status: 0 on success, 2 on invalid input, 1 on anything unexpected.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analysis, bgmodels, fitting, geom3gpp, traceproc
from .core import ValidationError, read_dataset, dataset_to_csv, Orientation

SEED_ENV = "BLOCKAGE_KIT_SEED"


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    """Parse ``75,92.5`` or ``75:215:17.5`` (inclusive range)."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}: {exc}") from None


def _rng(args) -> np.random.Generator:
    seed = args.seed
    if seed is None and os.environ.get(SEED_ENV):
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer") from None
    return np.random.default_rng(seed)


def _load_model(args) -> bgmodels.BgModel:
    if getattr(args, "params", None):
        model = bgmodels.BgModel.from_json(Path(args.params).read_text(encoding="utf-8"))
        if args.model and model.tag != args.model:
            raise UsageError(f"--model {args.model} does not match parameter file model {model.tag}")
        return model
    if args.preset != "paper":
        raise UsageError(f"unknown preset {args.preset!r}")
    if not args.model:
        raise UsageError("--model is required with --preset")
    return bgmodels.paper_model(args.model)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _add_model_args(p, required_model=False):
    p.add_argument("--model", choices=bgmodels.MODEL_TAGS, required=required_model)
    p.add_argument("--preset", default="paper", help="parameter preset (only 'paper')")
    p.add_argument("--params", help="model parameter JSON file (overrides --preset)")


def _add_geometry_args(p):
    p.add_argument("--geometry", help="geometry JSON file")
    p.add_argument("--h", type=float, default=1.7, help="body height (m)")
    p.add_argument("--r", type=float, default=0.4, help="body extent along the link (m)")
    p.add_argument("--w", type=float, default=0.3, help="screen width across the link (m)")
    p.add_argument("--hc", type=float, default=1.0, help="antenna height (m)")
    p.add_argument("--offset", type=float, default=0.0, help="blocker offset from midpoint (m)")


def _geometry(args, d: float | None = None):
    if args.geometry:
        obj = json.loads(Path(args.geometry).read_text(encoding="utf-8"))
        b, ln = obj.get("body", {}), obj.get("link", {})
        body = geom3gpp.BodyDims(b.get("h_m", 1.7), b.get("r_m", 0.4), b.get("w_m", 0.3))
        dist = ln.get("d_m", d)
        if dist is None:
            raise UsageError("geometry file has no link.d_m and --d was not given")
        return body, geom3gpp.LinkLayout(dist, ln.get("hc_m", 1.0), ln.get("offset_m", 0.0))
    if d is None:
        raise UsageError("--d is required")
    return (
        geom3gpp.BodyDims(args.h, args.r, args.w),
        geom3gpp.LinkLayout(d, args.hc, args.offset),
    )


# --- subcommands ------------------------------------------------------------


def cmd_eval(args):
    model = _load_model(args)
    fs, ds = args.f, args.d
    if len(fs) == 1 and len(ds) == 1:
        _emit(args, f"{model(ds[0], fs[0]):.{args.precision}f}")
        return
    rows = [(repr(f), repr(d), repr(model(d, f))) for d in ds for f in fs]
    _emit(args, _csv(["f_ghz", "d_m", "bg_db"], rows))


def cmd_fit(args):
    data = read_dataset(args.data)
    report = fitting.fit(args.model, data, args.f0)
    _emit(args, json.dumps(report.to_dict(), indent=2))


def cmd_compare(args):
    data = read_dataset(args.data)
    reports = fitting.compare_models(data, args.f0)
    if args.format == "json":
        _emit(args, json.dumps([r.to_dict() for r in reports], indent=2))
    elif args.format == "csv":
        rows = [
            (r.model, json.dumps(r.to_dict()["params"], sort_keys=True), repr(r.sigma_db), r.n_samples)
            for r in reports
        ]
        _emit(args, _csv(["model", "params", "sigma_db", "n_samples"], rows))
    else:
        _emit(args, fitting.format_table(reports))


def cmd_gpp(args):
    body, link = _geometry(args, args.d)
    rows = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", geom3gpp.GppExtrapolationWarning)
        for f in args.f:
            rows.append((repr(f), repr(geom3gpp.gpp_a_gain(body, link, f)), repr(geom3gpp.gpp_b_gain(body, link, f))))
    if any(issubclass(w.category, geom3gpp.GppExtrapolationWarning) for w in caught):
        print(
            f"warning: frequencies above {geom3gpp.GPP_VALID_MAX_GHZ:g} GHz use the analytic extension",
            file=sys.stderr,
        )
    _emit(args, _csv(["f_ghz", "bg_a_db", "bg_b_db"], rows))


def cmd_process_trace(args):
    trace = traceproc.read_trace(args.trace)
    if args.normalize:
        trace = traceproc.normalize_to_los(trace, args.normalize)
    event = traceproc.extract_bg(trace, args.window, args.threshold)
    _emit(args, event.to_json())


def cmd_synth(args):
    model = _load_model(args)
    offsets = traceproc.Offsets(
        orientation={Orientation.SIDEWAYS: args.orientation_offset},
        subject={"s2": args.subject_offset},
    )
    grid = traceproc.SynthGrid(freqs_ghz=args.f, distances_m=args.d, repeats=args.repeats)
    sigma = model.sigma_db if args.sigma is None else args.sigma
    data = traceproc.synth_dataset(model, _rng(args), grid, offsets, sigma)
    _emit(args, dataset_to_csv(data))


def cmd_synth_trace(args):
    env = traceproc.EnvelopeConfig(args.depth, args.center, args.floor, args.ramp)
    k = None if args.k_factor.lower() in ("none", "inf") else float(args.k_factor)
    cfg = traceproc.TraceConfig(n_samples=args.n, fs=args.fs)
    trace = traceproc.synth_trace(env, traceproc.FadingConfig(k), _rng(args), cfg)
    _emit(args, traceproc.trace_to_csv(trace))


def cmd_anova(args):
    data = read_dataset(args.data)
    factors = analysis.FACTORS if args.factor == "all" else (args.factor,)
    results = [analysis.one_way_anova(data, fac).to_dict() for fac in factors]
    _emit(args, json.dumps(results if len(results) > 1 else results[0], indent=2))


def cmd_medians(args):
    data = read_dataset(args.data)
    _emit(args, analysis.group_medians(data, args.key).to_csv())


def cmd_linkbudget(args):
    model = _load_model(args)
    value = bgmodels.link_budget(args.pt, args.gt, args.gr, args.d, args.f, model)
    _emit(args, f"{value:.{args.precision}f}")


def cmd_plotdata(args):
    models = None
    if args.fits:
        reports = json.loads(Path(args.fits).read_text(encoding="utf-8"))
        models = {r["model"]: bgmodels.BgModel.from_dict(r) for r in reports}
    body = geom3gpp.BodyDims(args.h, args.r, args.w)
    _emit(args, analysis.emit_plot_data(args.f, args.d, models, body, args.hc))


def build_parser() -> argparse.ArgumentParser:
    band_f = "75:215:17.5"
    p = _Parser(prog="blockage-kit", description="Human-blockage gain models and tools")
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (fallback: ${SEED_ENV})")
    p.add_argument("--out", help="write primary output to this file instead of stdout")
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    e = sub.add_parser("eval", help="evaluate a BG model over f/d grids")
    _add_model_args(e)
    e.add_argument("--f", type=_floats, required=True, help="GHz list or start:stop:step")
    e.add_argument("--d", type=_floats, default=[1.0], help="m list or start:stop:step")
    e.add_argument("--precision", type=int, default=2)
    e.set_defaults(func=cmd_eval)

    f = sub.add_parser("fit", help="least-squares fit of one model")
    f.add_argument("--data", required=True)
    f.add_argument("--model", choices=bgmodels.MODEL_TAGS, required=True)
    f.add_argument("--f0", type=float, default=145.0, help="CIF reference frequency (GHz)")
    f.set_defaults(func=cmd_fit)

    c = sub.add_parser("compare", help="fit all four models and rank them")
    c.add_argument("--data", required=True)
    c.add_argument("--f0", type=float, default=145.0)
    c.add_argument("--format", choices=("table", "json", "csv"), default="table")
    c.set_defaults(func=cmd_compare)

    g = sub.add_parser("gpp", help="3GPP-A/B blockage gain per frequency")
    _add_geometry_args(g)
    g.add_argument("--d", type=float, default=None, help="Tx-Rx distance (m)")
    g.add_argument("--f", type=_floats, default=_floats(band_f))
    g.set_defaults(func=cmd_gpp)

    t = sub.add_parser("process-trace", help="extract the blockage event from a trace CSV")
    t.add_argument("--trace", required=True)
    t.add_argument("--window", type=int, default=traceproc.DEFAULT_WINDOW)
    t.add_argument("--threshold", type=float, default=traceproc.DEFAULT_THRESHOLD_DB)
    t.add_argument("--normalize", type=int, default=0, help="LoS reference window (samples); 0 = off")
    t.set_defaults(func=cmd_process_trace)

    s = sub.add_parser("synth", help="synthetic blockage dataset CSV")
    _add_model_args(s)
    s.add_argument("--sigma", type=float, default=None, help="residual std (dB); default: model sigma")
    s.add_argument("--orientation-offset", type=float, default=0.0, help="sideways offset (dB)")
    s.add_argument("--subject-offset", type=float, default=0.0, help="second-subject offset (dB)")
    s.add_argument("--f", type=_floats, default=_floats(band_f))
    s.add_argument("--d", type=_floats, default=[1.0, 1.75, 2.5])
    s.add_argument("--repeats", type=int, default=2)
    s.set_defaults(func=cmd_synth)

    st = sub.add_parser("synth-trace", help="synthetic blockage time trace CSV")
    st.add_argument("--depth", type=float, default=-45.5)
    st.add_argument("--center", type=float, default=traceproc.EnvelopeConfig.center_s)
    st.add_argument("--floor", type=float, default=traceproc.EnvelopeConfig.floor_s)
    st.add_argument("--ramp", type=float, default=traceproc.EnvelopeConfig.ramp_s)
    st.add_argument("--k-factor", default="10", help="Rician K in dB, or 'none'")
    st.add_argument("--n", type=int, default=2048)
    st.add_argument("--fs", type=float, default=traceproc.DEFAULT_FS)
    st.set_defaults(func=cmd_synth_trace)

    a = sub.add_parser("anova", help="one-way ANOVA per factor")
    a.add_argument("--data", required=True)
    a.add_argument("--factor", choices=analysis.FACTORS + ("all",), default="all")
    a.set_defaults(func=cmd_anova)

    m = sub.add_parser("medians", help="per-group median/mean/count")
    m.add_argument("--data", required=True)
    m.add_argument("--key", choices=analysis.FACTORS, required=True)
    m.set_defaults(func=cmd_medians)

    lb = sub.add_parser("linkbudget", help="received power with blockage gain")
    _add_model_args(lb)
    lb.add_argument("--pt", type=float, required=True, help="transmit power (dBm)")
    lb.add_argument("--gt", type=float, default=0.0)
    lb.add_argument("--gr", type=float, default=0.0)
    lb.add_argument("--d", type=float, required=True)
    lb.add_argument("--f", type=float, required=True)
    lb.add_argument("--precision", type=int, default=2)
    lb.set_defaults(func=cmd_linkbudget)

    pd = sub.add_parser("plotdata", help="long-format CSV of model and 3GPP curves")
    pd.add_argument("--f", type=_floats, default=_floats(band_f))
    pd.add_argument("--d", type=_floats, default=[1.0, 1.75, 2.5])
    pd.add_argument("--fits", help="JSON list of fitted models (compare --format json)")
    pd.add_argument("--h", type=float, default=1.7)
    pd.add_argument("--r", type=float, default=0.4)
    pd.add_argument("--w", type=float, default=0.3)
    pd.add_argument("--hc", type=float, default=1.0)
    pd.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", bgmodels.BandExtrapolationWarning)
            args.func(args)
    except (ValidationError, OSError, json.JSONDecodeError, argparse.ArgumentTypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
