"""``freqloss`` command-line front end.

Every subcommand prints a one-line JSON summary on stdout.  Exit codes:
0 success, 1 usage/config error, 2 data error (missing file, bad image,
shape mismatch ...); errors are reported as one JSON line on stderr.

Parameters come from built-in defaults, then ``--config file.json``, then
command-line flags.  Auto-blurred images only ever feed the loss; nothing
here passes them on as predictor input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .ambiguity import AmbiguityConfig, ambiguity_map, ambiguity_weight_mask, fuse_ambiguity, warp_ambiguity
from .autoblur import AutoBlurConfig, auto_blur
from .errors import FreqlossError
from .fairness import compare_landscapes, fig5_configs
from .frequency import directional_gradients, freq_map_centered, freq_map_one_sided, to_luminance
from .geometry import disparity_sampler, load_calibration, reconstruct, reprojection_sampler
from .imgcore import as_map, false_color, load_image, save_image
from .photometric import LossConfig, masked_mean_loss, photometric_loss_map
from .stats import ambiguity_statistics, stats_csv
from .synth import (make_antialiased_edge, make_fig5_scene, make_flat_scene, make_layered_pair,
                    make_texture_scene, make_translation_pair, random_texture, save_scene, StereoScene)

PARAM_DEFAULTS = {
    "delta": 0.3,
    "gamma": 3.0,
    "mask_mode": "hard",
    "lambda": 0.2,
    "s": 9,
    "eta_pct": 60.0,
    "kernel_size": 9,
    "sigma": 1.5,
    "blur_border": "replicate",
    "channel_reduce": "max",
    "alpha": 0.85,
    "c1": 1e-4,
    "c2": 9e-4,
    "hypotheses": None,
    "patch": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument plumbing

def _add_params(p, groups):
    S = argparse.SUPPRESS
    if "ambiguity" in groups:
        p.add_argument("--delta", type=float, default=S, help="ambiguity threshold (0.3)")
        p.add_argument("--gamma", type=float, default=S, help="exponential mask rate (3)")
        p.add_argument("--mask-mode", dest="mask_mode", choices=("hard", "exponential"), default=S)
    if "blur" in groups:
        p.add_argument("--lambda", dest="lambda", type=float, default=S, help="high-frequency pixel threshold (0.2)")
        p.add_argument("--s", type=int, default=S, help="pooling window side (9)")
        p.add_argument("--eta-pct", dest="eta_pct", type=float, default=S, help="area vote percent (60)")
        p.add_argument("--kernel-size", dest="kernel_size", type=int, default=S)
        p.add_argument("--sigma", type=float, default=S)
        p.add_argument("--blur-border", dest="blur_border", choices=("replicate", "zero"), default=S)
        p.add_argument("--channel-reduce", dest="channel_reduce", choices=("max", "mean"), default=S)
    if "loss" in groups:
        p.add_argument("--alpha", type=float, default=S, help="SSIM/L1 mixing weight (0.85)")
        p.add_argument("--c1", type=float, default=S)
        p.add_argument("--c2", type=float, default=S)
    if "sweep" in groups:
        p.add_argument("--hypotheses", type=_float_list, default=S, help="comma-separated disparities")
        p.add_argument("--patch", type=_int_list, default=S, help="odd side or H,W")


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from None


def _int_list(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None
    return vals[0] if len(vals) == 1 else vals


def _common(p, groups=()):
    p.add_argument("--config", default=argparse.SUPPRESS, help="JSON file with parameter overrides")
    _add_params(p, groups)


def build_parser():
    parser = _Parser(prog="freqloss", description="Frequency-aware photometric loss tools")
    parser.add_argument("--version", action="version", version=f"freqloss {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    S = argparse.SUPPRESS

    p = sub.add_parser("freq", help="spatial-frequency maps of an image")
    _common(p)
    p.add_argument("--in", dest="input", default=S)
    p.add_argument("--out-plus", dest="out_plus", default=S)
    p.add_argument("--out-minus", dest="out_minus", default=S)
    p.add_argument("--out-centered", dest="out_centered", default=S)

    p = sub.add_parser("ambiguity", help="ambiguity map and loss-weight mask")
    _common(p, ("ambiguity",))
    p.add_argument("--target", default=S)
    p.add_argument("--source", action="append", default=S, help="source frame (repeatable)")
    p.add_argument("--disparity", action="append", default=S, help="PFM file or number, one per source")
    p.add_argument("--depth", default=S, help="target depth PFM (with --calib)")
    p.add_argument("--calib", action="append", default=S, help="calibration JSON, one per source")
    p.add_argument("--out-map", dest="out_map", default=S)
    p.add_argument("--out-mask", dest="out_mask", default=S)
    p.add_argument("--out-vis", dest="out_vis", default=S)

    p = sub.add_parser("autoblur", help="frequency-adaptive blur (loss input only)")
    _common(p, ("blur",))
    p.add_argument("--in", dest="input", default=S)
    p.add_argument("--out", default=S)
    p.add_argument("--plan", default=S, help="PFM with channels (hf_pixel, hf_avg, w_blur)")

    p = sub.add_parser("loss", help="per-pixel photometric loss")
    _common(p, ("loss", "ambiguity", "blur"))
    p.add_argument("--target", default=S)
    p.add_argument("--recon", default=S)
    p.add_argument("--source", default=S)
    p.add_argument("--disparity", default=S)
    p.add_argument("--depth", default=S)
    p.add_argument("--calib", default=S)
    p.add_argument("--mask", default=S, help="weight map (PNG/PFM) to average with")
    p.add_argument("--ambiguity-mask", dest="ambiguity_mask", action="store_true", default=S)
    p.add_argument("--blur", action="store_true", default=S, help="auto-blur both images before the loss")
    p.add_argument("--out", default=S)
    p.add_argument("--vis", default=S)

    p = sub.add_parser("warp", help="reconstruct the target view from a source")
    _common(p)
    p.add_argument("--source", default=S)
    p.add_argument("--disparity", default=S)
    p.add_argument("--sign", type=int, choices=(1, -1), default=S)
    p.add_argument("--depth", default=S)
    p.add_argument("--calib", default=S)
    p.add_argument("--border", choices=("clamp", "zero"), default=S)
    p.add_argument("--out", default=S)
    p.add_argument("--validity", default=S)

    p = sub.add_parser("fairness", help="loss landscape with and without auto-blur")
    _common(p, ("loss", "blur", "sweep"))
    p.add_argument("--scene", choices=("fig5", "flat", "texture", "files"), default=S)
    p.add_argument("--l", type=int, default=S, help="block width of the fig5 scene")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--target", default=S)
    p.add_argument("--source", default=S)
    p.add_argument("--gt", type=float, default=S)
    p.add_argument("--fp", type=float, default=S)
    p.add_argument("--probe", type=_int_list, default=S, help="row,col")
    p.add_argument("--out", default=S)
    p.add_argument("--curves", default=S)

    p = sub.add_parser("synth", help="write a synthetic scene")
    _common(p)
    p.add_argument("--kind", choices=("fig5", "edge", "translation", "layered"), default=S)
    p.add_argument("--l", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--width", type=int, default=S)
    p.add_argument("--height", type=int, default=S)
    p.add_argument("--edge-col", dest="edge_col", type=int, default=S)
    p.add_argument("--ramp-width", dest="ramp_width", type=int, default=S)
    p.add_argument("--shift", type=float, default=S)
    p.add_argument("--stem", default=S)
    p.add_argument("--out-dir", dest="out_dir", default=S)

    p = sub.add_parser("stats", help="ambiguous-pixel share of count and loss")
    _common(p, ("ambiguity", "loss"))
    p.add_argument("--pairs", default=S, help="text file: target source disparity per line")
    p.add_argument("--synthetic", type=int, default=S, help="number of generated layered pairs")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--out", default=S)
    return parser


COMMAND_DEFAULTS = {
    "freq": {"input": None, "out_plus": None, "out_minus": None, "out_centered": None},
    "ambiguity": {"target": None, "source": [], "disparity": [], "depth": None, "calib": [],
                  "out_map": None, "out_mask": None, "out_vis": None},
    "autoblur": {"input": None, "out": None, "plan": None},
    "loss": {"target": None, "recon": None, "source": None, "disparity": None, "depth": None,
             "calib": None, "mask": None, "ambiguity_mask": False, "blur": False, "out": None, "vis": None},
    "warp": {"source": None, "disparity": None, "sign": 1, "depth": None, "calib": None,
             "border": "clamp", "out": None, "validity": None},
    "fairness": {"scene": "fig5", "l": 3, "seed": 0, "target": None, "source": None, "gt": None,
                 "fp": None, "probe": None, "out": None, "curves": None},
    "synth": {"kind": "fig5", "l": 3, "seed": 0, "width": 32, "height": 16, "edge_col": 12,
              "ramp_width": 1, "shift": 3.0, "stem": "scene", "out_dir": "."},
    "stats": {"pairs": None, "synthetic": None, "seed": 0, "out": None},
}


def resolve(args) -> tuple[dict, set]:
    """Merge defaults < config file < flags; return (settings, explicitly-set keys)."""
    ns = vars(args).copy()
    command = ns.pop("command")
    allowed = dict(PARAM_DEFAULTS)
    allowed.update(COMMAND_DEFAULTS[command])
    settings = dict(allowed)
    explicit = set()
    cfg_path = ns.pop("config", None)
    if cfg_path is not None:
        try:
            with open(cfg_path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {cfg_path}: invalid JSON ({exc})") from None
        if not isinstance(doc, dict):
            raise UsageError(f"config {cfg_path}: top level must be an object")
        unknown = sorted(set(doc) - set(allowed))
        if unknown:
            raise UsageError(f"config {cfg_path}: unknown keys {unknown}")
        settings.update(doc)
        explicit.update(doc)
    settings.update(ns)
    explicit.update(ns)
    return settings, explicit


def validate(st):
    """Build every parameter group once so bad values fail as usage errors before any I/O."""
    try:
        amb_config(st)
        blur_config(st)
        loss_config(st)
        if st["hypotheses"] is not None:
            hyps = np.asarray(st["hypotheses"], dtype=np.float64)
            if hyps.ndim != 1 or hyps.size < 3 or not (np.diff(hyps) > 0).all():
                raise ValueError("hypotheses must be a strictly increasing list of at least 3 numbers")
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad parameter: {exc}") from None


def amb_config(st):
    return AmbiguityConfig(delta=float(st["delta"]), mode=st["mask_mode"], gamma=float(st["gamma"]))


def blur_config(st):
    return AutoBlurConfig(lam=float(st["lambda"]), s=int(st["s"]), eta_pct=float(st["eta_pct"]),
                          kernel_size=int(st["kernel_size"]), sigma=float(st["sigma"]),
                          border=st["blur_border"], channel_reduce=st["channel_reduce"])


def loss_config(st):
    return LossConfig(alpha=float(st["alpha"]), c1=float(st["c1"]), c2=float(st["c2"]))


def _need(st, *keys):
    for key in keys:
        if st.get(key) in (None, [], ""):
            raise UsageError(f"missing required option --{key.replace('_', '-')}")


def _disparity(value, shape):
    """A number, or a PFM/PNG path (first channel, unclamped)."""
    try:
        return float(value)
    except (TypeError, ValueError):
        pass
    d = as_map(load_image(value, clamp=False)[..., 0])
    if d.shape != tuple(shape):
        raise FreqlossError(f"disparity {value} has shape {d.shape}, expected {tuple(shape)}")
    return d


def _sampler(st, shape, idx=None):
    def pick(key):
        v = st.get(key)
        if isinstance(v, list):
            return v[idx] if idx is not None and idx < len(v) else None
        return v

    disp = pick("disparity")
    if disp is not None:
        return disparity_sampler(_disparity(disp, shape), sign=int(st.get("sign", 1)), shape=shape)
    calib = pick("calib")
    if calib is not None and st.get("depth"):
        k, pose = load_calibration(calib)
        depth = as_map(load_image(st["depth"], clamp=False)[..., 0])
        return reprojection_sampler(depth, pose, k)
    raise UsageError("need --disparity or --depth with --calib to build a sampler")


# ---------------------------------------------------------------------------
# subcommands

def cmd_freq(st, explicit):
    _need(st, "input")
    img = load_image(st["input"])
    g = directional_gradients(to_luminance(img))
    plus, minus, centered = freq_map_one_sided(g, "plus"), freq_map_one_sided(g, "minus"), freq_map_centered(g)
    for key, m in (("out_plus", plus), ("out_minus", minus), ("out_centered", centered)):
        if st[key]:
            save_image(m, st[key])
    return {"height": img.shape[0], "width": img.shape[1], "max_plus": float(plus.max()),
            "max_centered": float(centered.max()), "mean_centered": float(centered.mean())}


def cmd_ambiguity(st, explicit):
    _need(st, "target")
    target = load_image(st["target"])
    maps = [ambiguity_map(target)]
    for i, src_path in enumerate(st["source"]):
        src = load_image(src_path)
        maps.append(warp_ambiguity(ambiguity_map(src), _sampler(st, target.shape[:2], i)))
    a_max = fuse_ambiguity(maps)
    cfg = amb_config(st)
    weights = ambiguity_weight_mask(a_max, cfg)
    if st["out_map"]:
        save_image(a_max, st["out_map"])
    if st["out_mask"]:
        save_image(weights, st["out_mask"])
    if st["out_vis"]:
        save_image(false_color(a_max, 0.0, float(np.sqrt(2.0))), st["out_vis"])
    return {"height": target.shape[0], "width": target.shape[1], "sources": len(st["source"]),
            "mode": cfg.mode, "excluded_fraction": float((weights == 0).mean()),
            "mean_weight": float(weights.mean()), "max_ambiguity": float(a_max.max())}


def cmd_autoblur(st, explicit):
    _need(st, "input", "out")
    img = load_image(st["input"])
    out, plan = auto_blur(img, blur_config(st))
    save_image(out, st["out"])
    if st["plan"]:
        save_image(np.stack([plan.hf_pixel, plan.hf_avg, plan.w_blur], axis=-1), st["plan"])
    return {"height": img.shape[0], "width": img.shape[1],
            "blurred_fraction": float((plan.w_blur > 0).mean()),
            "hf_pixel_fraction": float(plan.hf_pixel.mean()), "mean_w_blur": float(plan.w_blur.mean())}


def cmd_loss(st, explicit):
    _need(st, "target")
    target = load_image(st["target"])
    source = None
    if st["recon"]:
        recon = load_image(st["recon"])
        valid = np.ones(target.shape[:2])
        sampler = None
    else:
        _need(st, "source")
        source = load_image(st["source"])
        sampler = _sampler(st, target.shape[:2])
        recon, valid = reconstruct(source, sampler)
    tgt_l, rec_l = target, recon
    if st["blur"]:
        bcfg = blur_config(st)
        tgt_l, _ = auto_blur(target, bcfg)
        rec_l, _ = auto_blur(recon, bcfg)
    loss = photometric_loss_map(tgt_l, rec_l, loss_config(st))
    weights = valid.copy()
    if st["mask"]:
        weights = weights * as_map(load_image(st["mask"])[..., 0])
    if st["ambiguity_mask"]:
        maps = [ambiguity_map(target)]
        if source is not None:
            maps.append(warp_ambiguity(ambiguity_map(source), sampler))
        weights = weights * ambiguity_weight_mask(fuse_ambiguity(maps), amb_config(st))
    value, empty = masked_mean_loss(loss, weights)
    if st["out"]:
        save_image(loss, st["out"])
    if st["vis"]:
        save_image(false_color(loss, 0.0, 1.0), st["vis"])
    return {"height": target.shape[0], "width": target.shape[1], "mean_loss": float(loss.mean()),
            "masked_mean_loss": value, "empty_mask": empty, "kept_fraction": float((weights > 0).mean())}


def cmd_warp(st, explicit):
    _need(st, "source", "out")
    source = load_image(st["source"])
    sampler = _sampler(st, source.shape[:2])
    recon, valid = reconstruct(source, sampler, border=st["border"])
    save_image(recon, st["out"])
    if st["validity"]:
        save_image(valid, st["validity"])
    return {"height": source.shape[0], "width": source.shape[1], "valid_fraction": float(valid.mean())}


def _scene_from_settings(st):
    kind = st["scene"]
    if kind == "fig5":
        return make_fig5_scene(int(st["l"]))
    if kind == "flat":
        return make_flat_scene()
    if kind == "texture":
        return make_texture_scene(np.random.default_rng(int(st["seed"])))
    _need(st, "target", "source", "gt", "probe")
    target, source = load_image(st["target"]), load_image(st["source"])
    probe = st["probe"]
    if not isinstance(probe, list) or len(probe) != 2:
        raise UsageError("--probe needs row,col")
    return StereoScene(target=target, source=source, gt_disparity=float(st["gt"]), probe=tuple(probe),
                       fp_disparity=st["fp"], name="files")


def cmd_fairness(st, explicit):
    scene = _scene_from_settings(st)
    loss_cfg, blur_cfg = loss_config(st), blur_config(st)
    if st["scene"] == "fig5":
        # the block scene ships its own loss/blur settings unless the user pinned them
        preset_loss, preset_blur = fig5_configs(int(st["l"]))
        if not explicit & {"alpha", "c1", "c2"}:
            loss_cfg = preset_loss
        if not explicit & {"lambda", "s", "eta_pct", "kernel_size", "sigma", "blur_border", "channel_reduce"}:
            blur_cfg = preset_blur
    hyps = None if st["hypotheses"] is None else np.asarray(st["hypotheses"], dtype=np.float64)
    report = compare_landscapes(scene, hypotheses=hyps, loss_cfg=loss_cfg, blur_cfg=blur_cfg, patch=st["patch"])
    if st["out"]:
        with open(st["out"], "w") as fh:
            fh.write(report.to_json())
    if st["curves"]:
        with open(st["curves"], "w") as fh:
            fh.write(report.curves_csv())
    return {"scene": report.scene, "d_fair_baseline": report.d_fair_baseline,
            "d_fair_autoblur": report.d_fair_autoblur, "fp_exposed": report.fp_exposed,
            "monotone_radius": report.monotone_radius, "degenerate": report.degenerate}


def cmd_synth(st, explicit):
    kind = st["kind"]
    rng = np.random.default_rng(int(st["seed"]))
    if kind == "fig5":
        scene = make_fig5_scene(int(st["l"]))
    elif kind == "edge":
        img = make_antialiased_edge(int(st["width"]), int(st["height"]), int(st["edge_col"]), int(st["ramp_width"]))
        scene = make_translation_pair(img, 0)
        scene.name = "edge"
    elif kind == "translation":
        scene = make_translation_pair(random_texture(48, 64, rng, smooth=1), float(st["shift"]))
    else:
        scene = make_layered_pair(rng)
    os.makedirs(st["out_dir"], exist_ok=True)
    paths = save_scene(scene, st["out_dir"], st["stem"])
    return {"kind": kind, "files": sorted(os.path.basename(p) for p in paths.values()),
            "height": scene.shape[0], "width": scene.shape[1]}


def _read_pairs(list_path):
    base = os.path.dirname(os.path.abspath(list_path))
    with open(list_path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise FreqlossError(f"{list_path}:{lineno}: expected 'target source disparity'")
            tgt = load_image(os.path.join(base, parts[0]))
            src = load_image(os.path.join(base, parts[1]))
            disp_arg = parts[2]
            try:
                float(disp_arg)
            except ValueError:
                disp_arg = os.path.join(base, disp_arg)
            yield tgt, src, _disparity(disp_arg, tgt.shape[:2])


def cmd_stats(st, explicit):
    _need(st, "out")
    if st["pairs"]:
        pairs = list(_read_pairs(st["pairs"]))
    elif st["synthetic"]:
        rng = np.random.default_rng(int(st["seed"]))
        pairs = [make_layered_pair(rng) for _ in range(int(st["synthetic"]))]
    else:
        raise UsageError("need --pairs or --synthetic")
    rows = ambiguity_statistics(pairs, amb_config(st), loss_config(st))
    with open(st["out"], "w") as fh:
        fh.write(stats_csv(rows))
    return {"pairs": len(pairs), "rows": rows}


COMMANDS = {
    "freq": cmd_freq,
    "ambiguity": cmd_ambiguity,
    "autoblur": cmd_autoblur,
    "loss": cmd_loss,
    "warp": cmd_warp,
    "fairness": cmd_fairness,
    "synth": cmd_synth,
    "stats": cmd_stats,
}


def _emit_error(kind, message):
    sys.stderr.write(json.dumps({"status": "error", "error": kind, "message": str(message)}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        settings, explicit = resolve(args)
        validate(settings)
        summary = COMMANDS[args.command](settings, explicit)
    except UsageError as exc:
        _emit_error("usage", exc)
        return 1
    except (FreqlossError, OSError) as exc:
        _emit_error(type(exc).__name__, exc)
        return 2
    summary = {"command": args.command, "status": "ok", **summary}
    sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
