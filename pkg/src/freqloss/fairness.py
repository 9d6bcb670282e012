"""Loss landscapes over disparity hypotheses and their fairness degree.

A landscape is fair when the loss grows as the hypothesis moves away from
the ground truth.  The fairness degree is the share of the hypothesis range
on which the loss slope points away from gt.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .autoblur import AutoBlurConfig, auto_blur
from .errors import ArgumentError, DomainError
from .imgcore import as_image, bilinear_sample, require_same_shape
from .photometric import LossConfig, photometric_loss_map

DEFAULT_HYPOTHESES = np.arange(0, 16, dtype=np.float64)


@dataclass(frozen=True)
class LossCurve:
    hypotheses: np.ndarray
    losses: np.ndarray
    gt: float

    def __post_init__(self):
        x = np.asarray(self.hypotheses, dtype=np.float64)
        y = np.asarray(self.losses, dtype=np.float64)
        if x.ndim != 1 or x.shape != y.shape:
            raise ArgumentError("hypotheses and losses must be 1-D and of equal length")
        if x.size < 3:
            raise ArgumentError("a loss curve needs at least 3 hypotheses")
        if not (np.diff(x) > 0).all():
            raise ArgumentError("hypotheses must be strictly increasing")
        if not x[0] <= self.gt <= x[-1]:
            raise ArgumentError(f"gt {self.gt} lies outside [{x[0]}, {x[-1]}]")
        object.__setattr__(self, "hypotheses", x)
        object.__setattr__(self, "losses", y)
        object.__setattr__(self, "gt", float(self.gt))

    def at(self, x: float) -> float:
        """Loss at ``x`` (linear interpolation between hypotheses)."""
        return float(np.interp(x, self.hypotheses, self.losses))


@dataclass(frozen=True)
class FairnessReport:
    curve_baseline: LossCurve
    curve_autoblur: LossCurve
    d_fair_baseline: float
    d_fair_autoblur: float
    fp_exposed: bool | None
    fp_wins_baseline: bool | None
    monotone_radius: float
    monotone_radius_baseline: float
    degenerate: bool
    fp_disparity: float | None = None
    scene: str = ""

    def to_dict(self) -> dict:
        return {
            "scene": self.scene,
            "gt": self.curve_baseline.gt,
            "fp_disparity": self.fp_disparity,
            "hypotheses": self.curve_baseline.hypotheses.tolist(),
            "loss_baseline": self.curve_baseline.losses.tolist(),
            "loss_autoblur": self.curve_autoblur.losses.tolist(),
            "d_fair_baseline": self.d_fair_baseline,
            "d_fair_autoblur": self.d_fair_autoblur,
            "fp_exposed": self.fp_exposed,
            "fp_wins_baseline": self.fp_wins_baseline,
            "monotone_radius": self.monotone_radius,
            "monotone_radius_baseline": self.monotone_radius_baseline,
            "degenerate": self.degenerate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def curves_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["hypothesis", "loss_baseline", "loss_autoblur"])
        for x, a, b in zip(self.curve_baseline.hypotheses, self.curve_baseline.losses,
                           self.curve_autoblur.losses):
            writer.writerow([repr(float(x)), repr(float(a)), repr(float(b))])
        return buf.getvalue()


def _worker_count():
    raw = os.environ.get("FREQLOSS_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ArgumentError(f"FREQLOSS_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ArgumentError("FREQLOSS_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def patch_bounds(center, patch):
    """Row/column slices of the patch around ``center``.

    ``patch`` is an odd side length or a ``(height, width)`` pair; for even
    sizes ``center`` is the upper/left of the two middle pixels.
    """
    if np.ndim(patch) == 0:
        if int(patch) < 1 or int(patch) % 2 == 0:
            raise ArgumentError(f"square patch side must be odd and >= 1, got {patch}")
        ph = pw = int(patch)
    else:
        ph, pw = (int(p) for p in patch)
        if ph < 1 or pw < 1:
            raise ArgumentError(f"patch dimensions must be >= 1, got {patch}")
    r0 = int(center[0]) - (ph - 1) // 2
    c0 = int(center[1]) - (pw - 1) // 2
    return slice(r0, r0 + ph), slice(c0, c0 + pw)


def loss_sweep(target, source, center, patch, hypotheses, cfg: LossConfig = LossConfig(),
               blur: AutoBlurConfig | None = None, gt: float | None = None, sign: int = 1) -> LossCurve:
    """Mean photometric loss over a patch for each disparity hypothesis.

    For hypothesis ``d`` the patch is reconstructed from ``source`` with the
    rectified sampler ``(u - sign * d, v)``.  The loss map is evaluated on
    the patch plus a one-pixel margin, so the SSIM windows see real
    neighbours.  With ``blur`` set, both images are auto-blurred first.
    ``gt`` is stored on the returned curve; it defaults to the first hypothesis.
    """
    target = as_image(target)
    source = as_image(source)
    require_same_shape(target[..., :1], source[..., :1], "target and source")
    if target.shape[2] != source.shape[2]:
        raise ArgumentError("target and source must have the same channel count")
    hyps = np.asarray(hypotheses, dtype=np.float64)
    if hyps.ndim != 1 or hyps.size < 3 or not (np.diff(hyps) > 0).all():
        raise ArgumentError("hypotheses must be a strictly increasing 1-D sequence of length >= 3")
    if blur is not None:
        target, _ = auto_blur(target, blur)
        source, _ = auto_blur(source, blur)

    rs, cs = patch_bounds(center, patch)
    h, w = target.shape[:2]
    R0, R1, C0, C1 = rs.start - 1, rs.stop + 1, cs.start - 1, cs.stop + 1
    if R0 < 0 or C0 < 0 or R1 > h or C1 > w:
        raise DomainError(f"patch {rs.start}:{rs.stop} x {cs.start}:{cs.stop} (plus 1px margin) leaves the target")
    tgt = target[R0:R1, C0:C1]
    rows, cols = np.mgrid[R0:R1, C0:C1].astype(np.float64)

    def one(d):
        sampler = np.stack([cols - sign * d, rows], axis=-1)
        recon, valid = bilinear_sample(source, sampler, border="clamp")
        if not valid.all():
            raise DomainError(f"patch leaves the source image at hypothesis {d:g}")
        loss = photometric_loss_map(tgt, recon, cfg)
        return float(loss[1:-1, 1:-1].mean())

    workers = min(_worker_count(), hyps.size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            losses = list(pool.map(one, hyps))
    else:
        losses = [one(d) for d in hyps]
    return LossCurve(hyps, np.array(losses), hyps[0] if gt is None else gt)


def fairness_degree(curve: LossCurve | None = None, *, hypotheses=None, losses=None, gt=None) -> float:
    """Share of the hypothesis range on which the slope points away from gt.

    Each interval ``[x_i, x_i+1]`` passes when
    ``(L_i+1 - L_i) * (midpoint - gt) > 0``; passing intervals are weighted
    by their length, so on a uniform grid this is passed / total intervals.
    """
    if curve is not None:
        hypotheses, losses, gt = curve.hypotheses, curve.losses, curve.gt
    x = np.asarray(hypotheses, dtype=np.float64)
    y = np.asarray(losses, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise ArgumentError("fairness degree needs at least 2 hypotheses with matching losses")
    if not (np.diff(x) > 0).all():
        raise ArgumentError("hypotheses must be strictly increasing")
    widths = np.diff(x)
    mids = (x[:-1] + x[1:]) / 2.0
    ok = np.diff(y) * (mids - float(gt)) > 0
    return float(widths[ok].sum() / widths.sum())


def monotone_radius(curve: LossCurve) -> float:
    """Largest r such that the loss strictly increases with |x - gt| for |x - gt| <= r.

    Hypotheses are grouped by distance to gt; every group must lie strictly
    above all nearer groups.  Returns the distance of the last group that
    passes (the nearest group always passes).
    """
    dist = np.abs(curve.hypotheses - curve.gt)
    order = np.argsort(dist, kind="stable")
    dist, loss = dist[order], curve.losses[order]
    radius = float(dist[0])
    best_below = -np.inf
    i = 0
    while i < dist.size:
        j = i
        while j < dist.size and dist[j] == dist[i]:
            j += 1
        group = loss[i:j]
        if group.min() <= best_below:
            break
        radius = float(dist[i])
        best_below = max(best_below, group.max())
        i = j
    return radius


def fig5_configs(l: int):
    """Loss and blur settings for the block-pattern showcase: plain L1 and the block preset."""
    return LossConfig(alpha=0.0), AutoBlurConfig.block_preset(l)


def compare_landscapes(scene, hypotheses=None, loss_cfg: LossConfig | None = None,
                       blur_cfg: AutoBlurConfig | None = None, patch=None) -> FairnessReport:
    """Sweep ``scene`` without and with Auto-Blur and summarise both landscapes."""
    if hypotheses is None:
        hypotheses = scene.hypotheses if scene.hypotheses is not None else DEFAULT_HYPOTHESES
    loss_cfg = loss_cfg or LossConfig()
    blur_cfg = blur_cfg or AutoBlurConfig()
    patch = scene.patch if patch is None else patch
    gt = float(scene.gt_disparity)
    base = loss_sweep(scene.target, scene.source, scene.probe, patch, hypotheses, loss_cfg, gt=gt)
    blurred = loss_sweep(scene.target, scene.source, scene.probe, patch, hypotheses, loss_cfg,
                         blur=blur_cfg, gt=gt)
    fp = scene.fp_disparity
    fp_exposed = fp_wins = None
    if fp is not None and base.hypotheses[0] <= fp <= base.hypotheses[-1]:
        fp_exposed = blurred.at(fp) > blurred.at(gt)
        fp_wins = base.at(fp) < base.at(gt)
    degenerate = bool(np.ptp(base.losses) <= 1e-12 and np.ptp(blurred.losses) <= 1e-12)
    return FairnessReport(
        curve_baseline=base, curve_autoblur=blurred,
        d_fair_baseline=fairness_degree(base), d_fair_autoblur=fairness_degree(blurred),
        fp_exposed=fp_exposed, fp_wins_baseline=fp_wins,
        monotone_radius=monotone_radius(blurred), monotone_radius_baseline=monotone_radius(base),
        degenerate=degenerate, fp_disparity=fp, scene=scene.name,
    )
