"""Share of pixels and of photometric loss that falls on ambiguous pixels.

For every pair the target is reconstructed at its ground-truth disparity and
the L1+SSIM loss map is split by the hard ambiguity mask into
"ambiguous" (excluded) and "other" (kept) pixels; invalid samples are
dropped.  Totals are accumulated over the whole batch.
"""
from __future__ import annotations

import csv
import io

import numpy as np

from .ambiguity import AmbiguityConfig, pair_weight_mask
from .errors import ArgumentError
from .geometry import disparity_sampler, reconstruct
from .photometric import LossConfig, photometric_loss_map

FIELDS = ("set", "number_pct", "mean_loss", "loss_pct")


def pair_loss_split(target, source, disparity, amb_cfg: AmbiguityConfig, loss_cfg: LossConfig):
    """Return ``(loss_map, ambiguous, valid)`` for one rectified pair."""
    sampler = disparity_sampler(disparity, shape=np.shape(target)[:2])
    recon, valid = reconstruct(source, sampler)
    _, weights = pair_weight_mask(target, [source], [sampler], AmbiguityConfig(amb_cfg.delta, "hard", amb_cfg.gamma))
    loss = photometric_loss_map(target, recon, loss_cfg)
    return loss, weights == 0, valid > 0


def ambiguity_statistics(pairs, amb_cfg: AmbiguityConfig = AmbiguityConfig(),
                         loss_cfg: LossConfig = LossConfig()) -> list[dict]:
    """Accumulate the two-row table over ``pairs``.

    ``pairs`` yields ``(target, source, disparity)`` triples (disparity may be
    a scalar or a map) or objects with ``target``, ``source`` and
    ``disparity_map()``.
    """
    count = {"ambiguous": 0, "other": 0}
    total = {"ambiguous": 0.0, "other": 0.0}
    n_pairs = 0
    for item in pairs:
        if hasattr(item, "disparity_map"):
            target, source, disp = item.target, item.source, item.disparity_map()
        else:
            target, source, disp = item
        loss, ambiguous, valid = pair_loss_split(target, source, disp, amb_cfg, loss_cfg)
        amb = ambiguous & valid
        oth = ~ambiguous & valid
        count["ambiguous"] += int(amb.sum())
        count["other"] += int(oth.sum())
        total["ambiguous"] += float(loss[amb].sum())
        total["other"] += float(loss[oth].sum())
        n_pairs += 1
    if n_pairs == 0:
        raise ArgumentError("no image pairs given")
    n_all = count["ambiguous"] + count["other"]
    loss_all = total["ambiguous"] + total["other"]
    rows = []
    for name in ("ambiguous", "other"):
        rows.append({
            "set": name,
            "number_pct": 100.0 * count[name] / n_all if n_all else 0.0,
            "mean_loss": total[name] / count[name] if count[name] else 0.0,
            "loss_pct": 100.0 * total[name] / loss_all if loss_all > 0 else 0.0,
        })
    return rows


def stats_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({
            "set": row["set"],
            "number_pct": f"{row['number_pct']:.6f}",
            "mean_loss": f"{row['mean_loss']:.6f}",
            "loss_pct": f"{row['loss_pct']:.6f}",
        })
    return buf.getvalue()
