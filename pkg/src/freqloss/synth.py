"""Synthetic scenes with known correspondences.

Disparity convention throughout: the target pixel at column ``u`` matches the
source column ``u - d``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .imgcore import as_image, bilinear_sample, save_image

COLORS = {
    "R": (1.0, 0.0, 0.0),
    "G": (0.0, 1.0, 0.0),
    "B": (0.0, 0.0, 1.0),
}


@dataclass
class StereoScene:
    """A target/source pair plus its ground truth.

    ``probe`` is the (row, col) pixel a landscape sweep looks at and
    ``patch`` the (height, width) of the window around it (for even widths
    the probe is the left of the two centre columns).  ``inconsistent`` marks
    pixels where photometric consistency is broken on purpose; the
    gt-reconstruction check skips them.
    """

    target: np.ndarray
    source: np.ndarray
    gt_disparity: float | np.ndarray
    probe: tuple[int, int]
    patch: tuple[int, int] = (3, 3)
    fp_disparity: float | None = None
    inconsistent: np.ndarray | None = None
    hypotheses: np.ndarray | None = None
    name: str = "scene"
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.target.shape[:2]

    def disparity_map(self) -> np.ndarray:
        if np.ndim(self.gt_disparity) == 0:
            return np.full(self.shape, float(self.gt_disparity))
        return np.asarray(self.gt_disparity, dtype=np.float64)

    def sidecar(self) -> dict:
        gt = float(self.gt_disparity) if np.ndim(self.gt_disparity) == 0 else "map"
        return {
            "name": self.name,
            "gt_disparity": gt,
            "probe": [int(self.probe[0]), int(self.probe[1])],
            "patch": [int(self.patch[0]), int(self.patch[1])],
            "fp_disparity": None if self.fp_disparity is None else float(self.fp_disparity),
            **self.meta,
        }


def save_scene(scene: StereoScene, out_dir, stem: str = "scene") -> dict:
    """Write ``<stem>_target.png``, ``<stem>_source.png`` and ``<stem>.json``.

    A disparity map that is not constant is written as ``<stem>_disparity.pfm``.
    Returns the paths written.
    """
    out_dir = os.fspath(out_dir)
    paths = {
        "target": os.path.join(out_dir, f"{stem}_target.png"),
        "source": os.path.join(out_dir, f"{stem}_source.png"),
        "sidecar": os.path.join(out_dir, f"{stem}.json"),
    }
    save_image(scene.target, paths["target"])
    save_image(scene.source, paths["source"])
    meta = scene.sidecar()
    if np.ndim(scene.gt_disparity) != 0:
        paths["disparity"] = os.path.join(out_dir, f"{stem}_disparity.pfm")
        save_image(scene.disparity_map(), paths["disparity"])
        meta["disparity_file"] = os.path.basename(paths["disparity"])
    with open(paths["sidecar"], "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


# ---------------------------------------------------------------------------
# anti-aliased edges

def make_antialiased_edge(width: int, height: int, edge_col: int, ramp_width: int,
                          low: float = 0.0, high: float = 1.0) -> np.ndarray:
    """Vertical edge: ``low`` left of ``edge_col``, a linear ramp, then ``high``.

    Ramp pixels take ``low + (high - low) * k / (ramp_width + 1)`` for
    ``k = 1..ramp_width``.  At least one plain pixel is kept on each side.
    """
    if ramp_width < 0:
        raise ArgumentError("ramp width must be >= 0")
    if edge_col < 1 or edge_col + ramp_width > width - 1:
        raise ArgumentError(f"ramp of width {ramp_width} at column {edge_col} does not fit in width {width}")
    if height < 1:
        raise ArgumentError("height must be >= 1")
    row = np.full(width, float(high))
    row[:edge_col] = low
    k = np.arange(1, ramp_width + 1)
    row[edge_col:edge_col + ramp_width] = low + (high - low) * k / (ramp_width + 1)
    return np.repeat(row[None, :, None], height, axis=0)


# ---------------------------------------------------------------------------
# Auto-Blur showcase scene

def make_fig5_scene(l: int, background=("G", "B"), fp_offset: int | None = None,
                    gap: float = 0.2, texture: float = 0.3, height: int = 64,
                    gt_disparity: int | None = None) -> StereoScene:
    """Repeated-texture stereo pair with a decoy ("false-positive") match.

    The source row is built from colour blocks of width ``l`` alternating
    between the two ``background`` colours.  One red block is the true
    match, flanked on both sides by two blocks of the first background
    colour; a second red block ``fp_offset`` pixels further left is the
    decoy, flanked by two blocks of the second colour.  The target is the source shifted by the gt disparity, except
    that the probed red block is pure red while its true match in the source
    is dimmed by ``gap``: photometric consistency is broken, so the decoy
    matches better than the truth unless the loss looks at the surroundings.
    Odd rows are scaled by ``1 - texture`` in both views so the whole pattern
    reads as a high-frequency area.
    """
    if l < 1:
        raise ArgumentError("block width must be >= 1")
    if len(background) != 2 or any(c not in COLORS for c in background) or "R" in background:
        raise ArgumentError("background must be two of 'G', 'B' (red is reserved for the matches)")
    if not 0 < gap < 1 or not 0 <= texture < 1:
        raise ArgumentError("gap must lie in (0, 1) and texture in [0, 1)")
    fp_offset = 6 * l if fp_offset is None else int(fp_offset)
    if fp_offset % l or fp_offset < 5 * l:
        # closer than 5 blocks the decoy or its neighbours overlap the true match's surroundings
        raise ArgumentError(f"fp_offset must be a multiple of l and >= 5*l (got {fp_offset} for l={l})")
    gt_d = 2 * l + 2 if gt_disparity is None else int(gt_disparity)
    if gt_d < 2 * l:
        raise ArgumentError("gt disparity must be >= 2*l so the fair range stays at non-negative disparities")

    fp_blocks = fp_offset // l
    margin = 6  # blocks of pattern beyond every region a sweep can reach
    gt_blk = margin + fp_blocks
    n_blocks = gt_blk + margin + (gt_d + 4 * l) // l + 2
    width = n_blocks * l
    first, second = np.array(COLORS[background[0]]), np.array(COLORS[background[1]])
    red = np.array(COLORS["R"])

    blocks = [first if i % 2 == 0 else second for i in range(n_blocks)]
    fp_blk = gt_blk - fp_blocks
    for k in (1, 2):
        blocks[gt_blk - k] = blocks[gt_blk + k] = first
        blocks[fp_blk - k] = blocks[fp_blk + k] = second
    blocks[gt_blk] = red * (1.0 - gap)
    blocks[fp_blk] = red
    src_row = np.repeat(np.array(blocks), l, axis=0)

    cols = np.clip(np.arange(width) - gt_d, 0, width - 1)
    tgt_row = src_row[cols].copy()
    probe_start = gt_blk * l + gt_d
    tgt_row[probe_start:probe_start + l] = red

    source = np.repeat(src_row[None], height, axis=0)
    target = np.repeat(tgt_row[None], height, axis=0)
    source[1::2] *= 1.0 - texture
    target[1::2] *= 1.0 - texture

    inconsistent = np.zeros((height, width), dtype=bool)
    inconsistent[:, probe_start:probe_start + l] = True
    fp_d = gt_d + fp_offset
    probe = (height // 2, probe_start + (l - 1) // 2)
    return StereoScene(
        target=target, source=source, gt_disparity=float(gt_d), probe=probe,
        patch=(3, l), fp_disparity=float(fp_d), inconsistent=inconsistent,
        hypotheses=np.arange(0, fp_d + 2 * l + 1, dtype=np.float64),
        name=f"fig5_l{l}",
        meta={"block_width": l, "background": list(background), "gap": gap, "texture": texture},
    )


# ---------------------------------------------------------------------------
# translation pairs and textures

def random_texture(height: int, width: int, rng, channels: int = 3, smooth: float = 0.0) -> np.ndarray:
    """Uniform noise in [0, 1], optionally box-smoothed ``smooth`` times (3x3)."""
    img = rng.random((height, width, channels))
    for _ in range(int(smooth)):
        pad = np.pad(img, ((1, 1), (1, 1), (0, 0)), mode="edge")
        img = sum(pad[i:i + height, j:j + width] for i in range(3) for j in range(3)) / 9.0
    return img


def make_translation_pair(base, shift: float) -> StereoScene:
    """Target = ``base``; source = ``base`` read at ``u + shift`` (clamp fill)."""
    base = as_image(base)
    h, w = base.shape[:2]
    if abs(shift) >= w / 2:
        raise ArgumentError(f"|shift| must be < width/2 ({w / 2}), got {shift}")
    if float(shift) == int(shift):
        cols = np.clip(np.arange(w) + int(shift), 0, w - 1)
        source = base[:, cols].copy()
    else:
        rows, cc = np.mgrid[0:h, 0:w].astype(np.float64)
        source, _ = bilinear_sample(base, np.stack([cc + shift, rows], axis=-1), border="clamp")
    return StereoScene(target=base.copy(), source=source, gt_disparity=float(shift),
                       probe=(h // 2, w // 2), name="translation",
                       hypotheses=np.arange(0, 16, dtype=np.float64))


def make_flat_scene(height: int = 64, width: int = 96, value: float = 0.5, shift: int = 4) -> StereoScene:
    scene = make_translation_pair(np.full((height, width, 3), value), shift)
    scene.name = "flat"
    return scene


def make_texture_scene(rng, height: int = 64, width: int = 96, shift: int = 4, smooth: int = 0) -> StereoScene:
    scene = make_translation_pair(random_texture(height, width, rng, smooth=smooth), shift)
    scene.name = "texture"
    return scene


# ---------------------------------------------------------------------------
# layered pairs with anti-aliased object boundaries

def _render_layered(width, height, bg_fn, rect, fg_color, shift_fg, shift_bg, supersample):
    """Area-averaged rendering of a constant rectangle over a 1-D background.

    ``bg_fn(x)`` gives background colour at continuous column ``x`` (target
    frame coordinates); the view is offset so that target column ``u`` shows
    the background at ``u + shift_bg`` and the rectangle moved by ``shift_fg``.
    """
    x0, x1, y0, y1 = rect
    ss = supersample
    offs = (np.arange(ss) + 0.5) / ss - 0.5
    xs = (np.arange(width)[:, None] + offs[None, :]).ravel()
    ys = (np.arange(height)[:, None] + offs[None, :]).ravel()
    bg = bg_fn(xs + shift_bg)  # (W*ss, 3)
    in_x = (xs + shift_fg >= x0) & (xs + shift_fg < x1)
    in_y = (ys >= y0) & (ys < y1)
    cover = in_y[:, None] & in_x[None, :]  # (H*ss, W*ss)
    img = np.where(cover[..., None], np.asarray(fg_color)[None, None, :], bg[None, :, :])
    return img.reshape(height, ss, width, ss, 3).mean(axis=(1, 3))


def make_layered_pair(rng, width: int = 64, height: int = 48, supersample: int = 8) -> StereoScene:
    """Bright rectangle in front of a dark textured background, anti-aliased.

    The rectangle sits at a larger integer disparity than the background and
    its edges fall at random sub-pixel positions, so boundary pixels mix
    foreground and background colours differently in the two views.  The gt
    disparity map assigns each pixel to whichever layer covers most of it.
    """
    d_bg = int(rng.integers(1, 4))
    d_fg = d_bg + int(rng.integers(3, 7))
    freqs = rng.uniform(0.15, 0.6, size=3)
    phases = rng.uniform(0, 2 * np.pi, size=3)
    fg = rng.uniform(0.85, 1.0, size=3)

    def bg_fn(x):
        return 0.12 + 0.1 * np.sin(freqs[None, :] * x[:, None] + phases[None, :])

    x0 = rng.uniform(0.3, 0.45) * width
    x1 = rng.uniform(0.6, 0.75) * width
    y0 = rng.uniform(0.2, 0.35) * height
    y1 = rng.uniform(0.65, 0.8) * height
    rect = (x0, x1, y0, y1)
    target = _render_layered(width, height, bg_fn, rect, fg, 0.0, 0.0, supersample)
    # source column u' = u - d shows what target column u shows
    source = _render_layered(width, height, bg_fn, rect, fg, float(d_fg), float(d_bg), supersample)

    def coverage(shift_fg):
        return _render_layered(width, height, lambda x: np.zeros((x.size, 3)), rect, (1.0, 1.0, 1.0),
                               shift_fg, 0.0, supersample)[..., 0]

    cover_t, cover_s = coverage(0.0), coverage(float(d_fg))
    disp = np.where(cover_t >= 0.5, float(d_fg), float(d_bg))
    # a target pixel is consistent when it is pure foreground or pure background
    # and its match in the source shows the same pure layer (not occluded)
    cols = np.arange(width)[None, :] - disp.astype(int)
    inside = cols >= 0
    matched = np.take_along_axis(cover_s, np.clip(cols, 0, width - 1), axis=1)
    pure = (cover_t == 0.0) | (cover_t == 1.0)
    inconsistent = inside & ~(pure & (matched == cover_t))
    return StereoScene(target=target, source=source, gt_disparity=disp,
                       probe=(height // 2, width // 2), name="layered", inconsistent=inconsistent,
                       meta={"d_fg": d_fg, "d_bg": d_bg})
