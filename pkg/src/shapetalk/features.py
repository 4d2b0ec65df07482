"""Region segmentation and the 21-value per-object feature vector.

Works on hard-edged rasters: every object is a flat-colored pixel region, so
exact-color connected components plus same-color grouping recover the shapes
without any edge detection. A ground-truth mode (driven by the originating
scene's z-order) exists for controlled comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .scenes import Raster, Scene, ownership_map, rasterize

FEATURE_NAMES = (
    "r", "g", "b",
    "y", "cb", "cr",
    "bbox_x0", "bbox_y0", "bbox_x1", "bbox_y1",
    "width", "height",
    "cg_x", "cg_y",
    "ell_orient", "major", "minor",
    "ext", "hw_ratio", "area", "holes",
)

MIN_REGION_PX = 30

_FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class RegionMask:
    region_id: int
    mask: np.ndarray  # (H, W) bool
    color: tuple[int, int, int]

    @property
    def area(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]

    def __getattr__(self, name):
        try:
            return self.values[FEATURE_NAMES.index(name)]
        except ValueError:
            raise AttributeError(name) from None

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureVector":
        return cls(tuple(float(d[name]) for name in FEATURE_NAMES))


def rgb_to_ycbcr(r: float, g: float, b: float) -> tuple[float, float, float]:
    """BT.601 full-range conversion, channels in [0, 255], output clamped."""
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128 + 0.5 * r - 0.418688 * g - 0.081312 * b
    clamp = lambda v: min(max(v, 0.0), 255.0)
    return clamp(y), clamp(cb), clamp(cr)


def segment(raster: Raster, mode: str = "color_regions", scene: Scene | None = None) -> list[RegionMask]:
    """Partition non-background pixels into per-object masks.

    color_regions: exact-color 4-connected components; components whose fill
    colors agree to within 2 per channel are grouped into one region, which
    re-joins parts of a shape split by an occluder.

    ground_truth: one mask per visible shape from the scene's z-order pixel
    ownership (region_id is the shape id).

    Regions under MIN_REGION_PX pixels are discarded in both modes.
    """
    if mode == "ground_truth":
        if scene is None:
            raise ValueError("ground_truth mode needs the originating scene")
        owner = ownership_map(scene)
        regions = []
        for spec in scene.shapes:
            mask = owner == spec.id
            if mask.sum() >= MIN_REGION_PX:
                regions.append(RegionMask(spec.id, mask, spec.color))
        return regions
    if mode != "color_regions":
        raise ValueError(f"unknown segmentation mode {mode!r}")

    px = raster.pixels
    bg = np.array(raster.background, dtype=np.uint8)
    fg = np.any(px != bg, axis=2)
    if not fg.any():
        return []

    # group pixels by exact fill color
    flat = px[fg].astype(np.uint32)
    keys = (flat[:, 0] << 16) | (flat[:, 1] << 8) | flat[:, 2]
    colors = np.unique(keys)

    comp_masks: list[np.ndarray] = []
    comp_colors: list[tuple[int, int, int]] = []
    key_img = np.zeros(fg.shape, dtype=np.uint32)
    key_img[fg] = keys
    for key in colors:
        labeled, n = ndimage.label(fg & (key_img == key), structure=_FOUR_CONN)
        rgb = (int(key >> 16), int((key >> 8) & 0xFF), int(key & 0xFF))
        for lab in range(1, n + 1):
            comp_masks.append(labeled == lab)
            comp_colors.append(rgb)

    # union components with near-identical fills (<= 2 per channel); an
    # occluder splitting a shape leaves parts with the same fill color
    parent = list(range(len(comp_masks)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(comp_masks)):
        for j in range(i + 1, len(comp_masks)):
            if max(abs(a - b) for a, b in zip(comp_colors[i], comp_colors[j])) <= 2:
                parent[find(j)] = find(i)

    groups: dict[int, list[int]] = {}
    for i in range(len(comp_masks)):
        groups.setdefault(find(i), []).append(i)

    regions = []
    for members in groups.values():
        mask = np.zeros(fg.shape, dtype=bool)
        for i in members:
            mask |= comp_masks[i]
        if mask.sum() < MIN_REGION_PX:
            continue
        # dominant fill = color of the largest member component
        biggest = max(members, key=lambda i: comp_masks[i].sum())
        regions.append(RegionMask(0, mask, comp_colors[biggest]))

    # deterministic ids by topmost-leftmost pixel
    def anchor(region):
        rows, cols = np.nonzero(region.mask)
        k = np.argmin(rows * fg.shape[1] + cols)
        return int(rows[k]), int(cols[k])

    regions.sort(key=anchor)
    return [RegionMask(i, r.mask, r.color) for i, r in enumerate(regions)]


def moment_ellipse(mask: np.ndarray) -> tuple[float, float, float]:
    """Orientation and axis lengths of the ellipse with the same second
    central moments as the pixel set. Lengths are in pixels (full axes);
    orientation is in [-pi/2, pi/2], 0 = major axis along x.
    """
    rows, cols = np.nonzero(mask)
    if rows.size < 2:
        raise ValueError("moment ellipse needs at least 2 pixels")
    x = cols - cols.mean()
    y = rows - rows.mean()
    # 1/12 restores the moment of the unit pixel footprint
    mu20 = float((x * x).mean()) + 1 / 12
    mu02 = float((y * y).mean()) + 1 / 12
    mu11 = float((x * y).mean())

    common = math.sqrt((mu20 - mu02) ** 2 + 4 * mu11 * mu11)
    lam1 = (mu20 + mu02 + common) / 2
    lam2 = (mu20 + mu02 - common) / 2
    orientation = 0.5 * math.atan2(2 * mu11, mu20 - mu02)
    major = 4 * math.sqrt(max(lam1, 0.0))
    minor = 4 * math.sqrt(max(lam2, 1 / 12))  # collinear sets clamp to ~1px
    return orientation, major, minor


def extract_features(region: RegionMask, raster: Raster) -> FeatureVector:
    """Compute the 21 normalized features for one region."""
    mask = region.mask
    if not mask.any():
        raise ValueError("empty region mask")
    H, W = mask.shape
    if (H, W) != (raster.height, raster.width):
        raise ValueError("mask dimensions do not match raster")

    rows, cols = np.nonzero(mask)
    npx = rows.size

    mean_rgb = raster.pixels[mask].mean(axis=0)
    r, g, b = (float(v) for v in mean_rgb)
    y, cb, cr = rgb_to_ycbcr(r, g, b)

    x0, x1 = int(cols.min()), int(cols.max()) + 1
    y0, y1 = int(rows.min()), int(rows.max()) + 1
    bw = max(x1 - x0, 1)
    bh = max(y1 - y0, 1)

    orientation, major_px, minor_px = moment_ellipse(mask)
    diagonal = math.hypot(W, H)

    # holes live inside the bbox, so fill on the crop
    filled = ndimage.binary_fill_holes(mask[y0:y1, x0:x1])
    filled_area = int(filled.sum())

    values = (
        r / 255, g / 255, b / 255,
        y / 255, cb / 255, cr / 255,
        x0 / W, y0 / H, x1 / W, y1 / H,
        bw / W, bh / H,
        (float(cols.mean()) + 0.5) / W, (float(rows.mean()) + 0.5) / H,
        orientation,
        major_px / diagonal, minor_px / diagonal,
        npx / (bw * bh),
        bh / bw,
        npx / (W * H),
        1 - npx / filled_area,
    )
    return FeatureVector(values)


def scene_features(scene: Scene, raster: Raster | None = None) -> dict[int, FeatureVector]:
    """Feature vectors of every visible shape, keyed by shape id (ground-truth
    masks; shapes hidden below the minimum region size are absent)."""
    raster = raster if raster is not None else rasterize(scene)
    return {
        region.region_id: extract_features(region, raster)
        for region in segment(raster, "ground_truth", scene)
    }
