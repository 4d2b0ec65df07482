"""Synthetic scenes of overlapping colored shapes and their rasterization.

Scenes are the shared blackboard of the describe/guess games: a handful of
axis-aligned colored shapes with a z-order and one selected object. Rendering
is hard-edged (no anti-aliasing) so segmentation downstream is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from PIL import Image

SHAPE_KINDS = ("circle", "ellipse", "triangle", "rectangle", "square")

BACKGROUND = (245, 245, 245)

# Base RGB per color word (Class 7). Chroma angles are spread out so that
# jittered, luminance-scaled fills stay separable in the CbCr plane; brown
# and orange share a hue direction by nature and are allowed to blend.
PALETTE = {
    "pink": (255, 120, 190),
    "blue": (40, 90, 235),
    "green": (50, 200, 70),
    "orange": (255, 165, 0),
    "red": (225, 30, 40),
    "yellow": (245, 225, 40),
    "purple": (130, 20, 150),
    "violet": (150, 60, 255),
    "brown": (130, 75, 35),
}


class SceneGenerationError(Exception):
    """Raised when a scene cannot be placed within the retry budget."""


@dataclass(frozen=True)
class ShapeSpec:
    id: int
    kind: str
    color: tuple[int, int, int]
    center: tuple[float, float]
    size: tuple[float, float]
    z: int


@dataclass(frozen=True)
class Scene:
    id: str
    width: int
    height: int
    shapes: tuple[ShapeSpec, ...]
    selected: int

    def shape(self, shape_id: int) -> ShapeSpec:
        for s in self.shapes:
            if s.id == shape_id:
                return s
        raise KeyError(f"no shape {shape_id} in scene {self.id}")


@dataclass(frozen=True)
class Raster:
    width: int
    height: int
    pixels: np.ndarray  # (H, W, 3) uint8
    background: tuple[int, int, int] = BACKGROUND


@dataclass(frozen=True)
class SceneConfig:
    width: int = 800
    height: int = 600
    n_shapes: tuple[int, int] = (3, 8)
    overlap_prob: float = 0.45
    twin_prob: float = 0.4
    max_hidden: float = 0.55
    min_visible_px: int = 30
    palette: tuple[str, ...] = tuple(PALETTE)
    jitter: int = 12
    luminance: tuple[float, float] = (0.45, 1.0)
    size_range: tuple[int, int] | None = None  # None: scale with canvas

    def resolved_size_range(self) -> tuple[int, int]:
        if self.size_range is not None:
            return self.size_range
        dim = min(self.width, self.height)
        return max(16, round(0.08 * dim)), round(0.28 * dim)


def shape_mask(spec: ShapeSpec, width: int, height: int) -> np.ndarray:
    """Boolean coverage mask: a pixel is covered iff its center lies inside
    the shape's continuous region (hard-edge rasterization rule)."""
    cx, cy = spec.center
    w, h = spec.size
    mask = np.zeros((height, width), dtype=bool)

    x0 = max(int(np.floor(cx - w / 2)) - 1, 0)
    x1 = min(int(np.ceil(cx + w / 2)) + 1, width)
    y0 = max(int(np.floor(cy - h / 2)) - 1, 0)
    y1 = min(int(np.ceil(cy + h / 2)) + 1, height)
    if x0 >= x1 or y0 >= y1:
        return mask

    xs = np.arange(x0, x1) + 0.5
    ys = np.arange(y0, y1) + 0.5
    px, py = np.meshgrid(xs, ys)

    if spec.kind in ("circle", "ellipse"):
        local = ((px - cx) / (w / 2)) ** 2 + ((py - cy) / (h / 2)) ** 2 <= 1.0
    elif spec.kind in ("rectangle", "square"):
        # half-open span so an integer-sized box covers exactly w*h pixels
        local = (px >= cx - w / 2) & (px < cx + w / 2) & (py >= cy - h / 2) & (py < cy + h / 2)
    elif spec.kind == "triangle":
        # isoceles, apex up
        top = cy - h / 2
        frac = np.clip((py - top) / h, 0.0, 1.0)
        local = (py >= top) & (py < cy + h / 2) & (np.abs(px - cx) <= (w / 2) * frac)
    else:
        raise ValueError(f"unknown shape kind {spec.kind!r}")

    mask[y0:y1, x0:x1] = local
    return mask


def ownership_map(scene: Scene) -> np.ndarray:
    """Per-pixel owning shape id (max z whose geometry covers it), -1 for background."""
    owner = np.full((scene.height, scene.width), -1, dtype=np.int32)
    for spec in sorted(scene.shapes, key=lambda s: s.z):
        owner[shape_mask(spec, scene.width, scene.height)] = spec.id
    return owner


def rasterize(scene: Scene) -> Raster:
    """Paint shapes back-to-front by z on the fixed background. Pure: the
    same scene always yields identical bytes."""
    pixels = np.empty((scene.height, scene.width, 3), dtype=np.uint8)
    pixels[:, :] = BACKGROUND
    for spec in sorted(scene.shapes, key=lambda s: s.z):
        pixels[shape_mask(spec, scene.width, scene.height)] = spec.color
    return Raster(scene.width, scene.height, pixels)


def visible_fractions(scene: Scene) -> dict[int, float]:
    """Fraction of each shape's own pixels left visible under the z-order."""
    owner = ownership_map(scene)
    out = {}
    for spec in scene.shapes:
        own = shape_mask(spec, scene.width, scene.height)
        total = int(own.sum())
        visible = int((owner[own] == spec.id).sum()) if total else 0
        out[spec.id] = visible / total if total else 0.0
    return out


def occlusion_status(scene: Scene, shape_id: int, min_frac: float = 0.04) -> str | None:
    """'background' if another shape hides at least min_frac of this one,
    'front' if this one hides at least min_frac of another, else None.
    Grazing 1-px overlaps carry no usable depth signal and are ignored."""
    spec = scene.shape(shape_id)
    own = shape_mask(spec, scene.width, scene.height)
    own_area = max(int(own.sum()), 1)
    occluded = False
    occludes = False
    for other in scene.shapes:
        if other.id == shape_id:
            continue
        other_mask = shape_mask(other, scene.width, scene.height)
        inter = int((own & other_mask).sum())
        if inter == 0:
            continue
        if other.z > spec.z and inter / own_area >= min_frac:
            occluded = True
        elif other.z < spec.z and inter / max(int(other_mask.sum()), 1) >= min_frac:
            occludes = True
    if occluded:
        return "background"
    if occludes:
        return "front"
    return None


def _luma(rgb) -> float:
    r, g, b = rgb
    return 0.299 * r + 0.587 * g + 0.114 * b


def nearest_palette_color(rgb, palette=None) -> str:
    """Nearest color word by distance to each palette ray in the CbCr plane.

    Fills are generated as luminance-scaled palette colors, which scale the
    chroma vector; matching against the ray (rather than the point) makes the
    word independent of how light or dark the fill is.
    """
    names = sorted(palette) if palette is not None else sorted(PALETTE)
    r, g, b = rgb
    cb = -0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 0.5 * r - 0.418688 * g - 0.081312 * b
    c = np.array([cb, cr])
    best, best_d = None, None
    for name in names:
        pr, pg, pb = PALETTE[name]
        pv = np.array([
            -0.168736 * pr - 0.331264 * pg + 0.5 * pb,
            0.5 * pr - 0.418688 * pg - 0.081312 * pb,
        ])
        t = float(np.dot(c, pv) / np.dot(pv, pv))
        t = min(max(t, 0.2), 1.2)  # factor range with slack for jitter
        d = float(np.linalg.norm(c - t * pv))
        if best_d is None or d < best_d:
            best, best_d = name, d
    return best


def lightness_factor(rgb, palette=None) -> float:
    """Estimated luminance factor of a fill relative to its palette base."""
    base = PALETTE[nearest_palette_color(rgb, palette)]
    return _luma(rgb) / max(_luma(base), 1e-9)


def _bbox_inside(cx, cy, w, h, config) -> bool:
    m = 2
    return (cx - w / 2 >= m and cx + w / 2 <= config.width - m
            and cy - h / 2 >= m and cy + h / 2 <= config.height - m)


def _bboxes_disjoint(a: ShapeSpec, b: ShapeSpec, pad: float = 2.0) -> bool:
    ax, ay = a.center
    aw, ah = a.size
    bx, by = b.center
    bw, bh = b.size
    return (abs(ax - bx) >= (aw + bw) / 2 + pad) or (abs(ay - by) >= (ah + bh) / 2 + pad)


def _sample_size(rng, config, kind):
    lo, hi = config.resolved_size_range()
    w = int(rng.integers(lo, hi + 1))
    if kind in ("square", "circle"):
        return w, w
    # keep non-square kinds clearly non-square so aspect reads unambiguously
    ratio = float(rng.uniform(1.3, 2.2))
    h = int(round(w / ratio)) if rng.random() < 0.5 else int(round(min(w * ratio, hi * 1.3)))
    h = max(h, 10)
    return w, h


def _jittered_fill(rng, config, base_name: str,
                   avoid_factor: float | None = None) -> tuple[tuple[int, int, int], float]:
    base = np.array(PALETTE[base_name], dtype=float)
    factor = float(rng.uniform(*config.luminance))
    if avoid_factor is not None:
        # same-color twins get clearly different lightness so that the
        # light/dark axis stays exercised (and usable) on lookalikes
        for _ in range(20):
            if abs(factor - avoid_factor) >= 0.18:
                break
            factor = float(rng.uniform(*config.luminance))
    jit = rng.integers(-config.jitter, config.jitter + 1, size=3)
    rgb = np.clip(np.round(base * factor) + jit, 0, 255).astype(int)
    return (int(rgb[0]), int(rgb[1]), int(rgb[2])), factor


def generate_scene(config: SceneConfig, seed: int) -> Scene:
    """Generate a random scene satisfying the placement invariants.

    Deterministic for a fixed (config, seed). Raises SceneGenerationError if
    the canvas cannot host the requested shapes within the retry budget.
    """
    rng = np.random.default_rng(np.random.SeedSequence([abs(int(seed)), 0x5C3E]))
    lo, hi = config.n_shapes
    if lo < 1 or hi < lo:
        raise SceneGenerationError(f"empty shape-count range {config.n_shapes}")
    n = int(rng.integers(lo, hi + 1))

    for _ in range(40):  # whole-scene attempts
        shapes = _try_place_all(rng, config, n)
        if shapes is None:
            continue
        shapes = _assign_fills(rng, config, shapes)
        scene = Scene(
            id=f"s{abs(int(seed)):010d}",
            width=config.width,
            height=config.height,
            shapes=tuple(shapes),
            selected=int(rng.choice([s.id for s in shapes])),
        )
        vis = visible_fractions(scene)
        min_px = config.min_visible_px
        areas = {s.id: shape_mask(s, scene.width, scene.height).sum() for s in scene.shapes}
        if all(vis[s.id] >= 1 - config.max_hidden and vis[s.id] * areas[s.id] >= min_px
               for s in scene.shapes):
            return scene
    raise SceneGenerationError(
        f"could not place {n} shapes on {config.width}x{config.height} canvas")


def _try_place_all(rng, config, n):
    shapes: list[ShapeSpec] = []
    for i in range(n):
        placed = None
        for _ in range(200):
            twin_of = None
            if shapes and rng.random() < config.twin_prob:
                twin_of = shapes[int(rng.integers(0, len(shapes)))]
                kind = twin_of.kind
            else:
                kind = str(rng.choice(SHAPE_KINDS))
            w, h = _sample_size(rng, config, kind)
            if twin_of is not None:
                scale = float(rng.uniform(0.8, 1.2))
                w = max(int(round(twin_of.size[0] * scale)), 10)
                h = w if kind in ("square", "circle") else max(int(round(twin_of.size[1] * scale)), 10)

            overlap_host = None
            if shapes and rng.random() < config.overlap_prob:
                overlap_host = twin_of if twin_of is not None else shapes[int(rng.integers(0, len(shapes)))]

            if overlap_host is not None:
                hx, hy = overlap_host.center
                hw, hh = overlap_host.size
                contained = rng.random() < 0.9 and twin_of is None
                if contained:
                    # sit strictly inside the host silhouette: punches a hole
                    w = max(10, int(min(w, 0.5 * min(hw, hh))))
                    h = w if kind in ("square", "circle") else max(10, int(min(h, 0.5 * min(hw, hh))))
                    dx = float(rng.uniform(-1, 1)) * (hw - w) / 2 * 0.5
                    dy = float(rng.uniform(-1, 1)) * (hh - h) / 2 * 0.5
                    if overlap_host.kind == "triangle":
                        dy = abs(dy)  # lower half, where the triangle is wide
                else:
                    # bite-style: hang off one side of the host
                    dx = float(rng.uniform(0.4, 0.8)) * (hw + w) / 2 * (1 if rng.random() < 0.5 else -1)
                    dy = float(rng.uniform(-0.4, 0.4)) * (hh + h) / 2
                cx, cy = hx + dx, hy + dy
                if contained:
                    host_mask = shape_mask(overlap_host, config.width, config.height)
                    cand_mask = shape_mask(
                        ShapeSpec(id=-1, kind=kind, color=(0, 0, 0),
                                  center=(round(cx), round(cy)), size=(w, h), z=0),
                        config.width, config.height)
                    if (cand_mask & ~host_mask).any():
                        continue  # not strictly interior, try again
            else:
                if w + 8 > config.width or h + 8 > config.height:
                    continue
                cx = float(rng.uniform(w / 2 + 2, config.width - w / 2 - 2))
                cy = float(rng.uniform(h / 2 + 2, config.height - h / 2 - 2))

            cx, cy = round(cx), round(cy)
            if not _bbox_inside(cx, cy, w, h, config):
                continue
            cand = ShapeSpec(id=i, kind=kind, color=(0, 0, 0), center=(cx, cy), size=(w, h), z=i)
            if overlap_host is None and not all(_bboxes_disjoint(cand, s) for s in shapes):
                continue
            placed = cand
            break
        if placed is None:
            return None
        shapes.append(placed)
    return shapes


def _assign_fills(rng, config, shapes):
    """Pick per-shape fills: twins share a base color; all post-jitter RGBs
    are kept pairwise distinct (L-inf > 2) so color segmentation is exact."""
    base_names: list[str] = []
    for i, s in enumerate(shapes):
        same = [j for j in range(i) if shapes[j].kind == s.kind
                and abs(shapes[j].size[0] - s.size[0]) <= s.size[0] * 0.25]
        if same and rng.random() < 0.8:
            base_names.append(base_names[same[-1]])
        else:
            base_names.append(str(rng.choice(list(config.palette))))

    filled: list[ShapeSpec] = []
    colors: list[tuple[int, int, int]] = []
    factors: list[float] = []
    for i, (s, name) in enumerate(zip(shapes, base_names)):
        siblings = [j for j in range(i) if base_names[j] == name]
        avoid = factors[siblings[-1]] if siblings else None
        for _ in range(50):
            rgb, factor = _jittered_fill(rng, config, name, avoid_factor=avoid)
            if all(max(abs(rgb[k] - c[k]) for k in range(3)) > 2 for c in colors):
                break
        colors.append(rgb)
        factors.append(factor)
        filled.append(replace(s, color=rgb))
    return filled


# --- serialization ----------------------------------------------------------

def scene_to_dict(scene: Scene) -> dict:
    return {
        "id": scene.id,
        "width": scene.width,
        "height": scene.height,
        "selected": scene.selected,
        "shapes": [
            {
                "id": s.id,
                "kind": s.kind,
                "color": list(s.color),
                "center": list(s.center),
                "size": list(s.size),
                "z": s.z,
            }
            for s in scene.shapes
        ],
    }


def scene_from_dict(d: dict) -> Scene:
    shapes = tuple(
        ShapeSpec(
            id=int(s["id"]),
            kind=s["kind"],
            color=tuple(int(v) for v in s["color"]),
            center=tuple(float(v) for v in s["center"]),
            size=tuple(float(v) for v in s["size"]),
            z=int(s["z"]),
        )
        for s in d["shapes"]
    )
    return Scene(id=d["id"], width=int(d["width"]), height=int(d["height"]),
                 shapes=shapes, selected=int(d["selected"]))


def scene_to_json(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), sort_keys=True, separators=(",", ":"))


def save_scenes(scenes, path) -> None:
    with open(path, "w") as fh:
        for scene in scenes:
            fh.write(scene_to_json(scene) + "\n")


def load_scenes(path) -> list[Scene]:
    scenes = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                scenes.append(scene_from_dict(json.loads(line)))
    return scenes


def raster_to_png_bytes(raster: Raster) -> bytes:
    import io

    buf = io.BytesIO()
    Image.fromarray(raster.pixels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
