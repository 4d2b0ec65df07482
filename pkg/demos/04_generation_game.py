"""One full game round: ambiguity-aware generation, then guessing.

Recreates the classic hard case (two green circles, one in front) and shows
method 1 (no ambiguity check) against method 3 (escalates until unambiguous).
"""

from pathlib import Path

import numpy as np

from shapetalk import SceneConfig, TABLE1, default_lexicon, generate_scene
from shapetalk.features import scene_features
from shapetalk.generation import generate_description, guess, oracle_describe
from shapetalk.grounding import Hyperparams, train_grounded_model
from shapetalk.lexicon import PatternTable
from shapetalk.scenes import PALETTE, Scene, ShapeSpec, raster_to_png_bytes, rasterize

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# train a model (same recipe as demo 03, smaller)
config = SceneConfig(width=560, height=420)
scenes = [generate_scene(config, 7000 + i) for i in range(120)]
rng = np.random.default_rng(1)
rows = [{"scene_id": s.id,
         "object_id": (t := int(rng.choice([sp.id for sp in s.shapes]))),
         "text": oracle_describe(s, t, TABLE1, seed=k, misspell_rate=0.03),
         "source": "oracle"}
        for k in range(6) for s in scenes]
model = train_grounded_model(rows, scenes, default_lexicon(), Hyperparams(seed=0))

# the hard scene: two same-lightness green circles, smaller one in front
green = PALETTE["green"]
back = ShapeSpec(0, "circle", tuple(int(v * 0.85) for v in green), (170, 210), (150, 150), 0)
front = ShapeSpec(1, "circle", tuple(min(int(v * 0.85) + 4, 255) for v in green),
                  (150, 195), (80, 80), 1)
scene = Scene("two-green-circles", 560, 420, (back, front), selected=1)
(OUT / "two_green_circles.png").write_bytes(raster_to_png_bytes(rasterize(scene)))
print(f"scene written to {OUT / 'two_green_circles.png'} (target: front circle)")

objects = sorted(scene_features(scene).items())
table = PatternTable((
    ((7, 3), 0.19), ((1, 7, 3), 0.07), ((1, 3), 0.064), ((3,), 0.058),
    ((5, 7, 3), 0.033), ((1, 7, 3, 4, 1, 6), 0.025), ((1, 7, 3, 4, 1, 2), 0.02),
))

for method in (1, 3):
    r = generate_description(model, table, objects, scene.selected, tau=0.3, method=method)
    print(f"\nmethod {method}: {r.text!r}")
    print(f"  pattern {r.pattern}, matching {r.mu:.2f}, ambiguity {r.sigma:.2f}, "
          f"{r.patterns_tried} patterns tried, {r.status}")
    guessed, report = guess(model, r.text, objects)
    print(f"  guesser resolves it to object {guessed} "
          f"({'correct' if guessed == scene.selected else 'wrong'})")

print("\nmisspelled input still resolves:")
guessed, report = guess(model, "the grean circl in the front", objects)
print(f"  'the grean circl in the front' -> object {guessed}, "
      f"mu={report.mu:.2f}, corrected words: "
      f"{[w for _, w, _ in report.per_word]}")
