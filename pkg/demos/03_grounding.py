"""Training fuzzy-tree word models from an oracle-written corpus.

Builds a training world, trains the grounded model, and plots each color
word's membership over the CbCr plane plus the learned light/dark split.
"""

from pathlib import Path

import numpy as np

from shapetalk import SceneConfig, TABLE1, default_lexicon, generate_scene
from shapetalk.features import FEATURE_NAMES, FeatureVector
from shapetalk.generation import oracle_describe
from shapetalk.grounding import Hyperparams, train_grounded_model

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

config = SceneConfig(width=560, height=420)
scenes = [generate_scene(config, 7000 + i) for i in range(120)]
rng = np.random.default_rng(1)
rows = []
for k in range(6):
    for scene in scenes:
        target = int(rng.choice([s.id for s in scene.shapes]))
        rows.append({
            "scene_id": scene.id,
            "object_id": target,
            "text": oracle_describe(scene, target, TABLE1, seed=k, misspell_rate=0.03),
            "source": "oracle",
        })
print(f"corpus: {len(rows)} oracle descriptions over {len(scenes)} scenes")
print("sample:", ", ".join(repr(r["text"]) for r in rows[:5]))

model = train_grounded_model(rows, scenes, default_lexicon(), Hyperparams(seed=0))
print("\nselected features per class (ungrounded classes show none):")
for cid, feats in model.selected_features().items():
    print(f"  class {cid}: {' '.join(feats) if feats else '--'}")

def fv_with(**kw):
    d = {n: 0.5 for n in FEATURE_NAMES}
    d.update(kw)
    return FeatureVector(tuple(d[n] for n in FEATURE_NAMES))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # color words over the CbCr plane
    cb = np.linspace(0.2, 0.8, 120)
    cr = np.linspace(0.2, 0.8, 120)
    tree7 = model.trees[7]
    best = np.zeros((len(cr), len(cb)))
    for i, v in enumerate(cr):
        for j, u in enumerate(cb):
            best[i, j] = int(np.argmax(tree7.mu_vector(fv_with(cb=u, cr=v))))
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
    im = axes[0].imshow(best, origin="lower", extent=[0.2, 0.8, 0.2, 0.8], cmap="tab10")
    axes[0].set_xlabel("cb")
    axes[0].set_ylabel("cr")
    axes[0].set_title("winning color word over CbCr")

    gs = np.linspace(0, 1, 300)
    tree5 = model.trees[5]
    if not tree5.ungrounded:
        for word in ("light", "dark"):
            axes[1].plot(gs, [tree5.membership(word, fv_with(g=g, y=g)) for g in gs], label=word)
        axes[1].legend()
    axes[1].set_xlabel("mean green channel")
    axes[1].set_title("light/dark memberships")
    fig.tight_layout()
    fig.savefig(OUT / "memberships.png", dpi=110)
    print(f"\nmembership plots written to {OUT / 'memberships.png'}")
except ImportError:
    print("matplotlib not available; skipping plots")
