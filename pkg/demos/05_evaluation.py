"""Method 1 vs method 3 on held-out scenes, with a describer ranking.

A smaller version of the acceptance experiment: oracle corpus, two models on
disjoint splits, then generate-and-guess accuracy per method plus a ranking
against simulated noisy describers.
"""

import numpy as np

from shapetalk import SceneConfig, TABLE1, default_lexicon, generate_scene
from shapetalk.generation import ModelGuesser, evaluate, oracle_describe
from shapetalk.grounding import Hyperparams, train_grounded_model

config = SceneConfig(width=560, height=420)
train_scenes = [generate_scene(config, 7000 + i) for i in range(150)]
held_out = [generate_scene(config, 90_000 + i) for i in range(100)]

rng = np.random.default_rng(5)
rows = [{"scene_id": s.id,
         "object_id": (t := int(rng.choice([sp.id for sp in s.shapes]))),
         "text": oracle_describe(s, t, TABLE1, seed=k, misspell_rate=0.03),
         "source": "oracle"}
        for k in range(6) for s in train_scenes]
half = len(rows) // 2
describer = train_grounded_model(rows[:half], train_scenes, default_lexicon(), Hyperparams(seed=1))
guesser = train_grounded_model(rows[half:], train_scenes, default_lexicon(), Hyperparams(seed=2))

report = evaluate(describer, held_out, ModelGuesser(guesser), TABLE1,
                  methods=(1, 3), tau=0.3, seed=0)
print(f"held-out scenes: {len(held_out)}")
for method, stats in sorted(report.methods.items()):
    print(f"  method {method}: {stats['accuracy']:.1%}")

print("\ndescriber ranking (system methods vs simulated players):")
for i, (name, acc) in enumerate(report.ranking, 1):
    print(f"  #{i} {name:<18} {acc:.1%}")
