import pytest

from shapetalk.features import FEATURE_NAMES, FeatureVector, rgb_to_ycbcr
from shapetalk.grounding import FuzzyPartition, FuzzyTree, TreeNode
from shapetalk.lexicon import default_lexicon
from shapetalk.scenes import Scene, SceneConfig, ShapeSpec


def make_fv(**overrides) -> FeatureVector:
    """Feature vector with every field 0.5 unless overridden."""
    d = {name: 0.5 for name in FEATURE_NAMES}
    d.update(overrides)
    return FeatureVector(tuple(d[name] for name in FEATURE_NAMES))


def consistent_fv(rng, **overrides) -> FeatureVector:
    """Random feature vector whose y/cb/cr stay consistent with r/g/b."""
    d = {n: float(rng.uniform(0, 1)) for n in FEATURE_NAMES}
    d["ell_orient"] = float(rng.uniform(-1.57, 1.57))
    d["hw_ratio"] = float(rng.uniform(0.3, 3.0))
    d.update(overrides)
    y, cb, cr = rgb_to_ycbcr(d["r"] * 255, d["g"] * 255, d["b"] * 255)
    d["y"], d["cb"], d["cr"] = y / 255, cb / 255, cr / 255
    return FeatureVector(tuple(d[name] for name in FEATURE_NAMES))


def leaf_tree(class_id, degrees, default=None):
    """Depth-0 tree with fixed word degrees (not ungrounded)."""
    words = tuple(sorted(degrees))
    return FuzzyTree(class_id, words, TreeNode(dict(degrees)), {},
                     default or max(sorted(degrees), key=lambda w: degrees[w]))


def split_tree(class_id, feature, peaks, leaf_degrees, default):
    """Depth-1 tree splitting one feature; leaf_degrees is one dict per term."""
    words = tuple(sorted(leaf_degrees[0]))
    part = FuzzyPartition(feature, tuple(peaks))
    children = tuple(TreeNode(dict(d)) for d in leaf_degrees)
    n = len(words)
    root = TreeNode({w: 1.0 / n for w in words}, feature, children)
    return FuzzyTree(class_id, words, root, {feature: part}, default)


def single_shape_scene(kind="square", size=(40, 40), center=(100, 100),
                       color=(200, 30, 30), canvas=(200, 200), scene_id="t"):
    shape = ShapeSpec(0, kind, color, center, size, 0)
    return Scene(scene_id, canvas[0], canvas[1], (shape,), 0)


@pytest.fixture
def lexicon():
    return default_lexicon()


@pytest.fixture
def small_config():
    """Small canvas for fast scene generation in tests."""
    return SceneConfig(width=320, height=240, n_shapes=(3, 6), size_range=(30, 90))
