"""Fuzzy-decision-tree grounding of word classes in shape features.

Each word class gets one tree over the 21 shape features. Splits route
examples fractionally through triangular strong partitions; leaves carry a
degree per word of the class. Cross-validated depth pruning doubles as the
per-class feature selection: whatever features survive in the pruned tree are
the class's projection. Classes whose pruned tree is a bare root are
ungrounded: every word matches with degree 1 and generation falls back to the
most frequent word.
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .features import FEATURE_NAMES, FeatureVector, scene_features
from .lexicon import Lexicon, ParseError, parse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FuzzyPartition:
    """Triangular strong partition of a feature's observed range.

    Term k peaks at peaks[k]; side terms are shoulders (membership 1 beyond
    the range ends), so memberships sum to 1 everywhere.
    """

    feature: str
    peaks: tuple[float, ...]

    @property
    def n_terms(self) -> int:
        return len(self.peaks)

    def memberships(self, x: float) -> np.ndarray:
        p = self.peaks
        out = np.zeros(len(p))
        if len(p) == 1:
            out[0] = 1.0
            return out
        if x <= p[0]:
            out[0] = 1.0
            return out
        if x >= p[-1]:
            out[-1] = 1.0
            return out
        k = int(np.searchsorted(p, x, side="right")) - 1
        span = p[k + 1] - p[k]
        t = (x - p[k]) / span
        out[k] = 1.0 - t
        out[k + 1] = t
        return out


def fuzzify(values, n_terms: int = 3) -> FuzzyPartition:
    """Partition with peaks at evenly spaced quantiles of the observed values.
    Collapsed quantiles are deduplicated; a constant feature yields a single
    always-on term."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError("cannot fuzzify an empty sample")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    qs = np.linspace(0.0, 1.0, n_terms)
    peaks = np.unique(np.quantile(arr, qs))
    return FuzzyPartition("", tuple(float(p) for p in peaks))


@dataclass(frozen=True)
class TreeNode:
    degrees: dict  # word -> degree at this node (sums to 1)
    feature: str | None = None
    children: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(c.depth() for c in self.children)

    def features_used(self) -> set[str]:
        if self.is_leaf:
            return set()
        used = {self.feature}
        for c in self.children:
            used |= c.features_used()
        return used


@dataclass(frozen=True)
class FuzzyTree:
    class_id: int
    words: tuple[str, ...]
    root: TreeNode
    partitions: dict  # feature -> FuzzyPartition
    default: str
    ungrounded: bool = False

    @property
    def selected_features(self) -> tuple[str, ...]:
        used = self.root.features_used()
        return tuple(f for f in FEATURE_NAMES if f in used)

    def membership(self, word: str, fv: FeatureVector) -> float:
        """Degree to which the word's soft constraint holds for the features.

        Ungrounded classes return 1 for every word: such words restrict
        nothing, they only fill syntax slots.
        """
        if word not in self.words:
            raise KeyError(f"word {word!r} not in class {self.class_id}")
        if self.ungrounded:
            return 1.0
        return float(self.mu_vector(fv)[self.words.index(word)])

    def mu_vector(self, fv: FeatureVector) -> np.ndarray:
        """Membership of every class word (aligned with self.words)."""
        if self.ungrounded:
            return np.ones(len(self.words))
        return self._vec(self.root, fv, 1.0)

    def _vec(self, node: TreeNode, fv: FeatureVector, weight: float) -> np.ndarray:
        if node.is_leaf:
            return weight * np.array([node.degrees.get(w, 0.0) for w in self.words])
        ms = self.partitions[node.feature].memberships(fv[node.feature])
        total = np.zeros(len(self.words))
        for m, child in zip(ms, node.children):
            if m > 0:
                total = total + self._vec(child, fv, weight * m)
        return total

    def classify(self, fv: FeatureVector) -> str:
        if self.ungrounded:
            return self.default
        # words are kept sorted, so argmax tie-break is lexicographic
        return self.words[int(np.argmax(self.mu_vector(fv)))]


@dataclass
class Hyperparams:
    n_terms: int = 3
    max_depth: int = 4
    k_folds: int = 5
    purity: float = 0.95
    min_weight: float = 1.0
    seed: int = 0


@dataclass
class TrainingSet:
    """Per-class (features, word) pairs plus row-level diagnostics."""

    by_class: dict = field(default_factory=dict)  # class id -> list[(FeatureVector, word)]
    skipped: list = field(default_factory=list)

    def examples(self, class_id: int):
        return self.by_class.get(class_id, [])


def build_training_set(corpus_rows, scenes, lexicon: Lexicon) -> TrainingSet:
    """One (object features, word) pair per parsed constraint per corpus row.

    corpus_rows: dicts with scene_id, object_id, text. scenes: mapping or list
    of Scene. Rows referencing unknown scenes/objects or failing to parse are
    skipped with a diagnostic.
    """
    if not isinstance(scenes, dict):
        scenes = {s.id: s for s in scenes}
    feature_cache: dict[str, dict[int, FeatureVector]] = {}
    ts = TrainingSet({cid: [] for cid in range(1, 8)})

    for row in corpus_rows:
        sid, oid = row["scene_id"], int(row["object_id"])
        scene = scenes.get(sid)
        if scene is None:
            ts.skipped.append((row, "unknown scene"))
            continue
        if sid not in feature_cache:
            feature_cache[sid] = scene_features(scene)
        fv = feature_cache[sid].get(oid)
        if fv is None:
            ts.skipped.append((row, "object not visible in scene"))
            continue
        try:
            desc = parse(row["text"], lexicon)
        except ParseError as exc:
            ts.skipped.append((row, str(exc)))
            continue
        for c in desc.constraints:
            ts.by_class.setdefault(c.class_id, []).append((fv, c.word))
    if ts.skipped:
        logger.info("training set: skipped %d corpus rows", len(ts.skipped))
    return ts


def _entropy_rows(label_w: np.ndarray) -> float:
    total = label_w.sum()
    if total <= 0:
        return 0.0
    p = label_w[label_w > 0] / total
    return float(-(p * np.log(p)).sum())


def learn_tree(examples, partitions, class_id: int, words=None,
               max_depth: int = 4, purity: float = 0.95, min_weight: float = 1.0) -> FuzzyTree:
    """Fuzzy-ID3 induction: at each node pick the feature with maximal fuzzy
    information gain over the example weights; route weight into children by
    term membership; stop at max_depth, purity, or starved weight."""
    examples = list(examples)
    if not examples:
        raise ValueError("cannot learn from an empty training set")
    words = tuple(sorted(words)) if words else tuple(sorted({w for _, w in examples}))
    widx = {w: i for i, w in enumerate(words)}
    labels = np.array([widx[w] for _, w in examples])
    onehot = np.zeros((len(examples), len(words)))
    onehot[np.arange(len(examples)), labels] = 1.0
    mships = {
        f: np.array([partitions[f].memberships(fv[f]) for fv, _ in examples])
        for f in partitions
    }
    split_feats = [f for f in FEATURE_NAMES if f in partitions and partitions[f].n_terms >= 2]

    def to_degrees(label_w: np.ndarray) -> dict:
        total = label_w.sum()
        if total <= 0:
            return {w: 1.0 / len(words) for w in words}
        return {w: float(label_w[i] / total) for w, i in widx.items()}

    def build(weights: np.ndarray, used: frozenset, depth: int) -> TreeNode:
        wsum = float(weights.sum())
        label_w = weights @ onehot
        degrees = to_degrees(label_w)
        if depth >= max_depth or wsum < min_weight:
            return TreeNode(degrees)
        if label_w.max() / max(wsum, 1e-12) >= purity:
            return TreeNode(degrees)

        base_h = _entropy_rows(label_w)
        best_f, best_gain = None, 1e-12
        for f in split_feats:
            if f in used:
                continue
            # (terms, labels) weight table under the candidate split
            table = (mships[f] * weights[:, None]).T @ onehot
            h = sum((row.sum() / wsum) * _entropy_rows(row) for row in table)
            gain = base_h - h
            if gain > best_gain:
                best_f, best_gain = f, gain
        if best_f is None:
            return TreeNode(degrees)

        kids = []
        for t in range(mships[best_f].shape[1]):
            cw = weights * mships[best_f][:, t]
            if cw.sum() < min_weight:
                child_label_w = cw @ onehot
                kids.append(TreeNode(to_degrees(child_label_w if child_label_w.sum() > 0 else label_w)))
            else:
                kids.append(build(cw, used | {best_f}, depth + 1))
        return TreeNode(degrees, best_f, tuple(kids))

    root = build(np.ones(len(examples)), frozenset(), 0)
    counts = Counter(w for _, w in examples)
    default = max(sorted(counts), key=lambda w: counts[w])
    return FuzzyTree(class_id, words, root, dict(partitions), default)


def truncate(node: TreeNode, depth: int) -> TreeNode:
    if node.is_leaf or depth <= 0:
        return TreeNode(node.degrees)
    return TreeNode(node.degrees, node.feature,
                    tuple(truncate(c, depth - 1) for c in node.children))


def _truncated_tree(tree: FuzzyTree, depth: int) -> FuzzyTree:
    return FuzzyTree(tree.class_id, tree.words, truncate(tree.root, depth),
                     tree.partitions, tree.default)


def _error_rate(tree: FuzzyTree, examples) -> float:
    if not examples:
        return 0.0
    wrong = sum(1 for fv, w in examples if tree.classify(fv) != w)
    return wrong / len(examples)


def cv_depth_errors(examples, partitions, class_id: int, words=None,
                    hp: Hyperparams | None = None):
    """Mean k-fold validation error for every truncation depth of the tree.

    Returns (full_tree, errors) where errors[d] is the mean misclassification
    rate of the depth-d truncation; errors is None when no split is possible.
    """
    hp = hp or Hyperparams()
    examples = list(examples)
    if not examples:
        raise ValueError("cannot prune an empty training set")
    kw = dict(max_depth=hp.max_depth, purity=hp.purity, min_weight=hp.min_weight)
    full = learn_tree(examples, partitions, class_id, words, **kw)
    max_d = full.root.depth()
    if max_d == 0 or len(examples) < 2:
        return full, None

    k = hp.k_folds
    if len(examples) < k:
        logger.info("class %d: only %d examples, lowering fold count", class_id, len(examples))
        k = len(examples)

    rng = np.random.default_rng(np.random.SeedSequence([hp.seed, class_id, len(examples)]))
    order = rng.permutation(len(examples))
    folds = [order[i::k] for i in range(k)]

    errors = np.zeros(max_d + 1)
    for f_idx in folds:
        held = set(int(i) for i in f_idx)
        val = [examples[i] for i in held]
        train = [examples[int(i)] for i in order if int(i) not in held]
        if not train:
            continue
        fold_tree = learn_tree(train, partitions, class_id, words or full.words, **kw)
        for d in range(max_d + 1):
            errors[d] += _error_rate(_truncated_tree(fold_tree, d), val)
    errors /= k
    return full, errors


def prune_cv(examples, partitions, class_id: int, words=None,
             hp: Hyperparams | None = None) -> FuzzyTree:
    """Depth-prune by k-fold cross validation.

    Candidates are the unpruned tree and all its bottom-up truncations; the
    winner minimizes mean validation error, ties going to the shallower tree.
    Features surviving in the winner are the class's selected features.
    """
    full, errors = cv_depth_errors(examples, partitions, class_id, words, hp)
    if errors is None:
        return full
    best_depth = int(np.argmin(errors))  # argmin takes the first (shallowest) tie
    return _truncated_tree(full, best_depth)


@dataclass(frozen=True)
class GroundedModel:
    """Per word-class fuzzy trees plus the lexicon they were trained against."""

    trees: dict  # class id -> FuzzyTree
    lexicon: Lexicon
    meta: dict = field(default_factory=dict)

    def membership(self, class_id: int, word: str, fv: FeatureVector) -> float:
        if class_id not in self.trees:
            raise KeyError(f"unknown word class {class_id}")
        return self.trees[class_id].membership(word, fv)

    def default_word(self, class_id: int) -> str:
        return self.trees[class_id].default

    def selected_features(self) -> dict[int, tuple[str, ...]]:
        return {cid: t.selected_features for cid, t in sorted(self.trees.items())}

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "classes": {
                str(cid): {
                    "ungrounded": t.ungrounded,
                    "words": list(t.words),
                    "features": list(t.selected_features),
                    "partitions": [
                        {"feature": f, "peaks": list(p.peaks)}
                        for f, p in sorted(t.partitions.items())
                    ],
                    "tree": _node_to_dict(t.root),
                    "default": t.default,
                }
                for cid, t in sorted(self.trees.items())
            },
            "lexicon": self.lexicon.to_dict(),
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroundedModel":
        if d.get("format") != 1:
            raise ValueError(f"unsupported model format {d.get('format')!r}")
        trees = {}
        for cid_s, td in d["classes"].items():
            cid = int(cid_s)
            partitions = {
                p["feature"]: FuzzyPartition(p["feature"], tuple(p["peaks"]))
                for p in td["partitions"]
            }
            trees[cid] = FuzzyTree(cid, tuple(td["words"]), _node_from_dict(td["tree"]),
                                   partitions, td["default"], td.get("ungrounded", False))
        return cls(trees, Lexicon.from_dict(d["lexicon"]), d.get("meta", {}))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)

    @classmethod
    def load(cls, path) -> "GroundedModel":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"type": "leaf", "degrees": dict(sorted(node.degrees.items()))}
    return {
        "type": "node",
        "feature": node.feature,
        "degrees": dict(sorted(node.degrees.items())),
        "children": [_node_to_dict(c) for c in node.children],
    }


def _node_from_dict(d: dict) -> TreeNode:
    if d["type"] == "leaf":
        return TreeNode(dict(d["degrees"]))
    return TreeNode(dict(d["degrees"]), d["feature"],
                    tuple(_node_from_dict(c) for c in d["children"]))


def constant_tree(class_id: int, words, default: str) -> FuzzyTree:
    """Ungrounded class: every word matches with degree 1; generation uses
    the default word."""
    n = max(len(words), 1)
    return FuzzyTree(class_id, tuple(sorted(words)), TreeNode({w: 1.0 / n for w in words}),
                     {}, default, ungrounded=True)


def corpus_hash(corpus_rows) -> str:
    payload = json.dumps(
        [[r["scene_id"], r["object_id"], r["text"]] for r in corpus_rows],
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def class_partitions(examples, n_terms: int) -> dict[str, FuzzyPartition]:
    out = {}
    for f in FEATURE_NAMES:
        part = fuzzify([fv[f] for fv, _ in examples], n_terms)
        out[f] = FuzzyPartition(f, part.peaks)
    return out


def train_grounded_model(corpus_rows, scenes, lexicon: Lexicon,
                         hp: Hyperparams | None = None) -> GroundedModel:
    """Full training pass: assemble per-class sets, fuzzify, learn and prune.

    Classes with no examples, or whose pruned tree keeps no feature, become
    constant (ungrounded) trees defaulting to the class's most frequent word.
    """
    hp = hp or Hyperparams()
    corpus_rows = list(corpus_rows)
    ts = build_training_set(corpus_rows, scenes, lexicon)

    trees = {}
    for cid in range(1, 8):
        class_words = tuple(lexicon.words(cid))
        if not class_words:
            continue
        examples = ts.examples(cid)
        if not examples:
            trees[cid] = constant_tree(cid, class_words, lexicon.most_frequent(cid))
            continue
        parts = class_partitions(examples, hp.n_terms)
        tree = prune_cv(examples, parts, cid, class_words, hp)
        if not tree.selected_features:
            seen = Counter(w for _, w in examples)
            default = max(sorted(seen), key=lambda w: seen[w])
            trees[cid] = constant_tree(cid, class_words, default)
        else:
            trees[cid] = tree

    meta = {
        "k_folds": hp.k_folds,
        "n_terms": hp.n_terms,
        "max_depth": hp.max_depth,
        "seed": hp.seed,
        "corpus_hash": corpus_hash(corpus_rows),
        "corpus_size": len(corpus_rows),
        "skipped_rows": len(ts.skipped),
    }
    return GroundedModel(trees, lexicon, meta)
