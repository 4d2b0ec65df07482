"""Description generation, guessing, the synthetic describer, and evaluation.

Generation walks syntax patterns from most to least frequent, fills each slot
with the best-matching word for the target, and (method 3) keeps escalating to
longer patterns until the description's ambiguity drops under the threshold.
Method 1 is the same generator without the ambiguity check.

The describer oracle stands in for human players: it reads gold attributes off
the scene's shape specs and emits pattern-shaped descriptions with a
configurable misspelling rate.
"""

from __future__ import annotations

import string
import zlib
from dataclasses import dataclass

import numpy as np

from .features import FeatureVector, scene_features
from .grounding import GroundedModel
from .lexicon import Description, Lexicon, ParseError, PatternTable, parse
from .scenes import Scene, lightness_factor, nearest_palette_color, occlusion_status
from .semantics import MatchReport, ambiguity_degree, match_degree

LIGHT_FACTOR_THRESHOLD = 0.72
POSITION_THIRD = 1 / 3


@dataclass(frozen=True)
class GenerationResult:
    text: str
    pattern: tuple[int, ...]
    mu: float
    sigma: float
    patterns_tried: int
    status: str  # "unambiguous" | "best_effort"

    def as_dict(self) -> dict:
        return {
            "text": self.text,
            "pattern": list(self.pattern),
            "mu": self.mu,
            "sigma": self.sigma,
            "patterns_tried": self.patterns_tried,
            "status": self.status,
        }


# --- gold semantics from generator ground truth ------------------------------

def gold_attributes(scene: Scene, shape_id: int, rng: np.random.Generator | None = None) -> dict[int, str]:
    """Slot fillers per word class, read off the shape spec (not the model).

    Classes 2 and 6 are absent when the shape neither occludes nor sits in an
    outer third; class 4 is the glue word "in"; class 1 is "the".
    """
    spec = scene.shape(shape_id)
    out = {1: "the", 4: "in"}

    w, h = spec.size
    if spec.kind == "square" or (spec.kind == "rectangle" and abs(w - h) < 1e-9):
        out[3] = "square"
    elif spec.kind == "rectangle":
        out[3] = "rectangle"
    elif spec.kind == "triangle":
        out[3] = "triangle"
    elif spec.kind == "circle" or (spec.kind == "ellipse" and abs(w - h) < 1e-9):
        out[3] = "circle"
    else:
        if rng is None:
            out[3] = "oval"
        else:
            out[3] = "oval" if rng.random() < 0.5 else "ellipse"

    out[7] = nearest_palette_color(spec.color)
    out[5] = "light" if lightness_factor(spec.color) >= LIGHT_FACTOR_THRESHOLD else "dark"

    depth = occlusion_status(scene, shape_id)
    if depth is not None:
        out[2] = depth

    px = spec.center[0] / scene.width
    py = spec.center[1] / scene.height
    horiz = ("left", POSITION_THIRD - px) if px < POSITION_THIRD else ("right", px - (1 - POSITION_THIRD))
    vert = ("top", POSITION_THIRD - py) if py < POSITION_THIRD else ("bottom", py - (1 - POSITION_THIRD))
    candidates = [c for c in (horiz, vert) if c[1] > 0]
    if candidates:
        out[6] = max(candidates, key=lambda c: c[1])[0]
    return out


def _misspell(word: str, rng: np.random.Generator) -> str:
    letters = string.ascii_lowercase
    for _ in range(10):
        op = rng.integers(0, 3)
        pos = int(rng.integers(0, len(word)))
        if op == 0 and len(word) > 2:  # drop
            bad = word[:pos] + word[pos + 1:]
        elif op == 1:  # substitute
            bad = word[:pos] + letters[rng.integers(0, 26)] + word[pos + 1:]
        else:  # insert
            bad = word[:pos] + letters[rng.integers(0, 26)] + word[pos:]
        if bad != word:
            return bad
    return word


def oracle_describe(scene: Scene, target_id: int, pattern_table: PatternTable,
                    seed: int, misspell_rate: float = 0.03,
                    confusion_rate: float = 0.0,
                    lexicon: Lexicon | None = None) -> str:
    """Synthetic description of the target from gold attributes.

    Samples a pattern from the table restricted to slots the gold semantics
    can fill, then fills it; each emitted word is independently misspelled
    with probability misspell_rate. confusion_rate swaps a content word for a
    random classmate (simulating sloppier describers).
    """
    rng = np.random.default_rng(np.random.SeedSequence(
        [zlib.crc32(scene.id.encode()), target_id, abs(int(seed))]))
    gold = gold_attributes(scene, target_id, rng)

    def fillable_pattern(p) -> bool:
        if any(c not in gold for c in p):
            return False
        # patterns repeating a content class describe a second object
        # (relational phrases); the oracle only speaks about the target
        content = [c for c in p if c not in (1, 4)]
        return len(content) == len(set(content))

    fillable = [(p, f) for p, f in pattern_table if fillable_pattern(p)]
    if not fillable:
        fillable = [((7, 3), 1.0)] if 7 in gold and 3 in gold else [((1,), 1.0)]
    total = sum(f for _, f in fillable)
    u = rng.random() * total
    acc = 0.0
    pattern = fillable[-1][0]
    for p, f in fillable:
        acc += f
        if u < acc:
            pattern = p
            break

    words = []
    for cid in pattern:
        word = gold[cid]
        if confusion_rate and rng.random() < confusion_rate and lexicon is not None and cid not in (1, 4):
            members = lexicon.words(cid)
            if len(members) > 1:
                word = str(rng.choice([w for w in members if w != word]))
        if misspell_rate and rng.random() < misspell_rate:
            word = _misspell(word, rng)
        words.append(word)
    return " ".join(words)


# --- generation ---------------------------------------------------------------

def _fill_pattern(model: GroundedModel, pattern, fv: FeatureVector):
    """Best word per slot for the target: highest membership, ties broken by
    lexicon frequency then alphabetically; constant classes use their default."""
    lexicon = model.lexicon
    words = []
    for cid in pattern:
        tree = model.trees.get(cid)
        members = lexicon.words(cid)
        if tree is None or not members:
            raise ValueError(f"no words available for class {cid}")
        if tree.ungrounded:
            words.append(tree.default)
            continue
        mus = {w: tree.membership(w, fv) for w in members}
        words.append(max(members, key=lambda w: (mus[w], lexicon.frequencies.get(w, 0), _rev(w))))
    return words


class _rev(str):
    """Inverts comparison so max() breaks final ties alphabetically."""

    def __lt__(self, other):
        return str.__gt__(self, other)

    def __gt__(self, other):
        return str.__lt__(self, other)


def generate_description(model: GroundedModel, pattern_table: PatternTable,
                         objects, target_id: int, tau: float = 0.3,
                         method: int = 3) -> GenerationResult:
    """Shortest-frequent-pattern generation with ambiguity escalation.

    objects: iterable of (object id, FeatureVector) for the whole scene.
    Method 3 accepts the first candidate whose ambiguity is <= tau, falling
    back to the best (mu - sigma) candidate if none qualifies; method 1
    accepts the first candidate unconditionally.
    """
    if len(pattern_table) == 0:
        raise ValueError("empty pattern table")
    if method not in (1, 3):
        raise ValueError(f"unsupported generation method {method}")
    objects = list(objects)
    by_id = dict(objects)
    if target_id not in by_id:
        raise ValueError(f"target {target_id} not among scene objects")
    target_fv = by_id[target_id]
    lexicon = model.lexicon

    best = None
    tried = 0
    for pattern, _freq in pattern_table:
        words = _fill_pattern(model, pattern, target_fv)
        tried += 1
        desc = parse(" ".join(words), lexicon, pattern_table)
        mu = match_degree(model, desc, target_fv, target_id).mu
        sigma = ambiguity_degree(model, desc, objects, target_id).sigma
        candidate = GenerationResult(
            text=" ".join(words), pattern=tuple(pattern), mu=mu, sigma=sigma,
            patterns_tried=tried, status="unambiguous" if sigma <= tau else "best_effort",
        )
        if method == 1:
            return candidate
        if sigma <= tau:
            return candidate
        if best is None or (mu - sigma) > (best.mu - best.sigma):
            best = candidate
    return GenerationResult(best.text, best.pattern, best.mu, best.sigma, tried, "best_effort")


def guess(model: GroundedModel, text: str, objects,
          lexicon: Lexicon | None = None) -> tuple[int, MatchReport]:
    """Resolve a description to the best-matching object (ties: lowest id)."""
    lexicon = lexicon or model.lexicon
    desc = parse(text, lexicon)
    objects = list(objects)
    if not objects:
        raise ValueError("no objects to guess among")
    reports = [match_degree(model, desc, fv, oid) for oid, fv in objects]
    best = max(reports, key=lambda r: (r.mu, -r.object_id))
    return best.object_id, best


def gold_guess(scene: Scene, text: str, lexicon: Lexicon) -> int:
    """Resolve a description against gold attributes instead of a model.

    Keeps the objects consistent with every gold-checkable constraint,
    returning the lowest id among survivors (all objects if none survive).
    """
    desc = parse(text, lexicon)
    shape_ids = sorted(s.id for s in scene.shapes)
    candidates = list(shape_ids)
    for c in desc.constraints:
        if c.class_id in (1, 4):
            continue
        keep = []
        for oid in candidates:
            gold = gold_attributes(scene, oid)
            value = gold.get(c.class_id)
            if c.class_id == 3 and c.word in ("oval", "ellipse"):
                ok = value in ("oval", "ellipse")
            else:
                ok = value == c.word
            if ok:
                keep.append(oid)
        if keep:
            candidates = keep
    return candidates[0]


# --- evaluation ----------------------------------------------------------------

@dataclass(frozen=True)
class EvalReport:
    methods: dict  # method -> {"accuracy": float, "n": int}
    outcomes: tuple  # (scene id, method, generated text, guessed id, target, correct)
    ranking: tuple  # ((name, accuracy), ...) descending

    def as_dict(self) -> dict:
        return {
            "methods": {
                str(m): {"accuracy": v["accuracy"], "n": v["n"]}
                for m, v in sorted(self.methods.items())
            },
            "ranking": [{"name": n, "accuracy": a} for n, a in self.ranking],
            "outcomes": [
                {"scene_id": s, "method": str(m), "text": t, "guessed": g,
                 "target": tg, "correct": c}
                for s, m, t, g, tg, c in self.outcomes
            ],
        }


@dataclass
class ModelGuesser:
    model: GroundedModel

    name: str = "model"

    def resolve(self, scene: Scene, objects, text: str) -> int:
        oid, _ = guess(self.model, text, objects)
        return oid


@dataclass
class GoldGuesser:
    lexicon: Lexicon
    name: str = "gold"

    def resolve(self, scene: Scene, objects, text: str) -> int:
        return gold_guess(scene, text, self.lexicon)


DEFAULT_POPULATION = (
    ("user-careful", 0.0, 0.0),
    ("user-typical-1", 0.03, 0.05),
    ("user-typical-2", 0.03, 0.10),
    ("user-hasty", 0.08, 0.15),
    ("user-sloppy", 0.12, 0.25),
)


def evaluate(model: GroundedModel, scenes, guesser, pattern_table: PatternTable,
             methods=(1, 3), tau: float = 0.3, seed: int = 0,
             population=DEFAULT_POPULATION) -> EvalReport:
    """Generate-and-guess accuracy per method over held-out scenes, plus a
    ranking of the system's methods against simulated noisy describers.

    Per-scene failures (hidden target, unparseable text) count as incorrect.
    """
    scenes = list(scenes)
    if not scenes:
        raise ValueError("no scenes to evaluate")
    outcomes = []
    correct = {m: 0 for m in methods}

    per_scene = []
    for scene in scenes:
        objects = sorted(scene_features(scene).items())
        per_scene.append((scene, objects))

    for scene, objects in per_scene:
        for m in methods:
            text, guessed, ok = "", -1, False
            try:
                gen = generate_description(model, pattern_table, objects, scene.selected,
                                           tau=tau, method=m)
                text = gen.text
                guessed = guesser.resolve(scene, objects, text)
                ok = guessed == scene.selected
            except (ValueError, ParseError, KeyError):
                pass
            correct[m] += ok
            outcomes.append((scene.id, m, text, guessed, scene.selected, ok))

    methods_report = {
        m: {"accuracy": correct[m] / len(scenes), "n": len(scenes)} for m in methods
    }

    ranking = [(f"system-method-{m}", methods_report[m]["accuracy"]) for m in methods]
    lexicon = model.lexicon
    for name, misspell, confusion in population:
        ok_count = 0
        for i, (scene, objects) in enumerate(per_scene):
            if scene.selected not in dict(objects):
                continue
            text = oracle_describe(scene, scene.selected, pattern_table,
                                   seed=seed + i, misspell_rate=misspell,
                                   confusion_rate=confusion, lexicon=lexicon)
            try:
                ok_count += guesser.resolve(scene, objects, text) == scene.selected
            except (ValueError, ParseError, KeyError):
                pass
        ranking.append((name, ok_count / len(scenes)))
    ranking.sort(key=lambda r: (-r[1], r[0]))

    return EvalReport(methods_report, tuple(outcomes), tuple(ranking))
