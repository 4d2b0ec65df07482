import pytest

from shapetalk.generation import (GoldGuesser, ModelGuesser, evaluate,
                                  generate_description, gold_attributes,
                                  gold_guess, guess, oracle_describe)
from shapetalk.grounding import GroundedModel, constant_tree
from shapetalk.lexicon import TABLE1, PatternTable, default_lexicon, parse, tokenize
from shapetalk.scenes import (Scene, SceneConfig, ShapeSpec, generate_scene,
                              nearest_palette_color)
from conftest import leaf_tree, make_fv, split_tree


# --- gold attributes -----------------------------------------------------------

def _scene(*shapes, w=300, h=300, selected=0):
    return Scene("g", w, h, tuple(shapes), selected)


def test_gold_attributes_blue_square():
    s = _scene(ShapeSpec(0, "square", (40, 90, 235), (150, 150), (60, 60), 0))
    gold = gold_attributes(s, 0)
    assert gold[1] == "the" and gold[4] == "in"
    assert gold[3] == "square"
    assert gold[7] == "blue"
    assert 2 not in gold  # nothing occludes anything
    assert 6 not in gold  # dead center


def test_gold_attributes_kinds():
    kinds = {"circle": "circle", "triangle": "triangle", "rectangle": "rectangle"}
    for kind, word in kinds.items():
        size = (60, 60) if kind == "circle" else (80, 50)
        s = _scene(ShapeSpec(0, kind, (50, 200, 70), (150, 150), size, 0))
        assert gold_attributes(s, 0)[3] == word
    s = _scene(ShapeSpec(0, "ellipse", (50, 200, 70), (150, 150), (80, 50), 0))
    assert gold_attributes(s, 0)[3] in ("oval", "ellipse")


def test_gold_attributes_light_dark():
    bright = tuple(int(v) for v in (50, 200, 70))
    dark = tuple(int(v * 0.5) for v in (50, 200, 70))
    s1 = _scene(ShapeSpec(0, "square", bright, (150, 150), (60, 60), 0))
    s2 = _scene(ShapeSpec(0, "square", dark, (150, 150), (60, 60), 0))
    assert gold_attributes(s1, 0)[5] == "light"
    assert gold_attributes(s2, 0)[5] == "dark"


def test_gold_attributes_occlusion():
    back = ShapeSpec(0, "rectangle", (10, 10, 200), (150, 150), (120, 90), 0)
    front = ShapeSpec(1, "circle", (200, 160, 10), (150, 150), (40, 40), 1)
    s = _scene(back, front)
    assert gold_attributes(s, 0)[2] == "background"
    assert gold_attributes(s, 1)[2] == "front"


def test_gold_attributes_position_thirds():
    s = _scene(ShapeSpec(0, "square", (50, 200, 70), (40, 150), (40, 40), 0))
    assert gold_attributes(s, 0)[6] == "left"
    s = _scene(ShapeSpec(0, "square", (50, 200, 70), (150, 40), (40, 40), 0))
    assert gold_attributes(s, 0)[6] == "top"
    s = _scene(ShapeSpec(0, "square", (50, 200, 70), (260, 260), (40, 40), 0))
    assert gold_attributes(s, 0)[6] in ("right", "bottom")


def test_nearest_palette_is_luminance_invariant():
    for name in ("green", "blue", "red", "pink", "yellow"):
        from shapetalk.scenes import PALETTE

        base = PALETTE[name]
        for f in (0.45, 0.7, 1.0):
            scaled = tuple(int(v * f) for v in base)
            assert nearest_palette_color(scaled) == name, (name, f)


# --- oracle ------------------------------------------------------------------------

SHORT_TABLE = PatternTable((((1, 7, 3), 1.0),))


def test_oracle_gold_semantics_zero_noise():
    s = _scene(ShapeSpec(0, "square", (40, 90, 235), (150, 150), (60, 60), 0))
    text = oracle_describe(s, 0, SHORT_TABLE, seed=1, misspell_rate=0.0)
    assert text == "the blue square"


def test_oracle_deterministic():
    s = _scene(ShapeSpec(0, "square", (40, 90, 235), (150, 150), (60, 60), 0))
    a = oracle_describe(s, 0, TABLE1, seed=5, misspell_rate=0.2)
    b = oracle_describe(s, 0, TABLE1, seed=5, misspell_rate=0.2)
    assert a == b


def test_oracle_restricts_unfillable_patterns():
    # lone centered shape: classes 2 and 6 unavailable, no relational repeats
    s = _scene(ShapeSpec(0, "square", (40, 90, 235), (150, 150), (60, 60), 0))
    lex = default_lexicon()
    for seed in range(60):
        text = oracle_describe(s, 0, TABLE1, seed=seed, misspell_rate=0.0)
        d = parse(text, lex)
        assert all(c not in (2, 6) for c in d.pattern), text
        content = [c for c in d.pattern if c not in (1, 4)]
        assert len(content) == len(set(content)), text


def test_oracle_misspell_fraction():
    s = _scene(ShapeSpec(0, "square", (40, 90, 235), (150, 150), (60, 60), 0))
    words_total = 0
    misspelled = 0
    lex = default_lexicon()
    for seed in range(5200):
        text = oracle_describe(s, 0, TABLE1, seed=seed, misspell_rate=0.03)
        for tok in tokenize(text):
            words_total += 1
            misspelled += tok not in lex
    assert words_total >= 10_000
    assert misspelled / words_total == pytest.approx(0.03, abs=0.005)


# --- generation --------------------------------------------------------------------

ESCALATION_TABLE = PatternTable((
    ((7, 3), 0.19),
    ((1, 7, 3), 0.07),
    ((1, 3), 0.064),
    ((3,), 0.058),
    ((5, 7, 3), 0.033),
    ((1, 7, 3, 4, 1, 6), 0.025),
    ((1, 7, 3, 4, 1, 2), 0.02),
))


def hand_model():
    """Both objects green circles, same lightness and side; only the depth
    split (class 2, via holes) tells them apart."""
    lex = default_lexicon()
    trees = {
        1: constant_tree(1, ("the", "a"), "the"),
        4: constant_tree(4, ("on", "in", "at", "behind"), "in"),
        2: split_tree(2, "holes", (0.0, 0.3),
                      [{"front": 0.9, "background": 0.1},
                       {"front": 0.05, "background": 0.95}], "front"),
        3: leaf_tree(3, {"circle": 0.85, "oval": 0.05, "triangle": 0.02,
                         "rectangle": 0.03, "ellipse": 0.03, "square": 0.02}),
        5: leaf_tree(5, {"light": 0.8, "big": 0.1, "dark": 0.1}),
        6: leaf_tree(6, {"left": 0.7, "top": 0.1, "right": 0.1, "bottom": 0.1}),
        7: leaf_tree(7, {"green": 0.9, "blue": 0.02, "red": 0.01, "pink": 0.01,
                         "orange": 0.01, "yellow": 0.01, "purple": 0.02,
                         "violet": 0.01, "brown": 0.01}),
    }
    return GroundedModel(trees, lex)


def test_method3_escalates_to_depth_word():
    model = hand_model()
    objects = [(0, make_fv(holes=0.0)), (1, make_fv(holes=0.3))]
    result = generate_description(model, ESCALATION_TABLE, objects, 0,
                                  tau=0.3, method=3)
    assert result.pattern == (1, 7, 3, 4, 1, 2)
    assert result.text == "the green circle in the front"
    assert result.status == "unambiguous"
    assert result.sigma <= 0.3
    assert result.patterns_tried == 7


def test_method1_takes_first_pattern():
    model = hand_model()
    objects = [(0, make_fv(holes=0.0)), (1, make_fv(holes=0.3))]
    result = generate_description(model, ESCALATION_TABLE, objects, 0,
                                  tau=0.3, method=1)
    assert result.pattern == (7, 3)
    assert result.text == "green circle"
    assert result.patterns_tried == 1
    assert result.sigma > 0.3 and result.status == "best_effort"


def test_single_object_immediately_unambiguous():
    model = hand_model()
    result = generate_description(model, ESCALATION_TABLE, [(0, make_fv())], 0)
    assert result.pattern == (7, 3)
    assert result.sigma == 0.0
    assert result.status == "unambiguous"
    assert result.patterns_tried == 1


def test_best_effort_when_nothing_disambiguates():
    model = hand_model()
    # identical feature vectors: no pattern can separate them
    objects = [(0, make_fv()), (1, make_fv())]
    result = generate_description(model, ESCALATION_TABLE, objects, 0)
    assert result.status == "best_effort"
    assert result.patterns_tried == len(ESCALATION_TABLE)


def test_generation_deterministic():
    model = hand_model()
    objects = [(0, make_fv(holes=0.0)), (1, make_fv(holes=0.3))]
    a = generate_description(model, ESCALATION_TABLE, objects, 0)
    b = generate_description(model, ESCALATION_TABLE, objects, 0)
    assert a == b


def test_patterns_tried_monotone_under_duplication():
    model = hand_model()
    distinct = [(0, make_fv(holes=0.0)),
                (1, make_fv(holes=0.3))]
    duplicated = distinct + [(2, make_fv(holes=0.0))]  # twin of the target
    t1 = generate_description(model, ESCALATION_TABLE, distinct, 0).patterns_tried
    t2 = generate_description(model, ESCALATION_TABLE, duplicated, 0).patterns_tried
    assert t2 >= t1


def test_empty_pattern_table_raises():
    with pytest.raises(ValueError):
        generate_description(hand_model(), PatternTable(()), [(0, make_fv())], 0)


def test_generation_missing_target_raises():
    with pytest.raises(ValueError):
        generate_description(hand_model(), ESCALATION_TABLE, [(0, make_fv())], 5)


# --- guessing -----------------------------------------------------------------------

def test_guess_resolves_generated_description():
    model = hand_model()
    objects = [(0, make_fv(holes=0.0)), (1, make_fv(holes=0.3))]
    gen = generate_description(model, ESCALATION_TABLE, objects, 0)
    oid, report = guess(model, gen.text, objects)
    assert oid == 0
    assert report.mu == pytest.approx(gen.mu)


def test_guess_tie_breaks_lowest_id():
    model = hand_model()
    objects = [(4, make_fv()), (2, make_fv()), (7, make_fv())]
    oid, _ = guess(model, "green circle", objects)
    assert oid == 2


def test_guess_corrects_misspelling():
    model = hand_model()
    objects = [(0, make_fv(holes=0.0)), (1, make_fv(holes=0.3))]
    oid, report = guess(model, "grean circle in the front", objects)
    assert oid == 0
    assert any(w == "green" for _, w, _ in report.per_word)


def test_gold_guess_unique_attributes():
    blue = ShapeSpec(0, "square", (40, 90, 235), (80, 80), (50, 50), 0)
    red = ShapeSpec(1, "circle", (225, 30, 40), (220, 220), (60, 60), 1)
    scene = Scene("gg", 300, 300, (blue, red), 0)
    lex = default_lexicon()
    assert gold_guess(scene, "the blue square", lex) == 0
    assert gold_guess(scene, "red circle", lex) == 1


# --- evaluation ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def eval_world():
    cfg = SceneConfig(width=320, height=240, n_shapes=(2, 4), size_range=(30, 70),
                      twin_prob=0.0, overlap_prob=0.2)
    return [generate_scene(cfg, 9000 + i) for i in range(12)]


def test_gold_guesser_on_gold_descriptions(eval_world):
    lex = default_lexicon()
    ok = 0
    total = 0
    for scene in eval_world:
        words = {}
        distinct = True
        for spec in scene.shapes:
            key = (gold_attributes(scene, spec.id).get(7),
                   gold_attributes(scene, spec.id).get(3))
            distinct &= key not in words.values()
            words[spec.id] = key
        if not distinct:
            continue
        text = oracle_describe(scene, scene.selected, SHORT_TABLE, seed=1,
                               misspell_rate=0.0)
        total += 1
        ok += gold_guess(scene, text, lex) == scene.selected
    assert total > 0
    assert ok == total


def test_evaluate_report_shape(eval_world):
    model = hand_model()
    guesser = GoldGuesser(model.lexicon)
    report = evaluate(model, eval_world[:6], guesser, TABLE1, methods=(1, 3),
                      tau=0.3, seed=0)
    assert set(report.methods) == {1, 3}
    for stats in report.methods.values():
        assert 0.0 <= stats["accuracy"] <= 1.0
        assert stats["n"] == 6
    assert len(report.outcomes) == 12
    names = [n for n, _ in report.ranking]
    assert "system-method-1" in names and "system-method-3" in names
    accs = [a for _, a in report.ranking]
    assert accs == sorted(accs, reverse=True)
    d = report.as_dict()
    assert set(d) == {"methods", "ranking", "outcomes"}


def test_evaluate_single_object_scenes_perfect():
    cfg = SceneConfig(width=320, height=240, n_shapes=(1, 1), size_range=(40, 80))
    scenes = [generate_scene(cfg, 9500 + i) for i in range(5)]
    model = hand_model()
    report = evaluate(model, scenes, ModelGuesser(model), TABLE1, methods=(1, 3))
    assert report.methods[1]["accuracy"] == 1.0
    assert report.methods[3]["accuracy"] == 1.0
