import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapetalk.grounding import GroundedModel, constant_tree
from shapetalk.lexicon import Description, GeneralizedConstraint, default_lexicon
from shapetalk.semantics import ambiguity_degree, match_degree

from conftest import leaf_tree, make_fv


def stipulated_model(class7=None, class3=None, class2=None, class5=None, class6=None):
    """Model with fixed word degrees per class; classes 1 and 4 ungrounded."""
    lex = default_lexicon()
    trees = {
        1: constant_tree(1, ("the", "a"), "the"),
        4: constant_tree(4, ("on", "in", "at", "behind"), "in"),
    }
    fills = {2: class2, 3: class3, 5: class5, 6: class6, 7: class7}
    for cid, degrees in fills.items():
        if degrees is None:
            trees[cid] = constant_tree(cid, tuple(lex.words(cid)), lex.most_frequent(cid))
        else:
            trees[cid] = leaf_tree(cid, degrees)
    return GroundedModel(trees, lex)


def desc_of(*pairs) -> Description:
    constraints = tuple(GeneralizedConstraint(c, w) for c, w in pairs)
    pattern = tuple(c for c, _ in pairs)
    return Description(raw=" ".join(w for _, w in pairs),
                       tokens=tuple(w for _, w in pairs),
                       pattern=pattern, constraints=constraints,
                       flags=("ok",) * len(pairs))


def test_matching_short_description_worked_example():
    # "The red rectangle": min(1, 0.68, 0.74) = 0.68
    model = stipulated_model(
        class7={"red": 0.68, "orange": 0.32},
        class3={"rectangle": 0.74, "square": 0.26},
    )
    d = desc_of((1, "the"), (7, "red"), (3, "rectangle"))
    report = match_degree(model, d, make_fv())
    assert report.mu == pytest.approx(0.68, abs=1e-9)
    per = {w: m for _, w, m in report.per_word}
    assert per["the"] == 1.0
    assert per["red"] == pytest.approx(0.68, abs=1e-9)
    assert per["rectangle"] == pytest.approx(0.74, abs=1e-9)


def test_matching_long_description_worked_example():
    # "The green circle in the front": min(1, 0.78, 0.57, 1, 1, 0.61) = 0.57
    model = stipulated_model(
        class7={"green": 0.78, "blue": 0.22},
        class3={"circle": 0.57, "oval": 0.43},
        class2={"front": 0.61, "background": 0.39},
    )
    d = desc_of((1, "the"), (7, "green"), (3, "circle"),
                (4, "in"), (1, "the"), (2, "front"))
    report = match_degree(model, d, make_fv())
    assert report.mu == pytest.approx(0.57, abs=1e-9)


def test_matching_single_full_membership():
    model = stipulated_model()
    d = desc_of((1, "the"))
    assert match_degree(model, d, make_fv()).mu == 1.0


def test_matching_empty_description_raises():
    model = stipulated_model()
    d = Description("", (), (), (), ())
    with pytest.raises(ValueError):
        match_degree(model, d, make_fv())


def test_ambiguity_worked_examples():
    model = stipulated_model(class7={"red": 1.0, "orange": 0.0})
    d = desc_of((7, "red"))

    class Stub:
        lexicon = model.lexicon

        def membership(self, cid, word, fv):
            return {0: 0.9, 1: 0.11, 2: 0.05}[int(fv.values[0] * 10)]

    stub = Stub()
    objs = [(i, make_fv(r=i / 10)) for i in range(3)]
    rep = ambiguity_degree(stub, d, objs, target_id=0)
    assert rep.sigma == pytest.approx(0.11)

    class Stub2(Stub):
        def membership(self, cid, word, fv):
            return {0: 0.57, 1: 0.53, 2: 0.2}[int(fv.values[0] * 10)]

    rep2 = ambiguity_degree(Stub2(), d, objs, target_id=0)
    assert rep2.sigma == pytest.approx(0.53)
    assert rep2.competitors == {1: pytest.approx(0.53), 2: pytest.approx(0.2)}


def test_ambiguity_single_object_zero():
    model = stipulated_model()
    d = desc_of((1, "the"))
    rep = ambiguity_degree(model, d, [(3, make_fv())], target_id=3)
    assert rep.sigma == 0.0
    assert rep.competitors == {}


def test_ambiguity_missing_target_raises():
    model = stipulated_model()
    d = desc_of((1, "the"))
    with pytest.raises(ValueError):
        ambiguity_degree(model, d, [(0, make_fv())], target_id=9)


# --- properties -----------------------------------------------------------------

@given(st.lists(st.floats(0, 1), min_size=1, max_size=6))
def test_mu_is_min_of_memberships(values):
    class Stub:
        def __init__(self, vals):
            self.vals = list(vals)

        def membership(self, cid, word, fv):
            return self.vals[cid - 1]

    words = ["the", "front", "circle", "in", "light", "top"]
    pairs = [(i + 1, words[i]) for i in range(len(values))]
    rep = match_degree(Stub(values), desc_of(*pairs), make_fv())
    assert rep.mu == pytest.approx(min(values))


def test_appending_constraint_never_raises_mu():
    model = stipulated_model(
        class7={"red": 0.6, "orange": 0.4},
        class3={"square": 0.8, "circle": 0.2},
        class2={"front": 0.3, "background": 0.7},
    )
    fv = make_fv()
    base = desc_of((7, "red"))
    longer = desc_of((7, "red"), (3, "square"))
    longest = desc_of((7, "red"), (3, "square"), (2, "front"))
    mus = [match_degree(model, d, fv).mu for d in (base, longer, longest)]
    assert mus[0] >= mus[1] >= mus[2]


def test_word_order_irrelevant():
    model = stipulated_model(
        class7={"red": 0.6, "orange": 0.4},
        class3={"square": 0.8, "circle": 0.2},
    )
    fv = make_fv()
    a = match_degree(model, desc_of((7, "red"), (3, "square")), fv).mu
    b = match_degree(model, desc_of((3, "square"), (7, "red")), fv).mu
    assert a == b


def test_discrimination_theorem_on_stipulated_models():
    # if mu(target) > sigma then argmax over objects is uniquely the target
    rng = np.random.default_rng(0)

    class Stub:
        def __init__(self, table):
            self.table = table

        def membership(self, cid, word, fv):
            return self.table[int(round(fv.values[0] * 100))][cid]

    for _ in range(200):
        n = int(rng.integers(2, 6))
        table = {i: {7: float(rng.uniform(0, 1)), 3: float(rng.uniform(0, 1))}
                 for i in range(n)}
        stub = Stub(table)
        objs = [(i, make_fv(r=i / 100)) for i in range(n)]
        d = desc_of((7, "red"), (3, "square"))
        mus = {i: match_degree(stub, d, fv).mu for i, fv in objs}
        target = 0
        sigma = ambiguity_degree(stub, d, objs, target).sigma
        if mus[target] > sigma:
            best = max(mus, key=lambda i: mus[i])
            assert best == target
            assert sum(1 for v in mus.values() if v == mus[best]) == 1


def test_report_serialization():
    model = stipulated_model(class7={"red": 0.68, "orange": 0.32})
    d = desc_of((7, "red"))
    rep = match_degree(model, d, make_fv(), object_id=4)
    out = rep.as_dict()
    assert out["object_id"] == 4
    assert out["mu"] == pytest.approx(0.68)
    amb = ambiguity_degree(model, d, [(0, make_fv()), (1, make_fv())], 0).as_dict()
    assert set(amb) == {"target_id", "sigma", "competitors"}
