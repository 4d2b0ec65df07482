"""Degree of matching and degree of ambiguity.

A description matches an object to the degree its weakest word does (min
aggregation). Its ambiguity in a scene is the best match it achieves on any
*other* object: high ambiguity means the description could just as well refer
to a competitor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .features import FeatureVector
from .grounding import GroundedModel
from .lexicon import Description


@dataclass(frozen=True)
class MatchReport:
    object_id: int
    mu: float
    per_word: tuple  # ((class_id, word, membership), ...)

    def as_dict(self) -> dict:
        return {
            "object_id": self.object_id,
            "mu": self.mu,
            "per_word": [
                {"class": cid, "word": w, "mu": m} for cid, w, m in self.per_word
            ],
        }


@dataclass(frozen=True)
class AmbiguityReport:
    target_id: int
    sigma: float
    competitors: dict  # object id -> mu

    def as_dict(self) -> dict:
        return {
            "target_id": self.target_id,
            "sigma": self.sigma,
            "competitors": {str(k): v for k, v in sorted(self.competitors.items())},
        }


def match_degree(model: GroundedModel, description: Description,
                 features: FeatureVector, object_id: int = -1) -> MatchReport:
    """Minimum over the description's per-word memberships on one object."""
    if not description.constraints:
        raise ValueError("description has no parsed constraints")
    per_word = tuple(
        (c.class_id, c.word, model.membership(c.class_id, c.word, features))
        for c in description.constraints
    )
    return MatchReport(object_id, min(m for _, _, m in per_word), per_word)


def ambiguity_degree(model: GroundedModel, description: Description,
                     objects, target_id: int) -> AmbiguityReport:
    """Highest matching degree among the scene's other objects.

    objects: iterable of (object id, FeatureVector). A lone object has
    ambiguity 0 (supremum over an empty competitor set).
    """
    objects = list(objects)
    if target_id not in {oid for oid, _ in objects}:
        raise ValueError(f"target {target_id} not among scene objects")
    competitors = {
        oid: match_degree(model, description, fv, oid).mu
        for oid, fv in objects
        if oid != target_id
    }
    sigma = max(competitors.values()) if competitors else 0.0
    return AmbiguityReport(target_id, sigma, competitors)
