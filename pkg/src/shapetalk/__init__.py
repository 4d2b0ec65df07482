"""shapetalk: learning soft-constraint word semantics from shape descriptions,
generating unambiguous referring expressions, and resolving them."""

from .features import FEATURE_NAMES, FeatureVector, RegionMask, extract_features, moment_ellipse, rgb_to_ycbcr, scene_features, segment
from .generation import (EvalReport, GenerationResult, GoldGuesser, ModelGuesser,
                         evaluate, generate_description, gold_attributes, guess,
                         oracle_describe)
from .grounding import (FuzzyPartition, FuzzyTree, GroundedModel, Hyperparams,
                        TrainingSet, build_training_set, fuzzify, learn_tree,
                        prune_cv, train_grounded_model)
from .lexicon import (TABLE1, Description, GeneralizedConstraint, Lexicon,
                      ParseError, PatternTable, UnknownClassError, build_lexicon,
                      default_lexicon, mine_patterns, parse, sample_pattern, tag,
                      tokenize)
from .scenes import (PALETTE, Raster, Scene, SceneConfig, SceneGenerationError,
                     ShapeSpec, generate_scene, load_scenes, rasterize,
                     save_scenes, scene_from_dict, scene_to_dict)
from .semantics import AmbiguityReport, MatchReport, ambiguity_degree, match_degree
from .store import CorpusStore

__version__ = "0.1.0"
