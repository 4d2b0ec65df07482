"""Game service: scene serving, description collection, guessing, retraining,
and the leaderboard, over a JSON HTTP API.

All state lives in the append-only store plus one atomically swapped model
reference; handlers snapshot the reference once, so a retrain never exposes a
half-trained model to an in-flight request.
"""

from __future__ import annotations

import random
import threading
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import generation
from .features import scene_features
from .grounding import GroundedModel, Hyperparams, constant_tree, train_grounded_model
from .lexicon import TABLE1, Lexicon, ParseError, PatternTable, default_lexicon, parse
from .scenes import (Scene, SceneConfig, SceneGenerationError, generate_scene,
                     raster_to_png_bytes, rasterize, scene_to_dict)
from .semantics import ambiguity_degree, match_degree
from .store import CorpusStore, UnknownSceneError

TRAINING_SOURCES = ("human", "oracle")


@dataclass
class ServiceConfig:
    data_dir: str = "data"
    tau: float = 0.3
    base_seed: int = 1_000_000
    scene_config: SceneConfig = field(default_factory=SceneConfig)
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    pattern_table: PatternTable = TABLE1
    min_corpus_for_training: int = 10
    frontend_dir: str | None = None


def default_model(lexicon: Lexicon) -> GroundedModel:
    """Untrained fallback: every class constant, defaulting to its most
    frequent word (matches and generates, just without discrimination)."""
    trees = {
        cid: constant_tree(cid, tuple(lexicon.words(cid)), lexicon.most_frequent(cid))
        for cid in lexicon.classes()
    }
    return GroundedModel(trees, lexicon, {"untrained": True})


class GameService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = CorpusStore(config.data_dir)
        self.lexicon = default_lexicon()
        self.tasks: dict[str, dict] = {}
        self._train_lock = threading.Lock()
        self._features_cache: dict[str, dict] = {}

        model_path = Path(config.data_dir) / "model.json"
        if model_path.exists():
            try:
                self.model = GroundedModel.load(model_path)
            except (ValueError, KeyError) as exc:
                raise RuntimeError(f"corrupt model file {model_path}: {exc}") from exc
        elif len(self._training_rows()) >= config.min_corpus_for_training:
            self.model = self._train()
        else:
            self.model = default_model(self.lexicon)

    # --- helpers ---------------------------------------------------------

    def _training_rows(self) -> list[dict]:
        return [r for r in self.store.descriptions() if r["source"] in TRAINING_SOURCES]

    def _train(self) -> GroundedModel:
        rows = self._training_rows()
        model = train_grounded_model(rows, self.store.scenes(), self.lexicon,
                                     self.config.hyperparams)
        model.save(Path(self.config.data_dir) / "model.json")
        return model

    def new_scene(self, overrides: dict | None = None) -> Scene:
        cfg = self.config.scene_config
        if overrides:
            known = {k: v for k, v in overrides.items() if hasattr(cfg, k)}
            if "n_shapes" in known:
                known["n_shapes"] = tuple(known["n_shapes"])
            cfg = replace(cfg, **known)
        for bump in range(50):
            seed = self.config.base_seed + self.store.n_scenes + bump
            scene = generate_scene(cfg, seed)
            if scene.id not in self.store.scenes():
                self.store.add_scene(scene)
                return scene
        raise SceneGenerationError("scene id space exhausted")

    def features_of(self, scene: Scene) -> list[tuple[int, object]]:
        if scene.id not in self._features_cache:
            self._features_cache[scene.id] = scene_features(scene)
        return sorted(self._features_cache[scene.id].items())

    def describe_task(self) -> dict:
        scene = self.new_scene()
        task_id = uuid.uuid4().hex
        self.tasks[task_id] = {"mode": "describe", "scene_id": scene.id,
                               "target": scene.selected}
        return {"task_id": task_id, "mode": "describe",
                "scene": scene_to_dict(scene), "target": scene.selected}

    def guess_task(self, rng_hint: int = 0) -> dict:
        descs = [d for d in self.store.descriptions()
                 if d["scene_id"] in self.store.scenes()]
        if not descs:
            scene = self.new_scene()
            text = generation.oracle_describe(scene, scene.selected,
                                              self.config.pattern_table,
                                              seed=self.config.base_seed)
            rec = self.store.record_description(scene.id, scene.selected, text,
                                                source="oracle")
            descs = [rec]
        # provenance-blind uniform choice
        rec = random.choice(descs)
        scene = self.store.scene(rec["scene_id"])
        task_id = uuid.uuid4().hex
        self.tasks[task_id] = {"mode": "guess", "scene_id": scene.id,
                               "target": rec["object_id"],
                               "description_id": rec["id"]}
        return {"task_id": task_id, "mode": "guess",
                "scene": scene_to_dict(scene), "description": rec["text"]}

    def describe_diagnostics(self, text: str) -> dict:
        try:
            desc = parse(text, self.lexicon)
            return {
                "tokens": list(desc.tokens),
                "parsed": [c.word for c in desc.constraints],
                "pattern": list(desc.pattern),
                "flags": list(desc.flags),
            }
        except ParseError as exc:
            return {"error": str(exc)}

    def match_stats(self, scene: Scene, target: int, text: str) -> tuple[float, float]:
        model = self.model  # snapshot
        objects = self.features_of(scene)
        by_id = dict(objects)
        if target not in by_id:
            return 0.0, 0.0
        try:
            desc = parse(text, model.lexicon)
        except ParseError:
            return 0.0, 0.0
        mu = match_degree(model, desc, by_id[target], target).mu
        sigma = ambiguity_degree(model, desc, objects, target).sigma
        return mu, sigma


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    svc = GameService(config)
    app = FastAPI(title="shapetalk", version="0.1.0")
    app.state.service = svc

    @app.exception_handler(UnknownSceneError)
    async def _unknown_scene(request: Request, exc: UnknownSceneError):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.post("/api/scenes")
    def create_scene(body: dict | None = None):
        body = body or {}
        try:
            scene = svc.new_scene(body.get("config"))
        except SceneGenerationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"scene": scene_to_dict(scene)}

    @app.get("/api/scenes/{scene_id}")
    def get_scene(scene_id: str):
        return scene_to_dict(svc.store.scene(scene_id))

    @app.get("/api/scenes/{scene_id}/raster.png")
    def get_raster(scene_id: str):
        raster = rasterize(svc.store.scene(scene_id))
        return Response(content=raster_to_png_bytes(raster), media_type="image/png")

    @app.post("/api/descriptions")
    def post_description(body: dict):
        for key in ("scene_id", "object_id", "text"):
            if key not in body:
                raise HTTPException(status_code=400, detail=f"missing field {key!r}")
        scene = svc.store.scene(body["scene_id"])
        if int(body["object_id"]) not in {s.id for s in scene.shapes}:
            raise HTTPException(status_code=400,
                                detail=f"scene has no object {body['object_id']}")
        diagnostics = svc.describe_diagnostics(body["text"])
        rec = svc.store.record_description(
            scene.id, int(body["object_id"]), body["text"], source="human",
            player=body.get("player"), diagnostics=diagnostics)
        return {"record_id": rec["id"], "diagnostics": diagnostics}

    @app.get("/api/games/next")
    def next_task(mode: str = Query(...), player: str = Query(default="")):
        if mode == "describe":
            return svc.describe_task()
        if mode == "guess":
            return svc.guess_task()
        raise HTTPException(status_code=400, detail=f"unknown mode {mode!r}")

    @app.post("/api/games/{task_id}/answer")
    def answer(task_id: str, body: dict):
        task = svc.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id!r}")
        scene = svc.store.scene(task["scene_id"])
        target = task["target"]

        if task["mode"] == "guess":
            if "object_id" not in body:
                raise HTTPException(status_code=400, detail="guess answers need object_id")
            guessed = int(body["object_id"])
            correct = guessed == target
            desc = svc.store.description(task["description_id"])
            svc.store.record_answer(task["description_id"], body.get("player"),
                                    guessed, correct)
            mu, sigma = svc.match_stats(scene, target, desc["text"])
            return {"correct": correct, "target": target, "mu": mu, "sigma": sigma}

        if "text" not in body or not str(body["text"]).strip():
            raise HTTPException(status_code=400, detail="describe answers need text")
        text = str(body["text"])
        diagnostics = svc.describe_diagnostics(text)
        rec = svc.store.record_description(scene.id, target, text, source="human",
                                           player=body.get("player"),
                                           diagnostics=diagnostics)
        model = svc.model
        objects = svc.features_of(scene)
        try:
            guessed, _ = generation.guess(model, text, objects)
        except (ParseError, ValueError):
            guessed = -1
        mu, sigma = svc.match_stats(scene, target, text)
        return {"correct": guessed == target, "target": target, "mu": mu,
                "sigma": sigma, "record_id": rec["id"], "diagnostics": diagnostics}

    @app.post("/api/train")
    def train(body: dict | None = None):
        rows = svc._training_rows()
        if not rows:
            raise HTTPException(status_code=400, detail="corpus is empty")
        with svc._train_lock:
            model = svc._train()
            svc.model = model  # atomic snapshot swap
        return {
            "per_class_features": {
                str(cid): list(feats) for cid, feats in model.selected_features().items()
            },
            "corpus_size": len(rows),
        }

    @app.get("/api/model")
    def get_model():
        return svc.model.to_dict()

    @app.get("/api/leaderboard")
    def leaderboard():
        return {"ranking": svc.store.leaderboard()}

    frontend = config.frontend_dir
    if frontend and Path(frontend).is_dir():
        app.mount("/", StaticFiles(directory=frontend, html=True), name="frontend")

    return app
