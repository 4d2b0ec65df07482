"""Batch command-line interface.

Exit codes: 0 ok, 1 usage error, 2 data error. SHAPETALK_DATA overrides the
service data directory.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from pathlib import Path

import click

from .features import scene_features
from .generation import (GoldGuesser, ModelGuesser, evaluate,
                         generate_description, guess as resolve_guess,
                         oracle_describe)
from .grounding import GroundedModel, Hyperparams, train_grounded_model
from .lexicon import TABLE1, ParseError, default_lexicon
from .scenes import SceneConfig, SceneGenerationError, generate_scene, load_scenes, save_scenes


class DataError(Exception):
    """File or content problems: missing scenes, bad ids, corrupt models."""


@click.group()
def cli():
    """Grounded shape-description games: scenes, corpora, training, play."""


@cli.command("gen-scenes")
@click.option("--n", type=int, required=True, help="number of scenes")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--width", type=int, default=800)
@click.option("--height", type=int, default=600)
@click.option("--min-shapes", type=int, default=3)
@click.option("--max-shapes", type=int, default=8)
@click.option("--overlap", type=float, default=0.45)
@click.option("--twin", type=float, default=0.4)
def gen_scenes(n, seed, out, width, height, min_shapes, max_shapes, overlap, twin):
    """Generate a JSONL scenes file."""
    config = SceneConfig(width=width, height=height, n_shapes=(min_shapes, max_shapes),
                         overlap_prob=overlap, twin_prob=twin)
    try:
        scenes = [generate_scene(config, seed + i) for i in range(n)]
    except SceneGenerationError as exc:
        raise DataError(str(exc))
    save_scenes(scenes, out)
    click.echo(f"wrote {len(scenes)} scenes to {out}")


@cli.command("synth-corpus")
@click.option("--scenes", "scenes_path", type=click.Path(exists=False), required=True)
@click.option("--n", type=int, required=True, help="total descriptions")
@click.option("--misspell-rate", type=float, default=0.03, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def synth_corpus(scenes_path, n, misspell_rate, seed, out):
    """Describe randomly chosen scene objects with the gold-semantics oracle."""
    import numpy as np

    scenes = _load_scenes(scenes_path)
    rng = np.random.default_rng(abs(seed))
    rows = []
    for i in range(n):
        scene = scenes[i % len(scenes)]
        target = int(rng.choice([s.id for s in scene.shapes]))
        text = oracle_describe(scene, target, TABLE1, seed=seed + i,
                               misspell_rate=misspell_rate)
        rows.append({"scene_id": scene.id, "object_id": target,
                     "text": text, "source": "oracle"})
    with open(out, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    click.echo(f"wrote {len(rows)} descriptions to {out}")


@cli.command("train")
@click.option("--corpus", type=click.Path(exists=False), required=True)
@click.option("--scenes", "scenes_path", type=click.Path(exists=False), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--terms", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train(corpus, scenes_path, out, folds, terms, seed):
    """Train a grounded model from a corpus + scenes."""
    scenes = _load_scenes(scenes_path)
    rows = _load_corpus(corpus)
    hp = Hyperparams(n_terms=terms, k_folds=folds, seed=seed)
    model = train_grounded_model(rows, scenes, default_lexicon(), hp)
    model.save(out)
    for cid, feats in model.selected_features().items():
        click.echo(f"class {cid}: {' '.join(feats) if feats else '--'}")
    click.echo(f"model written to {out}")


@cli.command("describe")
@click.option("--scene-file", type=click.Path(exists=False), required=True)
@click.option("--scene-id", required=True)
@click.option("--object", "object_id", type=int, required=True)
@click.option("--model", "model_path", type=click.Path(exists=False), required=True)
@click.option("--method", type=click.Choice(["1", "3"]), default="3", show_default=True)
@click.option("--tau", type=float, default=0.3, show_default=True)
def describe(scene_file, scene_id, object_id, model_path, method, tau):
    """Generate a referring expression for one object."""
    scene = _find_scene(_load_scenes(scene_file), scene_id)
    model = _load_model(model_path)
    objects = sorted(scene_features(scene).items())
    if object_id not in dict(objects):
        raise DataError(f"object {object_id} not visible in scene {scene_id}")
    result = generate_description(model, TABLE1, objects, object_id,
                                  tau=tau, method=int(method))
    click.echo(json.dumps(result.as_dict(), sort_keys=True))


@cli.command("guess")
@click.option("--scene-file", type=click.Path(exists=False), required=True)
@click.option("--scene-id", required=True)
@click.option("--text", required=True)
@click.option("--model", "model_path", type=click.Path(exists=False), required=True)
def guess(scene_file, scene_id, text, model_path):
    """Resolve a description to an object id."""
    scene = _find_scene(_load_scenes(scene_file), scene_id)
    model = _load_model(model_path)
    objects = sorted(scene_features(scene).items())
    try:
        oid, report = resolve_guess(model, text, objects)
    except ParseError as exc:
        raise DataError(f"unparseable description: {exc}")
    click.echo(json.dumps({"object_id": oid, "report": report.as_dict()}, sort_keys=True))


@cli.command("eval")
@click.option("--scenes", "scenes_path", type=click.Path(exists=False), required=True)
@click.option("--model", "model_path", type=click.Path(exists=False), required=True)
@click.option("--guesser-model", type=click.Path(exists=False), default=None,
              help="model for the guessing side; omit to use gold attributes")
@click.option("--methods", default="1,3", show_default=True)
@click.option("--tau", type=float, default=0.3, show_default=True)
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--ranking-csv", type=click.Path(), default=None,
              help="also export the describer ranking as CSV")
@click.option("--seed", type=int, default=0, show_default=True)
def eval_cmd(scenes_path, model_path, guesser_model, methods, tau, report_path,
             ranking_csv, seed):
    """Generate-and-guess accuracy per method over a scenes file."""
    scenes = _load_scenes(scenes_path)
    model = _load_model(model_path)
    try:
        method_ids = tuple(int(m) for m in methods.split(",") if m.strip())
    except ValueError:
        raise click.UsageError(f"bad --methods value {methods!r}")
    if guesser_model:
        guesser = ModelGuesser(_load_model(guesser_model))
    else:
        guesser = GoldGuesser(model.lexicon)
    report = evaluate(model, scenes, guesser, TABLE1, methods=method_ids,
                      tau=tau, seed=seed)
    for m, stats in sorted(report.methods.items()):
        click.echo(f"method {m}: accuracy {stats['accuracy']:.3f} over {stats['n']} scenes")
    if report_path:
        with open(report_path, "w") as fh:
            json.dump(report.as_dict(), fh, sort_keys=True, indent=2)
        click.echo(f"report written to {report_path}")
    if ranking_csv:
        with open(ranking_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "accuracy"])
            writer.writerows(report.ranking)
        click.echo(f"ranking written to {ranking_csv}")


@cli.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data", "data_dir", type=click.Path(), default=None,
              help="data directory (default: SHAPETALK_DATA or ./data)")
@click.option("--tau", type=float, default=0.3, show_default=True)
@click.option("--frontend", type=click.Path(), default=None)
def serve(port, host, data_dir, tau, frontend):
    """Run the game service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    data_dir = data_dir or os.environ.get("SHAPETALK_DATA", "data")
    frontend = frontend or _default_frontend()
    config = ServiceConfig(data_dir=data_dir, tau=tau, frontend_dir=frontend)
    try:
        app = create_app(config)
    except RuntimeError as exc:
        raise DataError(str(exc))
    uvicorn.run(app, host=host, port=port)


def _default_frontend() -> str | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return str(candidate) if candidate.is_dir() else None


def _load_scenes(path):
    if not Path(path).exists():
        raise DataError(f"scenes file not found: {path}")
    try:
        scenes = load_scenes(path)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise DataError(f"bad scenes file {path}: {exc}")
    if not scenes:
        raise DataError(f"no scenes in {path}")
    return scenes


def _find_scene(scenes, scene_id):
    for scene in scenes:
        if scene.id == scene_id:
            return scene
    raise DataError(f"scene {scene_id!r} not in file")


def _load_corpus(path):
    if not Path(path).exists():
        raise DataError(f"corpus file not found: {path}")
    rows = []
    try:
        with open(path) as fh:
            for line in fh:
                if line.strip():
                    rows.append(json.loads(line))
    except json.JSONDecodeError as exc:
        raise DataError(f"bad corpus file {path}: {exc}")
    return rows


def _load_model(path):
    if not Path(path).exists():
        raise DataError(f"model file not found: {path}")
    try:
        return GroundedModel.load(path)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise DataError(f"bad model file {path}: {exc}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except click.exceptions.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
