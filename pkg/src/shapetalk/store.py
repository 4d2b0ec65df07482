"""Append-only flat-file persistence for descriptions, answers, and scenes.

Everything is JSONL in one data directory. Records are never rewritten;
restart replays the files, so the corpus, leaderboard, and (given a fixed
seed) the trained model are reproducible from disk.
"""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

from .scenes import Scene, scene_from_dict, scene_to_json


class UnknownSceneError(Exception):
    pass


class CorpusStore:
    """Single-writer append-only store. Reads are cheap copies; appends are
    serialized through one lock per file kind."""

    def __init__(self, data_dir):
        self.dir = Path(data_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._descriptions: list[dict] = []
        self._answers: list[dict] = []
        self._scenes: dict[str, Scene] = {}
        self._load()

    @property
    def descriptions_path(self) -> Path:
        return self.dir / "descriptions.jsonl"

    @property
    def answers_path(self) -> Path:
        return self.dir / "answers.jsonl"

    @property
    def scenes_path(self) -> Path:
        return self.dir / "scenes.jsonl"

    def _load(self) -> None:
        for path, sink in ((self.descriptions_path, self._descriptions),
                           (self.answers_path, self._answers)):
            if path.exists():
                with open(path) as fh:
                    sink.extend(json.loads(line) for line in fh if line.strip())
        if self.scenes_path.exists():
            with open(self.scenes_path) as fh:
                for line in fh:
                    if line.strip():
                        scene = scene_from_dict(json.loads(line))
                        self._scenes[scene.id] = scene

    def _append(self, path: Path, record: dict) -> None:
        with open(path, "a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()

    # --- scenes ---------------------------------------------------------

    def add_scene(self, scene: Scene) -> None:
        with self._lock:
            if scene.id in self._scenes:
                return
            self._scenes[scene.id] = scene
            with open(self.scenes_path, "a") as fh:
                fh.write(scene_to_json(scene) + "\n")

    def scene(self, scene_id: str) -> Scene:
        try:
            return self._scenes[scene_id]
        except KeyError:
            raise UnknownSceneError(f"unknown scene {scene_id!r}") from None

    def scenes(self) -> dict[str, Scene]:
        return dict(self._scenes)

    @property
    def n_scenes(self) -> int:
        return len(self._scenes)

    # --- descriptions -----------------------------------------------------

    def record_description(self, scene_id: str, object_id: int, text: str,
                           source: str, player: str | None = None,
                           diagnostics=None) -> dict:
        """Append one description record and return it (with its new id)."""
        if scene_id not in self._scenes:
            raise UnknownSceneError(f"unknown scene {scene_id!r}")
        if not text or not text.strip():
            raise ValueError("empty description text")
        with self._lock:
            record = {
                "id": len(self._descriptions) + 1,
                "scene_id": scene_id,
                "object_id": int(object_id),
                "text": text,
                "source": source,
                "player": player,
                "diagnostics": diagnostics or {},
                "ts": time.time(),
            }
            self._descriptions.append(record)
            self._append(self.descriptions_path, record)
            return dict(record)

    def descriptions(self) -> list[dict]:
        return [dict(r) for r in self._descriptions]

    def description(self, record_id: int) -> dict | None:
        if 1 <= record_id <= len(self._descriptions):
            return dict(self._descriptions[record_id - 1])
        return None

    # --- answers ----------------------------------------------------------

    def record_answer(self, description_id: int, player: str | None,
                      guessed_id: int, correct: bool) -> dict:
        with self._lock:
            record = {
                "id": len(self._answers) + 1,
                "description_id": int(description_id),
                "player": player,
                "guessed_id": int(guessed_id),
                "correct": bool(correct),
                "ts": time.time(),
            }
            self._answers.append(record)
            self._append(self.answers_path, record)
            return dict(record)

    def answers(self) -> list[dict]:
        return [dict(r) for r in self._answers]

    # --- leaderboard --------------------------------------------------------

    def leaderboard(self) -> list[dict]:
        """Describers ranked by the fraction of their descriptions other
        players guessed correctly (ties: more descriptions answered)."""
        stats: dict[str, list[int]] = {}
        for ans in self._answers:
            desc = self.description(ans["description_id"])
            if desc is None:
                continue
            author = self._author(desc)
            got = stats.setdefault(author, [0, 0])
            got[0] += ans["correct"]
            got[1] += 1
        rows = [
            {"name": name, "accuracy": c / n, "answered": n}
            for name, (c, n) in stats.items()
        ]
        rows.sort(key=lambda r: (-r["accuracy"], -r["answered"], r["name"]))
        return rows

    @staticmethod
    def _author(desc: dict) -> str:
        if desc["source"] == "human":
            return desc.get("player") or "anonymous"
        if desc["source"] == "system":
            return desc.get("player") or "system"
        return "oracle"
