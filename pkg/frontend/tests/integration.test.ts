/** Live end-to-end checks against the real game service.
 *
 * Spawns the Python service on a scratch data directory and drives the same
 * client code the page uses: describe flow persists a record that comes back
 * through the API, clicking the true target of a served description is judged
 * correct, and the leaderboard reflects the answers.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { GameClient } from "../src/api.js";

const PORT = 8937;
const BASE = `http://127.0.0.1:${PORT}`;

const BOOT = `
import uvicorn
from shapetalk.grounding import Hyperparams
from shapetalk.scenes import SceneConfig
from shapetalk.service import ServiceConfig, create_app

config = ServiceConfig(
    data_dir=${JSON.stringify("DATA_DIR")},
    scene_config=SceneConfig(width=320, height=240, n_shapes=(2, 4)),
    hyperparams=Hyperparams(k_folds=3),
)
uvicorn.run(create_app(config), host="127.0.0.1", port=${PORT}, log_level="warning")
`;

let server: ChildProcess;
const client = new GameClient(BASE);

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 60; i++) {
    try {
      const r = await fetch(`${BASE}/api/leaderboard`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "shapetalk-ui-"));
  const code = BOOT.replace(JSON.stringify("DATA_DIR"), JSON.stringify(dataDir));
  server = spawn("python3", ["-c", code], { stdio: ["ignore", "inherit", "inherit"] });
  await waitForServer();
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe("describe flow", () => {
  test("a submitted description is persisted and retrievable", async () => {
    const task = await client.nextTask("describe", "ana");
    expect(task.mode).toBe("describe");
    expect(task.target).toBeDefined();
    expect(task.scene.shapes.length).toBeGreaterThan(0);

    const receipt = await client.submitDescription(
      task.scene.id, task.target!, "the blue square", "ana",
    );
    expect(receipt.record_id).toBeGreaterThan(0);
    expect(receipt.diagnostics.pattern).toEqual([1, 7, 3]);

    // the record comes back through the API as a guess task (only record so far)
    const guessTask = await client.nextTask("guess", "bob");
    expect(guessTask.description).toBe("the blue square");
    expect(guessTask.scene.id).toBe(task.scene.id);
  }, 30_000);

  test("spelling repair shows up in the diagnostics", async () => {
    const task = await client.nextTask("describe", "ana");
    const receipt = await client.submitDescription(
      task.scene.id, task.target!, "blu square", "ana",
    );
    expect(receipt.diagnostics.flags?.[0]).toBe("corrected");
    expect(receipt.diagnostics.parsed?.[0]).toBe("blue");
  }, 30_000);
});

describe("guess flow", () => {
  test("clicking the true target of a served description is correct", async () => {
    // make the record pool deterministic: describe a fresh scene ourselves
    const described = await client.nextTask("describe", "carol");
    await client.submitDescription(
      described.scene.id, described.target!, "the shape i mean", "carol",
    );

    for (let i = 0; i < 20; i++) {
      const task = await client.nextTask("guess", "dave");
      expect(task.description).toBeTruthy();
      expect("target" in task).toBe(false); // answer never leaks up front
      expect(JSON.stringify(task)).not.toMatch(/source|provenance/);

      if (task.scene.id !== described.scene.id) continue; // other records
      const result = await client.answerGuess(task.task_id, described.target!, "dave");
      expect(result.correct).toBe(true);
      expect(result.target).toBe(described.target);
      return;
    }
    throw new Error("never drew the described scene as a guess task");
  }, 30_000);

  test("a wrong click is judged incorrect and reveals the target", async () => {
    const task = await client.nextTask("guess", "erin");
    const first = await client.answerGuess(task.task_id, -999, "erin");
    expect(first.correct).toBe(false);
    expect(task.scene.shapes.map((s) => s.id)).toContain(first.target);
  }, 30_000);
});

describe("leaderboard", () => {
  test("answered descriptions rank their authors", async () => {
    const { ranking } = await client.leaderboard();
    expect(ranking.length).toBeGreaterThan(0);
    for (const row of ranking) {
      expect(row).toHaveProperty("name");
      expect(row.accuracy).toBeGreaterThanOrEqual(0);
      expect(row.accuracy).toBeLessThanOrEqual(1);
      expect(row.answered).toBeGreaterThan(0);
    }
  }, 30_000);
});
