import { describe, expect, test } from "vitest";

import {
  afterDescribe,
  afterGuess,
  initialState,
  loadPlayer,
  savePlayer,
  scoreLine,
  withTask,
} from "../src/state.js";
import type { GameTask } from "../src/types.js";

const task: GameTask = {
  task_id: "t1",
  mode: "guess",
  scene: { id: "s", width: 10, height: 10, selected: 0, shapes: [] },
  description: "the blue square",
};

describe("view state", () => {
  test("new task resets the answered flag", () => {
    let state = initialState("ana");
    state = afterGuess(withTask(state, task), true);
    expect(state.answered).toBe(true);
    state = withTask(state, { ...task, task_id: "t2" });
    expect(state.answered).toBe(false);
  });

  test("score accumulates per flow", () => {
    let state = initialState("ana");
    state = afterGuess(withTask(state, task), true);
    state = afterGuess(withTask(state, task), false);
    state = afterDescribe(withTask(state, task));
    expect(state.score).toEqual({ describeSubmitted: 1, guessCorrect: 1, guessTotal: 2 });
    expect(scoreLine(state.score)).toBe("1 descriptions given, 1/2 guesses right");
  });

  test("only the player name touches storage", () => {
    const written: Record<string, string> = {};
    savePlayer({ setItem: (k, v) => void (written[k] = v) }, "bob");
    expect(Object.keys(written)).toEqual(["shapetalk-player"]);
    expect(loadPlayer({ getItem: (k) => written[k] ?? null })).toBe("bob");
  });
});
