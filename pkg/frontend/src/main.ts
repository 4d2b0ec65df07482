import { ApiError, GameClient } from "./api.js";
import { renderLeaderboard } from "./leaderboard.js";
import {
  ViewState,
  afterDescribe,
  afterGuess,
  initialState,
  loadPlayer,
  savePlayer,
  scoreLine,
  withTask,
} from "./state.js";
import { renderScene } from "./svg.js";
import type { Diagnostics } from "./types.js";

const client = new GameClient("");

const el = {
  player: document.getElementById("player") as HTMLInputElement,
  score: document.getElementById("score") as HTMLElement,
  tabs: Array.from(document.querySelectorAll<HTMLButtonElement>("nav button")),
  describePanel: document.getElementById("describe-panel") as HTMLElement,
  guessPanel: document.getElementById("guess-panel") as HTMLElement,
  boardPanel: document.getElementById("leaderboard-panel") as HTMLElement,
  describeScene: document.getElementById("describe-scene") as HTMLElement,
  describeText: document.getElementById("describe-text") as HTMLInputElement,
  describeSubmit: document.getElementById("describe-submit") as HTMLButtonElement,
  describeNext: document.getElementById("describe-next") as HTMLButtonElement,
  describeStatus: document.getElementById("describe-status") as HTMLElement,
  guessScene: document.getElementById("guess-scene") as HTMLElement,
  guessText: document.getElementById("guess-text") as HTMLElement,
  guessNext: document.getElementById("guess-next") as HTMLButtonElement,
  guessStatus: document.getElementById("guess-status") as HTMLElement,
  board: document.getElementById("leaderboard") as HTMLElement,
  boardRefresh: document.getElementById("leaderboard-refresh") as HTMLButtonElement,
};

let describeState: ViewState = initialState(loadPlayer(localStorage));
let guessState: ViewState = initialState(describeState.player);

el.player.value = describeState.player;
el.player.addEventListener("change", () => {
  savePlayer(localStorage, el.player.value.trim());
});

function playerName(): string {
  return el.player.value.trim() || "anonymous";
}

function note(target: HTMLElement, text: string, kind: "info" | "ok" | "bad" = "info") {
  target.textContent = text;
  target.className = `status ${kind}`;
}

function describeApiFailure(target: HTMLElement, err: unknown) {
  // input stays as typed; only the status line reports the problem
  const detail = err instanceof ApiError ? `${err.status} ${err.body}` : String(err);
  note(target, `request failed: ${detail}`, "bad");
}

function diagnosticsText(diag: Diagnostics): string {
  if (diag.error) return diag.error;
  const tokens = diag.tokens ?? [];
  const flags = diag.flags ?? [];
  const parsed = [...(diag.parsed ?? [])];
  const parts: string[] = [];
  tokens.forEach((tok, i) => {
    const flag = flags[i] ?? "ok";
    if (flag === "discarded") {
      parts.push(`${tok} (discarded)`);
    } else if (flag === "corrected") {
      parts.push(`${tok} -> ${parsed.shift() ?? "?"}`);
    } else {
      parts.push(parsed.shift() ?? tok);
    }
  });
  return `understood: ${parts.join(" ")}`;
}

function refreshScore() {
  el.score.textContent = scoreLine({
    describeSubmitted: describeState.score.describeSubmitted,
    guessCorrect: guessState.score.guessCorrect,
    guessTotal: guessState.score.guessTotal,
  });
}

// --- describe game ---------------------------------------------------------

async function newDescribeTask() {
  note(el.describeStatus, "fetching a scene...");
  el.describeSubmit.disabled = true;
  try {
    const task = await client.nextTask("describe", playerName());
    describeState = withTask(describeState, task);
    el.describeScene.replaceChildren(
      renderScene(task.scene, { highlightTarget: task.target }),
    );
    el.describeText.value = "";
    note(el.describeStatus, "describe the outlined object so another player can find it");
  } catch (err) {
    describeApiFailure(el.describeStatus, err);
  }
}

async function submitDescription() {
  const task = describeState.task;
  const text = el.describeText.value.trim();
  if (!task || task.target === undefined || !text) return;
  el.describeSubmit.disabled = true;
  try {
    const receipt = await client.submitDescription(
      task.scene.id, task.target, text, playerName(),
    );
    describeState = afterDescribe(describeState);
    note(el.describeStatus,
         `saved as #${receipt.record_id}; ${diagnosticsText(receipt.diagnostics)}`, "ok");
    refreshScore();
  } catch (err) {
    describeApiFailure(el.describeStatus, err);
    el.describeSubmit.disabled = false; // keep input, allow retry
  }
}

el.describeText.addEventListener("input", () => {
  el.describeSubmit.disabled = !el.describeText.value.trim() || !describeState.task
    || describeState.answered;
});
el.describeSubmit.addEventListener("click", submitDescription);
el.describeNext.addEventListener("click", newDescribeTask);

// --- guess game ------------------------------------------------------------

async function newGuessTask() {
  note(el.guessStatus, "fetching a description...");
  try {
    const task = await client.nextTask("guess", playerName());
    guessState = withTask(guessState, task);
    el.guessText.textContent = `"${task.description ?? ""}"`;
    el.guessScene.replaceChildren(
      renderScene(task.scene, { onShapeClick: clickGuess }),
    );
    note(el.guessStatus, "click the object this describes");
  } catch (err) {
    describeApiFailure(el.guessStatus, err);
  }
}

async function clickGuess(shapeId: number) {
  const task = guessState.task;
  if (!task || guessState.answered) return; // one answer per task
  guessState = { ...guessState, answered: true };
  try {
    const result = await client.answerGuess(task.task_id, shapeId, playerName());
    guessState = afterGuess({ ...guessState, answered: false }, result.correct);
    el.guessScene.replaceChildren(
      renderScene(task.scene, { highlightTarget: result.target }),
    );
    note(el.guessStatus,
         result.correct ? "correct!" : "not this one; the real target is outlined",
         result.correct ? "ok" : "bad");
    refreshScore();
    void refreshLeaderboard();
  } catch (err) {
    guessState = { ...guessState, answered: false };
    describeApiFailure(el.guessStatus, err);
  }
}

el.guessNext.addEventListener("click", newGuessTask);

// --- leaderboard -------------------------------------------------------------

async function refreshLeaderboard() {
  try {
    const { ranking } = await client.leaderboard();
    el.board.replaceChildren(renderLeaderboard(ranking));
  } catch (err) {
    describeApiFailure(el.board, err);
  }
}

el.boardRefresh.addEventListener("click", refreshLeaderboard);

// --- tabs ---------------------------------------------------------------------

const panels: Record<string, HTMLElement> = {
  describe: el.describePanel,
  guess: el.guessPanel,
  leaderboard: el.boardPanel,
};

for (const button of el.tabs) {
  button.addEventListener("click", () => {
    for (const other of el.tabs) other.classList.toggle("active", other === button);
    const chosen = button.dataset.panel!;
    for (const [name, panel] of Object.entries(panels)) {
      panel.hidden = name !== chosen;
    }
    if (chosen === "leaderboard") void refreshLeaderboard();
    if (chosen === "describe" && !describeState.task) void newDescribeTask();
    if (chosen === "guess" && !guessState.task) void newGuessTask();
  });
}

void newDescribeTask();
refreshScore();
