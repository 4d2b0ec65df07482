import type { GameTask } from "./types.js";

/** Per-session score; nothing but the player name survives a reload. */
export interface Score {
  describeSubmitted: number;
  guessCorrect: number;
  guessTotal: number;
}

export interface ViewState {
  player: string;
  task: GameTask | null;
  answered: boolean;
  score: Score;
}

export function initialState(player: string): ViewState {
  return {
    player,
    task: null,
    answered: false,
    score: { describeSubmitted: 0, guessCorrect: 0, guessTotal: 0 },
  };
}

export function withTask(state: ViewState, task: GameTask): ViewState {
  return { ...state, task, answered: false };
}

export function afterDescribe(state: ViewState): ViewState {
  return {
    ...state,
    answered: true,
    score: { ...state.score, describeSubmitted: state.score.describeSubmitted + 1 },
  };
}

export function afterGuess(state: ViewState, correct: boolean): ViewState {
  return {
    ...state,
    answered: true,
    score: {
      ...state.score,
      guessCorrect: state.score.guessCorrect + (correct ? 1 : 0),
      guessTotal: state.score.guessTotal + 1,
    },
  };
}

export function scoreLine(score: Score): string {
  const guessed = score.guessTotal
    ? `${score.guessCorrect}/${score.guessTotal} guesses right`
    : "no guesses yet";
  return `${score.describeSubmitted} descriptions given, ${guessed}`;
}

const PLAYER_KEY = "shapetalk-player";

export function loadPlayer(storage: Pick<Storage, "getItem">): string {
  return storage.getItem(PLAYER_KEY) || "";
}

export function savePlayer(storage: Pick<Storage, "setItem">, name: string): void {
  storage.setItem(PLAYER_KEY, name);
}
