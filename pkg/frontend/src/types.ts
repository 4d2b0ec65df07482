/** Wire types for the game API. Scenes are always rendered from this JSON,
 * never from the raster, so click hit-testing matches the true geometry. */

export type ShapeKind = "circle" | "ellipse" | "triangle" | "rectangle" | "square";

export interface ShapeJson {
  id: number;
  kind: ShapeKind;
  color: [number, number, number];
  center: [number, number];
  size: [number, number];
  z: number;
}

export interface SceneJson {
  id: string;
  width: number;
  height: number;
  selected: number;
  shapes: ShapeJson[];
}

export type GameMode = "describe" | "guess";

/** A task as served by the API. Guess tasks carry the description text only:
 * the server never says who wrote it. */
export interface GameTask {
  task_id: string;
  mode: GameMode;
  scene: SceneJson;
  target?: number; // describe mode only
  description?: string; // guess mode only
}

export interface Diagnostics {
  tokens?: string[];
  parsed?: string[];
  pattern?: number[];
  flags?: string[];
  error?: string;
}

export interface DescriptionReceipt {
  record_id: number;
  diagnostics: Diagnostics;
}

export interface AnswerResult {
  correct: boolean;
  target: number;
  mu: number;
  sigma: number;
  record_id?: number;
  diagnostics?: Diagnostics;
}

export interface LeaderboardRow {
  name: string;
  accuracy: number;
  answered: number;
}
