import type {
  AnswerResult,
  DescriptionReceipt,
  GameMode,
  GameTask,
  LeaderboardRow,
  SceneJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public body: string) {
    super(`API error ${status}: ${body}`);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, init);
  if (!response.ok) {
    throw new ApiError(response.status, await response.text());
  }
  return (await response.json()) as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  };
}

/** Thin typed client over the game service; the only coupling to the backend. */
export class GameClient {
  constructor(private base: string = "") {}

  createScene(config?: Record<string, unknown>): Promise<{ scene: SceneJson }> {
    return request(this.base, "/api/scenes", post(config ? { config } : {}));
  }

  getScene(sceneId: string): Promise<SceneJson> {
    return request(this.base, `/api/scenes/${encodeURIComponent(sceneId)}`);
  }

  rasterUrl(sceneId: string): string {
    return `${this.base}/api/scenes/${encodeURIComponent(sceneId)}/raster.png`;
  }

  submitDescription(
    sceneId: string,
    objectId: number,
    text: string,
    player: string,
  ): Promise<DescriptionReceipt> {
    return request(this.base, "/api/descriptions", post({
      scene_id: sceneId,
      object_id: objectId,
      text,
      player,
    }));
  }

  nextTask(mode: GameMode, player: string): Promise<GameTask> {
    const params = new URLSearchParams({ mode, player });
    return request(this.base, `/api/games/next?${params}`);
  }

  answerGuess(taskId: string, objectId: number, player: string): Promise<AnswerResult> {
    return request(this.base, `/api/games/${taskId}/answer`, post({
      object_id: objectId,
      player,
    }));
  }

  answerDescribe(taskId: string, text: string, player: string): Promise<AnswerResult> {
    return request(this.base, `/api/games/${taskId}/answer`, post({ text, player }));
  }

  train(): Promise<{ per_class_features: Record<string, string[]>; corpus_size: number }> {
    return request(this.base, "/api/train", post({}));
  }

  leaderboard(): Promise<{ ranking: LeaderboardRow[] }> {
    return request(this.base, "/api/leaderboard");
  }
}
