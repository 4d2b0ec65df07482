import type { LeaderboardRow } from "./types.js";

export interface BarSpec {
  rank: number;
  name: string;
  label: string;
  widthPct: number;
  system: boolean;
}

/** Ranked bar list; the system's generation methods appear as pseudo-players
 * alongside humans. */
export function rankingBars(rows: LeaderboardRow[]): BarSpec[] {
  return rows.map((row, i) => ({
    rank: i + 1,
    name: row.name,
    label: `${(row.accuracy * 100).toFixed(0)}% of ${row.answered}`,
    widthPct: Math.max(2, Math.round(row.accuracy * 100)),
    system: row.name.startsWith("system-") || row.name === "oracle",
  }));
}

export function renderLeaderboard(rows: LeaderboardRow[]): HTMLElement {
  const list = document.createElement("ol");
  list.className = "leaderboard";
  for (const bar of rankingBars(rows)) {
    const item = document.createElement("li");
    item.className = bar.system ? "entry system" : "entry";

    const name = document.createElement("span");
    name.className = "name";
    name.textContent = bar.name;

    const track = document.createElement("span");
    track.className = "track";
    const fill = document.createElement("span");
    fill.className = "fill";
    fill.style.width = `${bar.widthPct}%`;
    track.appendChild(fill);

    const label = document.createElement("span");
    label.className = "label";
    label.textContent = bar.label;

    item.append(name, track, label);
    list.appendChild(item);
  }
  if (!rows.length) {
    const empty = document.createElement("li");
    empty.textContent = "no answered descriptions yet";
    list.appendChild(empty);
  }
  return list;
}
