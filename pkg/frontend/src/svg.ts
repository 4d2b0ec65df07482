import type { SceneJson, ShapeJson } from "./types.js";

/** Plain description of one SVG element; kept as data so the geometry
 * mapping is testable without a DOM. */
export interface SvgShapeSpec {
  tag: "circle" | "ellipse" | "rect" | "polygon";
  attrs: Record<string, string>;
  shapeId: number;
}

function fillOf(shape: ShapeJson): string {
  const [r, g, b] = shape.color;
  return `rgb(${r},${g},${b})`;
}

export function shapeToSvg(shape: ShapeJson): SvgShapeSpec {
  const [cx, cy] = shape.center;
  const [w, h] = shape.size;
  const fill = fillOf(shape);
  switch (shape.kind) {
    case "circle":
      return { tag: "circle", shapeId: shape.id,
               attrs: { cx: `${cx}`, cy: `${cy}`, r: `${w / 2}`, fill } };
    case "ellipse":
      return { tag: "ellipse", shapeId: shape.id,
               attrs: { cx: `${cx}`, cy: `${cy}`, rx: `${w / 2}`, ry: `${h / 2}`, fill } };
    case "triangle": {
      // isoceles, apex up: must match the rasterizer's geometry
      const points = [
        `${cx},${cy - h / 2}`,
        `${cx - w / 2},${cy + h / 2}`,
        `${cx + w / 2},${cy + h / 2}`,
      ].join(" ");
      return { tag: "polygon", shapeId: shape.id, attrs: { points, fill } };
    }
    case "rectangle":
    case "square":
      return { tag: "rect", shapeId: shape.id,
               attrs: { x: `${cx - w / 2}`, y: `${cy - h / 2}`,
                        width: `${w}`, height: `${h}`, fill } };
  }
}

/** Shape specs in paint order (back to front by z). The target outline is
 * only drawn in describe mode; guess tasks must not hint at the answer. */
export function sceneToSvgSpecs(scene: SceneJson, highlightTarget?: number): SvgShapeSpec[] {
  const ordered = [...scene.shapes].sort((a, b) => a.z - b.z);
  const specs = ordered.map(shapeToSvg);
  if (highlightTarget !== undefined) {
    for (const spec of specs) {
      if (spec.shapeId === highlightTarget) {
        spec.attrs["stroke"] = "#111";
        spec.attrs["stroke-width"] = "3";
        spec.attrs["stroke-dasharray"] = "7 4";
      }
    }
  }
  return specs;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderOptions {
  highlightTarget?: number;
  onShapeClick?: (shapeId: number) => void;
}

/** Materialize a scene as an <svg> element with per-shape click handlers.
 * SVG hit-testing is exact for the element geometry, which mirrors the
 * generator's shapes, so clicks resolve to the true object. */
export function renderScene(scene: SceneJson, options: RenderOptions = {}): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${scene.width} ${scene.height}`);
  svg.setAttribute("class", "scene");

  const background = document.createElementNS(SVG_NS, "rect");
  background.setAttribute("width", `${scene.width}`);
  background.setAttribute("height", `${scene.height}`);
  background.setAttribute("fill", "rgb(245,245,245)");
  svg.appendChild(background);

  for (const spec of sceneToSvgSpecs(scene, options.highlightTarget)) {
    const el = document.createElementNS(SVG_NS, spec.tag);
    for (const [name, value] of Object.entries(spec.attrs)) {
      el.setAttribute(name, value);
    }
    el.setAttribute("data-shape-id", `${spec.shapeId}`);
    if (options.onShapeClick) {
      el.addEventListener("click", () => options.onShapeClick!(spec.shapeId));
      el.setAttribute("class", "clickable");
    }
    svg.appendChild(el);
  }
  return svg;
}
