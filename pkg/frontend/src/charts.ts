/** Hand-rolled SVG time-series charts; no chart library, no layout queries,
 * so they render identically in the browser and in DOM test environments.
 *
 * Volume: an area+line of tweets per day. Clusters: a scatter with exactly
 * one point per (day, label) pair the API returned, proportions on [0, 1],
 * one series group per label, and a legend that toggles series visibility.
 */

import type { ClusterPoint, TrendPoint } from "./api.js";
import { clear, el, svgEl } from "./dom.js";

const WIDTH = 680;
const HEIGHT = 240;
const MARGIN = { top: 14, right: 16, bottom: 30, left: 48 };
const INNER_W = WIDTH - MARGIN.left - MARGIN.right;
const INNER_H = HEIGHT - MARGIN.top - MARGIN.bottom;

/** Fixed palette for the packaged labels; unknown labels hash to a hue. */
const PALETTE: Record<string, string> = {
  cynicism: "#c2571a",
  covid_comparison: "#1a6fc2",
  government_action: "#1a9e57",
  misinformation: "#c21a3f",
  uncategorized: "#8a8a96",
};

export function labelColor(label: string): string {
  const fixed = PALETTE[label];
  if (fixed) return fixed;
  let hash = 0;
  for (let i = 0; i < label.length; i++) hash = (hash * 31 + label.charCodeAt(i)) >>> 0;
  return `hsl(${hash % 360}, 55%, 42%)`;
}

function dayMs(day: string): number {
  return Date.parse(`${day}T00:00:00Z`);
}

function xScale(days: string[]): (day: string) => number {
  const values = days.map(dayMs);
  const min = Math.min(...values);
  const max = Math.max(...values);
  if (min === max) return () => MARGIN.left + INNER_W / 2;
  return (day) => MARGIN.left + ((dayMs(day) - min) / (max - min)) * INNER_W;
}

function yPos(fraction: number): number {
  return MARGIN.top + (1 - fraction) * INNER_H;
}

function axes(svg: SVGElement, yTicks: Array<{ at: number; text: string }>, days: string[]): void {
  const axisColor = "#b6b6c2";
  svg.append(
    svgEl("line", {
      x1: String(MARGIN.left), y1: String(yPos(0)),
      x2: String(MARGIN.left + INNER_W), y2: String(yPos(0)),
      stroke: axisColor,
    }),
    svgEl("line", {
      x1: String(MARGIN.left), y1: String(yPos(0)),
      x2: String(MARGIN.left), y2: String(yPos(1)),
      stroke: axisColor,
    }),
  );
  for (const tick of yTicks) {
    svg.append(
      svgEl("text", {
        x: String(MARGIN.left - 6), y: String(yPos(tick.at) + 4),
        "text-anchor": "end", class: "tick",
      }, [tick.text]),
    );
  }
  const scale = xScale(days);
  const labels = days.length > 2 ? [days[0]!, days[Math.floor(days.length / 2)]!, days[days.length - 1]!] : days;
  for (const day of labels) {
    svg.append(
      svgEl("text", {
        x: String(scale(day)), y: String(HEIGHT - 8),
        "text-anchor": "middle", class: "tick",
      }, [day]),
    );
  }
}

function chartSvg(role: string): SVGElement {
  return svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: "100%",
    role: "img",
    "data-chart": role,
  });
}

export function renderVolumeChart(container: Element, points: TrendPoint[]): void {
  clear(container);
  if (points.length === 0) {
    container.append(el("p", { class: "empty-state" }, ["No tweets in this range."]));
    return;
  }
  const days = points.map((p) => p.day);
  const maxCount = Math.max(...points.map((p) => p.count), 1);
  const scale = xScale(days);
  const svg = chartSvg("volume");

  const coords = points.map((p) => `${scale(p.day)},${yPos(p.count / maxCount)}`);
  const first = points[0]!;
  const last = points[points.length - 1]!;
  svg.append(
    svgEl("polygon", {
      points: `${scale(first.day)},${yPos(0)} ${coords.join(" ")} ${scale(last.day)},${yPos(0)}`,
      fill: "#1a6fc2", opacity: "0.15",
    }),
    svgEl("polyline", {
      points: coords.join(" "),
      fill: "none", stroke: "#1a6fc2", "stroke-width": "1.5",
      "data-role": "volume-line",
    }),
  );
  for (const p of points) {
    const dot = svgEl("circle", {
      cx: String(scale(p.day)), cy: String(yPos(p.count / maxCount)), r: "2.5",
      fill: "#1a6fc2", class: "pt", "data-day": p.day, "data-count": String(p.count),
    });
    dot.append(svgEl("title", {}, [`${p.day}: ${p.count} tweets`]));
    svg.append(dot);
  }
  axes(svg, [
    { at: 0, text: "0" },
    { at: 1, text: String(maxCount) },
  ], days);
  container.append(svg);
}

export function renderClusterChart(container: Element, points: ClusterPoint[]): void {
  clear(container);
  if (points.length === 0) {
    container.append(el("p", { class: "empty-state" }, ["No labeled tweets in this range."]));
    return;
  }

  const days = Array.from(new Set(points.map((p) => p.day))).sort();
  const labels = Array.from(new Set(points.map((p) => p.label)));
  const scale = xScale(days);
  const svg = chartSvg("clusters");

  const series = new Map<string, SVGElement>();
  for (const label of labels) {
    const group = svgEl("g", { "data-series": label });
    series.set(label, group);
    svg.append(group);
  }
  for (const p of points) {
    const dot = svgEl("circle", {
      cx: String(scale(p.day)), cy: String(yPos(p.proportion)), r: "3",
      fill: labelColor(p.label), class: "pt",
      "data-day": p.day, "data-label": p.label, "data-count": String(p.count),
    });
    dot.append(
      svgEl("title", {}, [
        `${p.day} · ${p.label} · ${(p.proportion * 100).toFixed(1)}% (${p.count})`,
      ]),
    );
    series.get(p.label)!.append(dot);
  }
  axes(svg, [
    { at: 0, text: "0" },
    { at: 0.5, text: "0.5" },
    { at: 1, text: "1" },
  ], days);

  const legend = el("div", { class: "legend" });
  for (const label of labels) {
    const item = el(
      "button",
      { type: "button", class: "legend-item", "data-label": label },
      [el("span", { class: "swatch", style: `background:${labelColor(label)}` }), label],
    );
    item.addEventListener("click", () => {
      const group = series.get(label)!;
      const hidden = group.getAttribute("class") === "hidden";
      group.setAttribute("class", hidden ? "" : "hidden");
      item.setAttribute("class", hidden ? "legend-item" : "legend-item off");
    });
    legend.append(item);
  }
  container.append(svg, legend);
}
