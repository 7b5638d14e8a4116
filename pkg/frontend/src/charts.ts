// Client-side vector rendering of the ChartData payloads. Numeric labels
// show the API's strings verbatim; parsing to float happens only for
// geometry (bar heights, pie angles).

import type { ChartData } from "./api.js";

const PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"];
const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function svgText(x: number, y: number, text: string, size = 10, anchor = "middle"): SVGElement {
  const node = svgEl("text", {
    x: x.toFixed(1),
    y: y.toFixed(1),
    "text-anchor": anchor,
    "font-size": String(size),
  });
  node.textContent = text;
  return node;
}

export function renderBarChart(chart: ChartData, width = 640, height = 320): SVGElement {
  const pad = 30;
  const axis = 40;
  const svg = svgEl("svg", { width: String(width), height: String(height) });
  svg.append(svgText(width / 2, 18, chart.title, 14));
  svg.append(svgEl("line", { x1: String(axis), y1: String(pad), x2: String(axis), y2: String(height - pad), stroke: "#333" }));
  svg.append(svgEl("line", { x1: String(axis), y1: String(height - pad), x2: String(width - pad), y2: String(height - pad), stroke: "#333" }));
  const values = chart.series.map((s) => parseFloat(s.value));
  const top = Math.max(...values, 1);
  const slot = (width - axis - pad) / Math.max(chart.series.length, 1);
  chart.series.forEach((entry, i) => {
    const barH = ((height - 2 * pad) * parseFloat(entry.value)) / top;
    const x = axis + i * slot + slot * 0.15;
    const y = height - pad - barH;
    svg.append(
      svgEl("rect", {
        x: x.toFixed(1),
        y: y.toFixed(1),
        width: (slot * 0.7).toFixed(1),
        height: barH.toFixed(1),
        fill: PALETTE[i % PALETTE.length],
      }),
    );
    svg.append(svgText(x + slot * 0.35, height - pad + 14, entry.label));
    svg.append(svgText(x + slot * 0.35, y - 4, entry.value));
  });
  return svg;
}

export function renderPieChart(chart: ChartData, size = 300): SVGElement {
  const cx = size / 2;
  const cy = size / 2;
  const r = size / 2 - 40;
  const svg = svgEl("svg", { width: String(size), height: String(size + 50) });
  svg.append(svgText(cx, 18, chart.title, 14));
  const values = chart.series.map((s) => parseFloat(s.value));
  const total = values.reduce((a, b) => a + b, 0);
  if (total <= 0) {
    svg.append(svgEl("circle", { cx: String(cx), cy: String(cy), r: String(r), fill: "none", stroke: "#999" }));
    svg.append(svgText(cx, cy, "no data", 12));
  } else {
    let angle = -Math.PI / 2;
    chart.series.forEach((entry, i) => {
      const frac = parseFloat(entry.value) / total;
      if (frac <= 0) return;
      const end = angle + 2 * Math.PI * frac;
      const fill = PALETTE[i % PALETTE.length];
      if (frac >= 1) {
        svg.append(svgEl("circle", { cx: String(cx), cy: String(cy), r: String(r), fill }));
      } else {
        const x1 = cx + r * Math.cos(angle);
        const y1 = cy + r * Math.sin(angle);
        const x2 = cx + r * Math.cos(end);
        const y2 = cy + r * Math.sin(end);
        const large = frac > 0.5 ? 1 : 0;
        svg.append(
          svgEl("path", {
            d: `M${cx},${cy} L${x1.toFixed(2)},${y1.toFixed(2)} A${r},${r} 0 ${large} 1 ${x2.toFixed(2)},${y2.toFixed(2)} Z`,
            fill,
          }),
        );
      }
      angle = end;
    });
  }
  chart.series.forEach((entry, i) => {
    const y = size + 14 + i * 14;
    svg.append(svgEl("rect", { x: "10", y: String(y - 9), width: "10", height: "10", fill: PALETTE[i % PALETTE.length] }));
    svg.append(svgText(26, y, `${entry.label}: ${entry.value}`, 11, "start"));
  });
  return svg;
}
