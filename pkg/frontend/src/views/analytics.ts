import type { StatsSummary } from "../api.js";
import { renderBarChart, renderPieChart } from "../charts.js";
import { clear, el, errorBox } from "../dom.js";
import { api } from "../state.js";

function summaryTable(summary: StatsSummary): HTMLElement {
  const row = (label: string, value: string) =>
    el("tr", {}, el("th", {}, label), el("td", {}, value));
  return el(
    "table",
    {},
    row("n", String(summary.n)),
    row("mean", summary.mean),
    row("median", summary.median),
    row("mode", summary.modes.join(", ")),
    row("min", summary.min),
    row("max", summary.max),
  );
}

export async function statsView(root: HTMLElement, assignmentId: string): Promise<void> {
  clear(root);
  const [assignment, response] = await Promise.all([
    api.getAssignment(assignmentId),
    api.stats(assignmentId),
  ]);
  root.append(
    el("p", {}, el("a", { href: `#/assignments/${assignmentId}` }, "< Assignment")),
    el("h1", {}, `Statistics — ${assignment.name}`),
  );
  if (response.no_data || !response.summary) {
    root.append(el("p", {}, "No grades recorded yet."));
    return;
  }
  root.append(el("h2", {}, "Totals"), summaryTable(response.summary));
  if (response.criteria) {
    root.append(el("h2", {}, "Per criterion"));
    for (const [name, summary] of Object.entries(response.criteria)) {
      root.append(el("h3", {}, name), summaryTable(summary));
    }
  }
}

export async function chartsView(root: HTMLElement, assignmentId: string): Promise<void> {
  clear(root);
  const assignment = await api.getAssignment(assignmentId);
  const chartsBox = el("div", {});
  const threshold = el("input", { placeholder: "threshold" });
  const apply = el("button", { type: "button" }, "Apply threshold");
  const status = el("div", {});

  async function load(value?: string): Promise<void> {
    clear(chartsBox);
    clear(status);
    try {
      const response = await api.graphs(assignmentId, value);
      if (response.no_data || !response.bar || !response.pie) {
        chartsBox.append(el("p", {}, "No grades recorded yet."));
        return;
      }
      threshold.value = response.threshold;
      chartsBox.append(renderBarChart(response.bar), renderPieChart(response.pie));
    } catch (err) {
      status.append(errorBox(err instanceof Error ? err.message : String(err)));
    }
  }
  apply.addEventListener("click", () => load(threshold.value.trim() || undefined));
  await load();

  root.append(
    el("p", {}, el("a", { href: `#/assignments/${assignmentId}` }, "< Assignment")),
    el("h1", {}, `Graphs — ${assignment.name}`),
    el("p", {}, threshold, " ", apply),
    status,
    chartsBox,
  );
}
