import { ApiError } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api } from "../state.js";

export async function feedbackView(root: HTMLElement, assignmentId: string): Promise<void> {
  clear(root);
  const assignment = await api.getAssignment(assignmentId);
  const results = el("div", {});
  const send = el("button", { type: "button" }, "Send feedback to all graded students");
  send.addEventListener("click", async () => {
    clear(results);
    send.setAttribute("disabled", "disabled");
    try {
      const out = await api.sendFeedback(assignmentId);
      const table = el(
        "table",
        {},
        el("tr", {}, el("th", {}, "Student"), el("th", {}, "Status"), el("th", {}, "Detail")),
        ...out.results.map((r) =>
          el("tr", {}, el("td", {}, r.student_id), el("td", {}, r.status), el("td", {}, r.detail)),
        ),
      );
      results.append(table);
    } catch (err) {
      results.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    } finally {
      send.removeAttribute("disabled");
    }
  });

  const exportLink = el("button", { type: "button" }, "Download grades CSV");
  exportLink.addEventListener("click", async () => {
    const csv = await api.exportCsv(assignmentId);
    const blob = new Blob([csv], { type: "text/csv" });
    const anchor = el("a", {
      href: URL.createObjectURL(blob),
      download: `${assignment.name}.csv`,
    });
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  });

  root.append(
    el("p", {}, el("a", { href: `#/assignments/${assignmentId}` }, "< Assignment")),
    el("h1", {}, `Feedback — ${assignment.name}`),
    el("p", {}, send),
    results,
    el("h2", {}, "Export"),
    el("p", {}, exportLink),
  );
}
