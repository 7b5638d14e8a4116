import { ApiError } from "./api.js";
import { clear, el, errorBox } from "./dom.js";
import { clearSession, restoreSession } from "./state.js";
import { chartsView, statsView } from "./views/analytics.js";
import { assignmentView, gradingFormView } from "./views/assignment.js";
import { attendanceView } from "./views/attendance.js";
import { loginView, registerView } from "./views/auth.js";
import { classDetailView, classListView } from "./views/classes.js";
import { courseDetailView } from "./views/courses.js";
import { feedbackView } from "./views/feedback.js";
import { notesView } from "./views/notes.js";
import { rubricListView } from "./views/rubrics.js";

type View = (root: HTMLElement, ...params: string[]) => void | Promise<void>;

const ROUTES: [RegExp, View][] = [
  [/^#\/login$/, loginView],
  [/^#\/register$/, registerView],
  [/^#\/classes$/, classListView],
  [/^#\/classes\/([^/]+)$/, classDetailView],
  [/^#\/classes\/([^/]+)\/attendance$/, attendanceView],
  [/^#\/courses\/([^/]+)$/, courseDetailView],
  [/^#\/assignments\/([^/]+)$/, assignmentView],
  [/^#\/assignments\/([^/]+)\/grade\/([^/]+)$/, gradingFormView],
  [/^#\/assignments\/([^/]+)\/stats$/, statsView],
  [/^#\/assignments\/([^/]+)\/charts$/, chartsView],
  [/^#\/assignments\/([^/]+)\/feedback$/, feedbackView],
  [/^#\/rubrics$/, rubricListView],
  [/^#\/notes$/, notesView],
];

const PUBLIC = new Set(["#/login", "#/register"]);

async function route(): Promise<void> {
  const root = document.getElementById("app")!;
  const hash = window.location.hash || "#/classes";
  const authed = restoreSession();
  if (!authed && !PUBLIC.has(hash)) {
    window.location.hash = "#/login";
    return;
  }
  if (authed && PUBLIC.has(hash)) {
    window.location.hash = "#/classes";
    return;
  }
  for (const [pattern, view] of ROUTES) {
    const match = hash.match(pattern);
    if (!match) continue;
    try {
      await view(root, ...match.slice(1));
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        clearSession();
        window.location.hash = "#/login";
        return;
      }
      clear(root);
      root.append(errorBox(err instanceof Error ? err.message : String(err)));
    }
    return;
  }
  clear(root);
  root.append(errorBox(`no such page: ${hash}`), el("p", {}, el("a", { href: "#/classes" }, "Home")));
}

function mountLogout(): void {
  const button = document.getElementById("logout");
  button?.addEventListener("click", () => {
    clearSession();
    window.location.hash = "#/login";
  });
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", () => {
  mountLogout();
  void route();
});
