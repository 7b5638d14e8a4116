import { ApiError } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api } from "../state.js";

function today(): string {
  return new Date().toISOString().slice(0, 10);
}

export async function attendanceView(root: HTMLElement, classId: string): Promise<void> {
  clear(root);
  const students = await api.listStudents(classId);
  const date = el("input", { type: "date", value: today() });
  const table = el("table", {});
  const status = el("div", {});
  const statuses: Record<string, "present" | "absent"> = {};

  async function load(): Promise<void> {
    clear(table);
    try {
      const record = await api.getAttendance(classId, date.value);
      Object.assign(statuses, record.statuses);
    } catch {
      // no record for this date yet; everyone defaults to present
      for (const s of students) statuses[s.id] = "present";
    }
    for (const s of students) {
      const toggle = el("button", { type: "button" }, statuses[s.id] ?? "present");
      toggle.addEventListener("click", () => {
        statuses[s.id] = statuses[s.id] === "present" ? "absent" : "present";
        toggle.textContent = statuses[s.id];
      });
      table.append(el("tr", {}, el("td", {}, s.name), el("td", {}, toggle)));
    }
  }
  date.addEventListener("change", load);
  await load();

  const save = el("button", { type: "button" }, "Save attendance");
  save.addEventListener("click", async () => {
    clear(status);
    try {
      await api.putAttendance(classId, date.value, statuses);
      status.append(el("p", {}, "Saved."));
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });

  root.append(
    el("p", {}, el("a", { href: `#/classes/${classId}` }, "< Class")),
    el("h1", {}, "Attendance"),
    el("p", {}, date),
    table,
    el("p", {}, save),
    status,
  );
}
