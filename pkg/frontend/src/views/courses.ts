import { ApiError } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api, selection } from "../state.js";

export async function courseDetailView(root: HTMLElement, courseId: string): Promise<void> {
  clear(root);
  selection.courseId = courseId;
  const [courses, assignments, rubrics] = await Promise.all([
    api.listCourses(),
    api.listAssignments(courseId),
    api.listRubrics(),
  ]);
  const course = courses.find((c) => c.id === courseId);
  if (!course) {
    root.append(errorBox("course not found"));
    return;
  }

  const list = el(
    "ul",
    {},
    ...assignments.map((a) =>
      el("li", {}, el("a", { href: `#/assignments/${a.id}` }, a.name)),
    ),
  );

  const name = el("input", { placeholder: "assignment name" });
  const rubricPick = el("select", {});
  for (const r of rubrics) {
    rubricPick.append(el("option", { value: r.id }, `${r.name} (max ${r.max_score})`));
  }
  const threshold = el("input", { placeholder: "threshold (optional)" });
  const status = el("div", {});
  const form = el(
    "form",
    {},
    name,
    rubricPick,
    threshold,
    el("button", { type: "submit" }, "Create assignment"),
    status,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await api.createAssignment(
        courseId,
        name.value,
        rubricPick.value,
        threshold.value.trim() === "" ? undefined : threshold.value.trim(),
      );
      await courseDetailView(root, courseId);
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });

  root.append(
    el("p", {}, el("a", { href: `#/classes/${course.class_id}` }, "< Class")),
    el("h1", {}, course.name),
    el("h2", {}, "Assignments"),
    list,
    form,
    el("p", {}, el("a", { href: "#/rubrics" }, "Manage rubrics")),
  );
}
