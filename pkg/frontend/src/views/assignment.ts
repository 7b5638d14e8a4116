import { ApiError, type Rubric, type Student } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { previewTotal } from "../grading.js";
import { api, selection } from "../state.js";

async function assignmentContext(assignmentId: string) {
  const assignment = await api.getAssignment(assignmentId);
  const courses = await api.listCourses();
  const course = courses.find((c) => c.id === assignment.course_id)!;
  const [rubric, students] = await Promise.all([
    api.getRubric(assignment.rubric_id),
    api.listStudents(course.class_id),
  ]);
  return { assignment, course, rubric, students };
}

export async function assignmentView(root: HTMLElement, assignmentId: string): Promise<void> {
  clear(root);
  selection.assignmentId = assignmentId;
  const { assignment, course, rubric, students } = await assignmentContext(assignmentId);
  const grades = await api.listGrades(assignmentId);
  const graded = new Map(grades.map((g) => [g.student_id, g]));

  const rows = students.map((s) => {
    const grade = graded.get(s.id);
    return el(
      "tr",
      {},
      el("td", {}, s.name),
      el("td", {}, grade ? `${grade.total} / ${rubric.max_score} (${grade.percentage_display}%)` : "ungraded"),
      el("td", {}, el("a", { href: `#/assignments/${assignmentId}/grade/${s.id}` }, grade ? "Re-grade" : "Grade")),
    );
  });

  root.append(
    el("p", {}, el("a", { href: `#/courses/${course.id}` }, "< Course")),
    el("h1", {}, assignment.name),
    el("p", {}, `Rubric: ${rubric.name} (max ${rubric.max_score})`),
    el("table", {}, el("tr", {}, el("th", {}, "Student"), el("th", {}, "Score"), el("th", {}, "")), ...rows),
    el(
      "p",
      {},
      el("a", { href: `#/assignments/${assignmentId}/stats` }, "Statistics"),
      " · ",
      el("a", { href: `#/assignments/${assignmentId}/charts` }, "Graphs"),
      " · ",
      el("a", { href: `#/assignments/${assignmentId}/feedback` }, "Feedback"),
    ),
  );
}

function gradeFormRows(
  rubric: Rubric,
  selections: Record<string, string>,
  onChange: () => void,
): HTMLElement[] {
  return rubric.criteria.map((criterion) => {
    const picker = el("select", { "data-criterion": criterion.name });
    picker.append(el("option", { value: "" }, "— select level —"));
    for (const level of criterion.levels) {
      picker.append(el("option", { value: level.label }, `${level.label} (${level.points})`));
    }
    if (selections[criterion.name]) picker.value = selections[criterion.name];
    picker.addEventListener("change", () => {
      if (picker.value === "") delete selections[criterion.name];
      else selections[criterion.name] = picker.value;
      onChange();
    });
    return el(
      "p",
      { class: "criterion-row", "data-criterion": criterion.name },
      el("label", {}, `${criterion.name}: `),
      picker,
      el("span", { class: "inline-error", "data-for": criterion.name }),
    );
  });
}

export async function gradingFormView(
  root: HTMLElement,
  assignmentId: string,
  studentId: string,
): Promise<void> {
  clear(root);
  const { assignment, rubric, students } = await assignmentContext(assignmentId);
  const student = students.find((s: Student) => s.id === studentId);
  if (!student) {
    root.append(errorBox("student not found"));
    return;
  }
  const existing = (await api.listGrades(assignmentId)).find((g) => g.student_id === studentId);
  const selections: Record<string, string> = { ...(existing?.selections ?? {}) };

  const preview = el("p", { class: "preview" });
  function refreshPreview(): void {
    const p = previewTotal(rubric, selections);
    preview.textContent = p.complete
      ? `Total: ${p.total} / ${rubric.max_score} — ${p.percentDisplay}%`
      : `Total so far: ${p.total} / ${rubric.max_score} (incomplete)`;
  }
  const rows = gradeFormRows(rubric, selections, refreshPreview);
  refreshPreview();

  const comment = el("textarea", { rows: "3", cols: "60", placeholder: "comment (optional)" });
  if (existing) comment.value = existing.comment;
  const status = el("div", {});
  const form = el(
    "form",
    {},
    ...rows,
    preview,
    el("p", {}, comment),
    el("p", {}, el("button", { type: "submit" }, "Save grade")),
    status,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clear(status);
    for (const span of form.querySelectorAll(".inline-error")) span.textContent = "";
    try {
      await api.putGrade(assignmentId, studentId, selections, comment.value);
      // grades are never shown optimistically; always reload from the API
      window.location.hash = `#/assignments/${assignmentId}`;
    } catch (err) {
      if (err instanceof ApiError) {
        // surface per-criterion validation errors inline when possible
        const match = err.message.match(/criterion '([^']+)'/);
        const target = match && form.querySelector(`.inline-error[data-for="${match[1]}"]`);
        if (target) target.textContent = ` ${err.message}`;
        else status.append(errorBox(err.message));
      } else {
        status.append(errorBox(String(err)));
      }
    }
  });

  root.append(
    el("p", {}, el("a", { href: `#/assignments/${assignmentId}` }, "< Assignment")),
    el("h1", {}, `Grading ${student.name} — ${assignment.name}`),
    form,
  );
}
