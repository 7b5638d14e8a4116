import { ApiError } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api, selection } from "../state.js";

export async function classListView(root: HTMLElement): Promise<void> {
  clear(root);
  const classes = await api.listClasses();
  const list = el("ul", {});
  for (const cls of classes) {
    list.append(
      el(
        "li",
        {},
        el("a", { href: `#/classes/${cls.id}` }, cls.name),
        ` (${cls.student_ids.length} students)`,
      ),
    );
  }
  const name = el("input", { placeholder: "class name" });
  const status = el("div", {});
  const form = el("form", {}, name, el("button", { type: "submit" }, "Create class"), status);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await api.createClass(name.value);
      await classListView(root);
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });
  root.append(el("h1", {}, "Classes"), list, form, el("p", {}, el("a", { href: "#/notes" }, "Notes")));
}

export async function classDetailView(root: HTMLElement, classId: string): Promise<void> {
  clear(root);
  selection.classId = classId;
  const [classes, students, courses] = await Promise.all([
    api.listClasses(),
    api.listStudents(classId),
    api.listCourses(classId),
  ]);
  const cls = classes.find((c) => c.id === classId);
  if (!cls) {
    root.append(errorBox("class not found"));
    return;
  }

  const studentList = el(
    "ul",
    {},
    ...students.map((s) => el("li", {}, `${s.name} <${s.email}>`)),
  );
  const sName = el("input", { placeholder: "student name" });
  const sEmail = el("input", { placeholder: "email" });
  const status = el("div", {});
  const addForm = el("form", {}, sName, sEmail, el("button", { type: "submit" }, "Add student"), status);
  addForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await api.addStudent(classId, sName.value, sEmail.value);
      await classDetailView(root, classId);
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });

  const courseList = el(
    "ul",
    {},
    ...courses.map((c) => el("li", {}, el("a", { href: `#/courses/${c.id}` }, c.name))),
  );
  const cName = el("input", { placeholder: "course name" });
  const courseForm = el("form", {}, cName, el("button", { type: "submit" }, "Create course"));
  courseForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    await api.createCourse(classId, cName.value);
    await classDetailView(root, classId);
  });

  root.append(
    el("p", {}, el("a", { href: "#/classes" }, "< Classes")),
    el("h1", {}, cls.name),
    el("h2", {}, "Students"),
    studentList,
    addForm,
    el("h2", {}, "Courses"),
    courseList,
    courseForm,
    el("p", {}, el("a", { href: `#/classes/${classId}/attendance` }, "Attendance")),
  );
}
