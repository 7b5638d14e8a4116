import { ApiError, type Criterion } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api } from "../state.js";

function rubricSummary(criteria: Criterion[]): string {
  return criteria
    .map((c) => `${c.name}: ${c.levels.map((l) => `${l.label}=${l.points}`).join(", ")}`)
    .join(" | ");
}

export async function rubricListView(root: HTMLElement): Promise<void> {
  clear(root);
  const rubrics = await api.listRubrics();
  const list = el(
    "ul",
    {},
    ...rubrics.map((r) =>
      el(
        "li",
        {},
        el("strong", {}, r.name),
        r.predefined ? " [predefined]" : "",
        ` (max ${r.max_score}) — `,
        rubricSummary(r.criteria),
      ),
    ),
  );

  // rubric builder: one textarea row per criterion,
  // format: name: Label=points, Label=points, ...
  const name = el("input", { placeholder: "rubric name" });
  const spec = el("textarea", {
    rows: "4",
    cols: "70",
    placeholder: "one criterion per line: Clarity: Poor=1, Good=2, Excellent=3",
  });
  const status = el("div", {});
  const form = el(
    "form",
    {},
    el("p", {}, name),
    el("p", {}, spec),
    el("p", {}, el("button", { type: "submit" }, "Create rubric")),
    status,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clear(status);
    try {
      const criteria: Criterion[] = spec.value
        .split("\n")
        .map((line) => line.trim())
        .filter((line) => line.length > 0)
        .map((line) => {
          const [cname, rest] = line.split(/:(.+)/, 2);
          const levels = (rest ?? "").split(",").map((part) => {
            const [label, points] = part.split("=").map((s) => s.trim());
            return { label, points };
          });
          return { name: cname.trim(), levels };
        });
      await api.createRubric(name.value, criteria);
      await rubricListView(root);
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });

  root.append(
    el("p", {}, el("a", { href: "#/classes" }, "< Classes")),
    el("h1", {}, "Rubrics"),
    list,
    el("h2", {}, "New rubric"),
    form,
  );
}
