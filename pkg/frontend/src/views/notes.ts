import { ApiError } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api } from "../state.js";

export async function notesView(root: HTMLElement): Promise<void> {
  clear(root);
  const notes = await api.listNotes();
  const status = el("div", {});

  const list = el("div", {});
  for (const note of notes) {
    const remove = el("button", { type: "button" }, "Delete");
    remove.addEventListener("click", async () => {
      await api.deleteNote(note.id);
      await notesView(root);
    });
    const edit = el("button", { type: "button" }, "Save edits");
    const body = el("textarea", { rows: "3", cols: "60" });
    body.value = note.body;
    edit.addEventListener("click", async () => {
      clear(status);
      try {
        await api.updateNote(note.id, { body: body.value });
        status.append(el("p", {}, "Saved."));
      } catch (err) {
        status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
      }
    });
    list.append(
      el("h3", {}, note.title, " ", remove),
      el("p", {}, body),
      el("p", {}, edit),
    );
  }

  const title = el("input", { placeholder: "title" });
  const body = el("textarea", { rows: "3", cols: "60", placeholder: "note body" });
  const form = el(
    "form",
    {},
    el("p", {}, title),
    el("p", {}, body),
    el("p", {}, el("button", { type: "submit" }, "Create note")),
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clear(status);
    try {
      await api.createNote(title.value, body.value);
      await notesView(root);
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });

  root.append(
    el("p", {}, el("a", { href: "#/classes" }, "< Classes")),
    el("h1", {}, "Notes"),
    list,
    el("h2", {}, "New note"),
    form,
    status,
  );
}
