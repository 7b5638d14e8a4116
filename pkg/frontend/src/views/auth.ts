import { ApiError } from "../api.js";
import { clear, el, errorBox } from "../dom.js";
import { api, storeSession } from "../state.js";

export function loginView(root: HTMLElement): void {
  clear(root);
  const email = el("input", { type: "email", placeholder: "email" });
  const password = el("input", { type: "password", placeholder: "password" });
  const status = el("div", {});
  const form = el(
    "form",
    {},
    el("h1", {}, "Log in"),
    el("p", {}, email),
    el("p", {}, password),
    el("p", {}, el("button", { type: "submit" }, "Log in")),
    el("p", {}, el("a", { href: "#/register" }, "Create an account")),
    status,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clear(status);
    try {
      const result = await api.login(email.value, password.value);
      storeSession(result.token);
      window.location.hash = "#/classes";
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });
  root.append(form);
}

export function registerView(root: HTMLElement): void {
  clear(root);
  const name = el("input", { placeholder: "display name" });
  const email = el("input", { type: "email", placeholder: "email" });
  const password = el("input", { type: "password", placeholder: "password (min 8 chars)" });
  const status = el("div", {});
  const form = el(
    "form",
    {},
    el("h1", {}, "Register"),
    el("p", {}, name),
    el("p", {}, email),
    el("p", {}, password),
    el("p", {}, el("button", { type: "submit" }, "Register")),
    el("p", {}, el("a", { href: "#/login" }, "Back to login")),
    status,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clear(status);
    try {
      await api.register(email.value, password.value, name.value);
      const result = await api.login(email.value, password.value);
      storeSession(result.token);
      window.location.hash = "#/classes";
    } catch (err) {
      status.append(errorBox(err instanceof ApiError ? err.message : String(err)));
    }
  });
  root.append(form);
}
