// Client-side session state: the token plus the current selection path
// class -> course -> assignment. The token survives reloads via
// sessionStorage; everything else reloads from the API.

import { ApiClient } from "./api.js";

const TOKEN_KEY = "gradelab.token";

export const api = new ApiClient();

export const selection: {
  classId: string | null;
  courseId: string | null;
  assignmentId: string | null;
} = { classId: null, courseId: null, assignmentId: null };

export function restoreSession(): boolean {
  const token = window.sessionStorage.getItem(TOKEN_KEY);
  if (token) api.token = token;
  return api.token !== null;
}

export function storeSession(token: string): void {
  api.token = token;
  window.sessionStorage.setItem(TOKEN_KEY, token);
}

export function clearSession(): void {
  api.token = null;
  window.sessionStorage.removeItem(TOKEN_KEY);
  selection.classId = selection.courseId = selection.assignmentId = null;
}
