// Typed client for the documented /api/v1 contract. All score-valued
// fields travel as exact rational/decimal strings and are displayed
// verbatim; the UI never recomputes statistics.

export interface PerformanceLevel {
  label: string;
  points: string;
}

export interface Criterion {
  name: string;
  levels: PerformanceLevel[];
}

export interface Rubric {
  id: string;
  name: string;
  description: string;
  predefined: boolean;
  criteria: Criterion[];
  max_score: string;
}

export interface SchoolClass {
  id: string;
  owner_user_id: string;
  name: string;
  student_ids: string[];
}

export interface Student {
  id: string;
  name: string;
  email: string;
}

export interface Course {
  id: string;
  class_id: string;
  name: string;
}

export interface Assignment {
  id: string;
  course_id: string;
  name: string;
  rubric_id: string;
  threshold: string | null;
}

export interface GradeRecord {
  id: string;
  assignment_id: string;
  student_id: string;
  selections: Record<string, string>;
  total: string;
  percentage: string;
  percentage_display: string;
  graded_at: string;
  comment: string;
}

export interface StatsSummary {
  n: number;
  mean: string;
  median: string;
  modes: string[];
  min: string;
  max: string;
}

export interface StatsResponse {
  no_data: boolean;
  summary?: StatsSummary;
  criteria?: Record<string, StatsSummary>;
}

export interface ChartSeriesEntry {
  label: string;
  value: string;
}

export interface ChartData {
  kind: "bar" | "pie";
  title: string;
  series: ChartSeriesEntry[];
}

export interface GraphsResponse {
  no_data: boolean;
  threshold: string;
  bar?: ChartData;
  pie?: ChartData;
}

export interface DeliveryResult {
  student_id: string;
  status: "sent" | "duplicate" | "error";
  detail: string;
}

export interface AttendanceRecord {
  class_id: string;
  date: string;
  statuses: Record<string, "present" | "absent">;
}

export interface Note {
  id: string;
  owner_user_id: string;
  title: string;
  body: string;
  created_at: string;
}

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  token: string | null = null;

  constructor(public baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await fetch(`${this.baseUrl}/api/v1${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 204) return undefined as T;
    const isCsv = (response.headers.get("content-type") ?? "").includes("text/csv");
    if (!response.ok) {
      const err = await response.json().catch(() => ({}));
      throw new ApiError(err.code ?? "unknown", err.message ?? response.statusText, response.status);
    }
    return (isCsv ? response.text() : response.json()) as Promise<T>;
  }

  // auth
  register(email: string, password: string, displayName: string) {
    return this.request<{ user_id: string }>("POST", "/auth/register", {
      email,
      password,
      display_name: displayName,
    });
  }

  async login(email: string, password: string) {
    const out = await this.request<{ token: string; user_id: string; expires_at: number }>(
      "POST",
      "/auth/login",
      { email, password },
    );
    this.token = out.token;
    return out;
  }

  // classes & students
  createClass(name: string) {
    return this.request<SchoolClass>("POST", "/classes", { name });
  }
  listClasses() {
    return this.request<SchoolClass[]>("GET", "/classes");
  }
  addStudent(classId: string, name: string, email: string) {
    return this.request<Student>("POST", `/classes/${classId}/students`, { name, email });
  }
  listStudents(classId: string) {
    return this.request<Student[]>("GET", `/classes/${classId}/students`);
  }

  // courses
  createCourse(classId: string, name: string) {
    return this.request<Course>("POST", "/courses", { class_id: classId, name });
  }
  listCourses(classId?: string) {
    const query = classId ? `?class_id=${encodeURIComponent(classId)}` : "";
    return this.request<Course[]>("GET", `/courses${query}`);
  }

  // rubrics
  createRubric(name: string, criteria: Criterion[], description = "") {
    return this.request<Rubric>("POST", "/rubrics", { name, criteria, description });
  }
  listRubrics() {
    return this.request<Rubric[]>("GET", "/rubrics");
  }
  listPredefinedRubrics() {
    return this.request<Rubric[]>("GET", "/rubrics/predefined");
  }
  getRubric(id: string) {
    return this.request<Rubric>("GET", `/rubrics/${id}`);
  }

  // assignments & grading
  createAssignment(courseId: string, name: string, rubricId: string, threshold?: string) {
    return this.request<Assignment>("POST", "/assignments", {
      course_id: courseId,
      name,
      rubric_id: rubricId,
      ...(threshold !== undefined ? { threshold } : {}),
    });
  }
  listAssignments(courseId?: string) {
    const query = courseId ? `?course_id=${encodeURIComponent(courseId)}` : "";
    return this.request<Assignment[]>("GET", `/assignments${query}`);
  }
  getAssignment(id: string) {
    return this.request<Assignment>("GET", `/assignments/${id}`);
  }
  putGrade(assignmentId: string, studentId: string, selections: Record<string, string>, comment = "") {
    return this.request<GradeRecord>("PUT", `/assignments/${assignmentId}/grades/${studentId}`, {
      selections,
      comment,
    });
  }
  listGrades(assignmentId: string) {
    return this.request<GradeRecord[]>("GET", `/assignments/${assignmentId}/grades`);
  }

  // analytics
  stats(assignmentId: string) {
    return this.request<StatsResponse>("GET", `/assignments/${assignmentId}/stats`);
  }
  graphs(assignmentId: string, threshold?: string) {
    const query = threshold !== undefined ? `?threshold=${encodeURIComponent(threshold)}` : "";
    return this.request<GraphsResponse>("GET", `/assignments/${assignmentId}/graphs${query}`);
  }

  // attendance & notes
  putAttendance(classId: string, date: string, statuses: Record<string, string>) {
    return this.request<AttendanceRecord>("PUT", `/classes/${classId}/attendance/${date}`, { statuses });
  }
  getAttendance(classId: string, date: string) {
    return this.request<AttendanceRecord>("GET", `/classes/${classId}/attendance/${date}`);
  }
  createNote(title: string, body: string) {
    return this.request<Note>("POST", "/notes", { title, body });
  }
  listNotes() {
    return this.request<Note[]>("GET", "/notes");
  }
  updateNote(id: string, fields: { title?: string; body?: string }) {
    return this.request<Note>("PUT", `/notes/${id}`, fields);
  }
  deleteNote(id: string) {
    return this.request<void>("DELETE", `/notes/${id}`);
  }

  // export & feedback
  exportCsv(assignmentId: string) {
    return this.request<string>("GET", `/assignments/${assignmentId}/export.csv`);
  }
  sendFeedback(assignmentId: string) {
    return this.request<{ results: DeliveryResult[] }>("POST", `/assignments/${assignmentId}/feedback`);
  }
}
