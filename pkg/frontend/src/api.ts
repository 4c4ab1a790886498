// Thin client for the annotation service endpoints.

import { isTask, Task } from "./task";

export class ApiError extends Error {
  constructor(readonly reason: string, readonly status: number) {
    super(reason);
    this.name = "ApiError";
  }
}

export class MalformedTaskError extends Error {
  constructor() {
    super("the server sent a malformed task");
    this.name = "MalformedTaskError";
  }
}

async function errorReason(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the generic reason
  }
  return `request failed with status ${response.status}`;
}

/** Next task for the annotator, or null when no work is left (204). */
export async function fetchTask(annotator: string): Promise<Task | null> {
  const response = await fetch(`/api/task?annotator=${encodeURIComponent(annotator)}`);
  if (response.status === 204) return null;
  if (!response.ok) throw new ApiError(await errorReason(response), response.status);
  const body = await response.json();
  if (!isTask(body)) throw new MalformedTaskError();
  return body;
}

export interface Submission {
  annotator_id: string;
  tuple_id: string;
  best: string;
  worst: string;
}

/** Submit a judgment; resolves to "ok" or "duplicate", throws ApiError with
 * the server's verbatim reason on a 400. */
export async function submitResponse(submission: Submission): Promise<"ok" | "duplicate"> {
  const response = await fetch("/api/response", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(submission),
  });
  if (!response.ok) throw new ApiError(await errorReason(response), response.status);
  const body = await response.json();
  return body.status === "duplicate" ? "duplicate" : "ok";
}
