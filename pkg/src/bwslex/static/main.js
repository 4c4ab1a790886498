// src/task.ts
function isTask(value) {
  if (typeof value !== "object" || value === null) return false;
  const candidate = value;
  return typeof candidate.tuple_id === "string" && Array.isArray(candidate.items) && candidate.items.length === 4 && candidate.items.every((item) => typeof item === "string" && item.length > 0);
}
function createView(task) {
  return { task, selectedBest: null, selectedWorst: null, warning: null };
}
function selectBest(view, index) {
  checkIndex(view, index);
  if (view.selectedWorst === index) {
    return {
      ...view,
      selectedBest: index,
      selectedWorst: null,
      warning: "That term was selected as most negative; that selection was cleared."
    };
  }
  return { ...view, selectedBest: index, warning: null };
}
function selectWorst(view, index) {
  checkIndex(view, index);
  if (view.selectedBest === index) {
    return {
      ...view,
      selectedWorst: index,
      selectedBest: null,
      warning: "That term was selected as most positive; that selection was cleared."
    };
  }
  return { ...view, selectedWorst: index, warning: null };
}
function canSubmit(view) {
  return view.selectedBest !== null && view.selectedWorst !== null && view.selectedBest !== view.selectedWorst;
}
function checkIndex(view, index) {
  if (!Number.isInteger(index) || index < 0 || index >= view.task.items.length) {
    throw new RangeError(`item index ${index} out of range`);
  }
}

// src/api.ts
var ApiError = class extends Error {
  constructor(reason, status) {
    super(reason);
    this.reason = reason;
    this.status = status;
    this.name = "ApiError";
  }
};
var MalformedTaskError = class extends Error {
  constructor() {
    super("the server sent a malformed task");
    this.name = "MalformedTaskError";
  }
};
async function errorReason(response) {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
  }
  return `request failed with status ${response.status}`;
}
async function fetchTask(annotator) {
  const response = await fetch(`/api/task?annotator=${encodeURIComponent(annotator)}`);
  if (response.status === 204) return null;
  if (!response.ok) throw new ApiError(await errorReason(response), response.status);
  const body = await response.json();
  if (!isTask(body)) throw new MalformedTaskError();
  return body;
}
async function submitResponse(submission) {
  const response = await fetch("/api/response", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(submission)
  });
  if (!response.ok) throw new ApiError(await errorReason(response), response.status);
  const body = await response.json();
  return body.status === "duplicate" ? "duplicate" : "ok";
}

// src/app.ts
var STORAGE_KEY = "bwslex.annotator";
var INSTRUCTIONS = [
  "You will be shown four terms at a time. Terms can be single words or short phrases.",
  "Pick the term that is the MOST POSITIVE (or least negative) of the four, and the term that is the MOST NEGATIVE (or least positive).",
  "The same term cannot be both answers. There are no right or wrong answers beyond your own judgment; go with your first impression.",
  "You can use Tab and the arrow keys to move between options and Enter to submit."
];
var AnnotationApp = class {
  constructor(root2) {
    this.root = root2;
    this.view = null;
    this.annotator = "";
    this.tally = 0;
    this.busy = false;
  }
  start() {
    const remembered = window.localStorage.getItem(STORAGE_KEY);
    if (remembered) {
      this.annotator = remembered;
      void this.advance();
    } else {
      this.renderLogin();
    }
  }
  // ------------------------------------------------------------ rendering
  clear() {
    this.root.textContent = "";
    const main = document.createElement("div");
    main.className = "panel";
    this.root.appendChild(main);
    return main;
  }
  renderLogin() {
    const panel = this.clear();
    panel.appendChild(heading("Sentiment annotation"));
    panel.appendChild(instructionsBlock(true));
    const form = document.createElement("form");
    form.id = "login-form";
    const label = document.createElement("label");
    label.textContent = "Your annotator name: ";
    label.htmlFor = "annotator-input";
    const input = document.createElement("input");
    input.id = "annotator-input";
    input.name = "annotator";
    input.required = true;
    input.autocomplete = "username";
    const button = document.createElement("button");
    button.type = "submit";
    button.id = "login-button";
    button.textContent = "Start annotating";
    form.append(label, input, button);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const name = input.value.trim();
      if (!name) return;
      this.annotator = name;
      window.localStorage.setItem(STORAGE_KEY, name);
      void this.advance();
    });
    panel.appendChild(form);
  }
  renderTask() {
    const view = this.view;
    if (view === null) return;
    const panel = this.clear();
    panel.appendChild(heading("Which term is most positive? Which is most negative?"));
    panel.appendChild(instructionsBlock(false));
    const table = document.createElement("table");
    table.id = "task-table";
    const head = table.createTHead().insertRow();
    for (const text of ["Term", "Most positive", "Most negative"]) {
      const cell = document.createElement("th");
      cell.textContent = text;
      head.appendChild(cell);
    }
    const body = table.createTBody();
    view.task.items.forEach((item, index) => {
      const row = body.insertRow();
      const term = row.insertCell();
      term.textContent = item;
      term.className = "term";
      row.insertCell().appendChild(this.radio("best", index, item));
      row.insertCell().appendChild(this.radio("worst", index, item));
    });
    panel.appendChild(table);
    const warning = document.createElement("p");
    warning.id = "warning";
    warning.role = "alert";
    warning.textContent = view.warning ?? "";
    panel.appendChild(warning);
    const status = document.createElement("p");
    status.id = "status";
    status.role = "status";
    panel.appendChild(status);
    const submit = document.createElement("button");
    submit.id = "submit-button";
    submit.type = "button";
    submit.textContent = "Submit and continue";
    submit.disabled = !canSubmit(view) || this.busy;
    submit.addEventListener("click", () => void this.submit());
    panel.appendChild(submit);
    const tally = document.createElement("p");
    tally.id = "tally";
    tally.className = "muted";
    tally.textContent = `Completed this session: ${this.tally}`;
    panel.appendChild(tally);
  }
  radio(group, index, item) {
    const view = this.view;
    const input = document.createElement("input");
    input.type = "radio";
    input.name = group;
    input.value = String(index);
    input.id = `${group}-${index}`;
    input.setAttribute("aria-label", `${item}: ${group === "best" ? "most positive" : "most negative"}`);
    const selected = group === "best" ? view?.selectedBest : view?.selectedWorst;
    input.checked = selected === index;
    input.addEventListener("change", () => {
      if (this.view === null) return;
      this.view = group === "best" ? selectBest(this.view, index) : selectWorst(this.view, index);
      this.syncSelections();
    });
    return input;
  }
  syncSelections() {
    const view = this.view;
    if (view === null) return;
    view.task.items.forEach((_, index) => {
      const best = this.root.querySelector(`#best-${index}`);
      const worst = this.root.querySelector(`#worst-${index}`);
      if (best) best.checked = view.selectedBest === index;
      if (worst) worst.checked = view.selectedWorst === index;
    });
    const warning = this.root.querySelector("#warning");
    if (warning) warning.textContent = view.warning ?? "";
    const submit = this.root.querySelector("#submit-button");
    if (submit) submit.disabled = !canSubmit(view) || this.busy;
  }
  renderDone() {
    const panel = this.clear();
    panel.appendChild(heading("All done"));
    const message = document.createElement("p");
    message.id = "done-message";
    message.textContent = `There are no more questions for you right now. You completed ${this.tally} question${this.tally === 1 ? "" : "s"} this session. Thank you!`;
    panel.appendChild(message);
  }
  renderError(text) {
    const panel = this.clear();
    panel.appendChild(heading("Something went wrong"));
    const message = document.createElement("p");
    message.id = "error-message";
    message.role = "alert";
    message.textContent = text;
    panel.appendChild(message);
    const retry = document.createElement("button");
    retry.id = "retry-button";
    retry.type = "button";
    retry.textContent = "Try again";
    retry.addEventListener("click", () => void this.advance());
    panel.appendChild(retry);
  }
  // ------------------------------------------------------------- actions
  async advance() {
    let task;
    try {
      task = await fetchTask(this.annotator);
    } catch (error) {
      if (error instanceof MalformedTaskError) {
        this.renderError(error.message);
      } else {
        this.renderError("Could not reach the annotation server.");
      }
      return;
    }
    if (task === null) {
      this.view = null;
      this.renderDone();
      return;
    }
    this.view = createView(task);
    this.renderTask();
  }
  async submit() {
    const view = this.view;
    if (view === null || this.busy || !canSubmit(view)) return;
    this.busy = true;
    this.syncSelections();
    const payload = {
      annotator_id: this.annotator,
      tuple_id: view.task.tuple_id,
      best: view.task.items[view.selectedBest],
      worst: view.task.items[view.selectedWorst]
    };
    try {
      await submitResponse(payload);
      this.tally += 1;
      this.busy = false;
      await this.advance();
    } catch (error) {
      this.busy = false;
      const status = this.root.querySelector("#status");
      if (error instanceof ApiError) {
        if (status) status.textContent = error.reason;
      } else if (status) {
        status.textContent = "Network problem; your selections are kept. Submit again to retry.";
      }
      this.syncSelections();
    }
  }
};
function heading(text) {
  const h1 = document.createElement("h1");
  h1.textContent = text;
  return h1;
}
function instructionsBlock(open) {
  const details = document.createElement("details");
  details.id = "instructions";
  details.open = open;
  const summary = document.createElement("summary");
  summary.textContent = "Instructions";
  details.appendChild(summary);
  for (const paragraph of INSTRUCTIONS) {
    const p = document.createElement("p");
    p.textContent = paragraph;
    details.appendChild(p);
  }
  return details;
}
function initApp(root2) {
  const app = new AnnotationApp(root2);
  app.start();
  return app;
}

// src/main.ts
var root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
initApp(root);
