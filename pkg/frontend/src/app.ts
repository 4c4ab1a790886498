// DOM controller for the annotation flow: log in once, read the
// instructions, then loop task -> selections -> submit until the server
// runs out of work.

import { ApiError, fetchTask, MalformedTaskError, submitResponse } from "./api";
import { canSubmit, createView, selectBest, selectWorst, Task, TaskView } from "./task";

const STORAGE_KEY = "bwslex.annotator";

const INSTRUCTIONS = [
  "You will be shown four terms at a time. Terms can be single words or short phrases.",
  "Pick the term that is the MOST POSITIVE (or least negative) of the four, and the term that is the MOST NEGATIVE (or least positive).",
  "The same term cannot be both answers. There are no right or wrong answers beyond your own judgment; go with your first impression.",
  "You can use Tab and the arrow keys to move between options and Enter to submit.",
];

export class AnnotationApp {
  private view: TaskView | null = null;
  private annotator = "";
  private tally = 0;
  private busy = false;

  constructor(private root: HTMLElement) {}

  start(): void {
    const remembered = window.localStorage.getItem(STORAGE_KEY);
    if (remembered) {
      this.annotator = remembered;
      void this.advance();
    } else {
      this.renderLogin();
    }
  }

  // ------------------------------------------------------------ rendering

  private clear(): HTMLElement {
    this.root.textContent = "";
    const main = document.createElement("div");
    main.className = "panel";
    this.root.appendChild(main);
    return main;
  }

  private renderLogin(): void {
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

  private renderTask(): void {
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

  private radio(group: "best" | "worst", index: number, item: string): HTMLInputElement {
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
      this.view = group === "best"
        ? selectBest(this.view, index)
        : selectWorst(this.view, index);
      this.syncSelections();
    });
    return input;
  }

  private syncSelections(): void {
    const view = this.view;
    if (view === null) return;
    view.task.items.forEach((_, index) => {
      const best = this.root.querySelector<HTMLInputElement>(`#best-${index}`);
      const worst = this.root.querySelector<HTMLInputElement>(`#worst-${index}`);
      if (best) best.checked = view.selectedBest === index;
      if (worst) worst.checked = view.selectedWorst === index;
    });
    const warning = this.root.querySelector<HTMLElement>("#warning");
    if (warning) warning.textContent = view.warning ?? "";
    const submit = this.root.querySelector<HTMLButtonElement>("#submit-button");
    if (submit) submit.disabled = !canSubmit(view) || this.busy;
  }

  private renderDone(): void {
    const panel = this.clear();
    panel.appendChild(heading("All done"));
    const message = document.createElement("p");
    message.id = "done-message";
    message.textContent =
      `There are no more questions for you right now. ` +
      `You completed ${this.tally} question${this.tally === 1 ? "" : "s"} this session. Thank you!`;
    panel.appendChild(message);
  }

  private renderError(text: string): void {
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

  private async advance(): Promise<void> {
    let task: Task | null;
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

  private async submit(): Promise<void> {
    const view = this.view;
    if (view === null || this.busy || !canSubmit(view)) return;
    // canSubmit guarantees both selections are set and distinct, so a
    // best-equals-worst request can never leave the client
    this.busy = true;
    this.syncSelections();
    const payload = {
      annotator_id: this.annotator,
      tuple_id: view.task.tuple_id,
      best: view.task.items[view.selectedBest as number],
      worst: view.task.items[view.selectedWorst as number],
    };
    try {
      await submitResponse(payload);
      this.tally += 1;
      this.busy = false;
      await this.advance();
    } catch (error) {
      this.busy = false;
      const status = this.root.querySelector<HTMLElement>("#status");
      if (error instanceof ApiError) {
        if (status) status.textContent = error.reason;
      } else if (status) {
        status.textContent = "Network problem; your selections are kept. Submit again to retry.";
      }
      this.syncSelections();
    }
  }
}

function heading(text: string): HTMLElement {
  const h1 = document.createElement("h1");
  h1.textContent = text;
  return h1;
}

function instructionsBlock(open: boolean): HTMLElement {
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

export function initApp(root: HTMLElement): AnnotationApp {
  const app = new AnnotationApp(root);
  app.start();
  return app;
}
