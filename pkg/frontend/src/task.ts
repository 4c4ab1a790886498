// Selection state for one best/worst question. Pure: every action returns
// a new view, and a view can never hold best === worst.

export interface Task {
  tuple_id: string;
  items: string[];
}

export interface TaskView {
  task: Task;
  selectedBest: number | null;
  selectedWorst: number | null;
  warning: string | null;
}

export function isTask(value: unknown): value is Task {
  if (typeof value !== "object" || value === null) return false;
  const candidate = value as Record<string, unknown>;
  return (
    typeof candidate.tuple_id === "string" &&
    Array.isArray(candidate.items) &&
    candidate.items.length === 4 &&
    candidate.items.every((item) => typeof item === "string" && item.length > 0)
  );
}

export function createView(task: Task): TaskView {
  return { task, selectedBest: null, selectedWorst: null, warning: null };
}

export function selectBest(view: TaskView, index: number): TaskView {
  checkIndex(view, index);
  if (view.selectedWorst === index) {
    return {
      ...view,
      selectedBest: index,
      selectedWorst: null,
      warning: "That term was selected as most negative; that selection was cleared.",
    };
  }
  return { ...view, selectedBest: index, warning: null };
}

export function selectWorst(view: TaskView, index: number): TaskView {
  checkIndex(view, index);
  if (view.selectedBest === index) {
    return {
      ...view,
      selectedWorst: index,
      selectedBest: null,
      warning: "That term was selected as most positive; that selection was cleared.",
    };
  }
  return { ...view, selectedWorst: index, warning: null };
}

export function canSubmit(view: TaskView): boolean {
  return (
    view.selectedBest !== null &&
    view.selectedWorst !== null &&
    view.selectedBest !== view.selectedWorst
  );
}

function checkIndex(view: TaskView, index: number): void {
  if (!Number.isInteger(index) || index < 0 || index >= view.task.items.length) {
    throw new RangeError(`item index ${index} out of range`);
  }
}
