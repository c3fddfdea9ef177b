import { clear, h } from "../dom.js";
import type { SessionDto } from "../types.js";

export interface QueueCallbacks {
  onSelect(returnId: string): void;
}

/** Returns queue: one row per session, state badges, click to inspect. */
export function renderQueue(
  root: HTMLElement,
  sessions: SessionDto[],
  selectedId: string | null,
  callbacks: QueueCallbacks,
): void {
  clear(root);
  root.append(h("h2", {}, ["Returns queue"]));
  if (sessions.length === 0) {
    root.append(h("p", { class: "empty-state", "data-testid": "queue-empty" }, [
      "No returns yet. POST /returns or use the intake form.",
    ]));
    return;
  }
  const list = h("ul", { class: "queue-list", "data-testid": "queue-list" });
  for (const session of sessions) {
    const badge = h("span", { class: `badge badge-${session.state}` }, [session.state]);
    const label = h("span", { class: "queue-id" }, [
      `${session.return_id} - ${session.item.product_id} (${session.item.reason})`,
    ]);
    const row = h(
      "li",
      {
        class: `queue-row${session.return_id === selectedId ? " selected" : ""}`,
        "data-return-id": session.return_id,
        "data-state": session.state,
      },
      [label, badge],
    );
    row.addEventListener("click", () => callbacks.onSelect(session.return_id));
    list.append(row);
  }
  root.append(list);
}
