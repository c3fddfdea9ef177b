// Tiny element builder; keeps every rendered value properly text-noded.

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElement {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  for (const child of children) {
    el.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return el;
}

export function clear(el: HTMLElement): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

/** Display helper: the raw number is kept verbatim in a data attribute so
 * tests can assert rendered values equal response values exactly. */
export function scoreCell(tag: string, className: string, value: number): HTMLElement {
  const el = h(tag, { class: className, "data-raw": String(value) }, [value.toFixed(3)]);
  return el;
}
