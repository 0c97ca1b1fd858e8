/** Tiny DOM construction helpers; no framework, just createElement. */

export type Attrs = Record<string, string | boolean | EventListener>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key.startsWith("on") && typeof value === "function") {
      node.addEventListener(key.slice(2), value);
    } else if (typeof value === "boolean") {
      if (value) node.setAttribute(key, "");
      else node.removeAttribute(key);
    } else if (typeof value === "string") {
      if (key === "class") node.className = value;
      else node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** The inline slot every step screen renders for request-blocking
 * validation messages and server errors surfaced in place. */
export function errorSlot(): HTMLElement {
  return el("p", { class: "inline-error", id: "inline-error", role: "alert" });
}

export function setInlineError(root: ParentNode, text: string): void {
  const slot = root.querySelector("#inline-error");
  if (slot) slot.textContent = text;
}
