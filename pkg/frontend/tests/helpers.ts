/** Shared test scaffolding: a mounted wizard wired to the mock server. */

import { OakClient } from "../src/api.js";
import type { SessionStore } from "../src/wizard.js";
import { Wizard } from "../src/wizard.js";
import type { MockServer } from "./mockServer.js";

export const BASE_URL = "http://oak.test";

export function memoryStore(initial: string | null = null): SessionStore {
  let value = initial;
  return {
    get: () => value,
    set: (id) => { value = id; },
    clear: () => { value = null; },
  };
}

export interface Mounted {
  wizard: Wizard;
  root: HTMLElement;
  store: SessionStore;
  client: OakClient;
}

export function mount(server: MockServer, storedSessionId: string | null = null): Mounted {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  const client = new OakClient({ baseUrl: BASE_URL, fetchFn: server.fetchFn });
  const store = memoryStore(storedSessionId);
  const wizard = new Wizard(root, client, { store });
  return { wizard, root, store, client };
}

export function setValue(root: ParentNode, selector: string, value: string): void {
  const input = root.querySelector(selector) as HTMLInputElement | HTMLTextAreaElement | null;
  if (!input) throw new Error(`no element for ${selector}`);
  input.value = value;
}

export function click(root: ParentNode, selector: string): void {
  const target = root.querySelector(selector) as HTMLElement | null;
  if (!target) throw new Error(`no element for ${selector}`);
  target.click();
}

export function textOf(root: ParentNode, selector: string): string {
  const node = root.querySelector(selector);
  return node?.textContent ?? "";
}

export function attachFile(root: ParentNode, selector: string, file: File): void {
  const input = root.querySelector(selector) as HTMLInputElement | null;
  if (!input) throw new Error(`no element for ${selector}`);
  Object.defineProperty(input, "files", { value: [file], configurable: true });
}

/** The single active step screen; throws unless exactly one exists. */
export function activeScreen(root: ParentNode): HTMLElement {
  const screens = root.querySelectorAll(".step-screen");
  if (screens.length !== 1) throw new Error(`expected 1 step screen, found ${screens.length}`);
  return screens[0] as HTMLElement;
}

export function activeStep(root: ParentNode): number {
  return Number(activeScreen(root).getAttribute("data-step"));
}

export function renderedResultIds(root: ParentNode): string[] {
  return [...root.querySelectorAll(".result-card")]
    .map((card) => card.getAttribute("data-defect-id") ?? "");
}
