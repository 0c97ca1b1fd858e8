/** Console configuration: where the service lives and how to authenticate. */

export interface ConsoleConfig {
  /** Service base URL; empty string means same origin. */
  baseUrl: string;
  /** Static bearer token, forwarded on every request when set. */
  bearerToken?: string;
}

declare global {
  interface Window {
    __OAK_CONSOLE_CONFIG__?: Partial<ConsoleConfig>;
  }
}

const DEFAULTS: ConsoleConfig = { baseUrl: "" };

/** Merge defaults with the page-provided config (index.html sets
 * `window.__OAK_CONSOLE_CONFIG__` before loading the bundle). */
export function loadConfig(overrides?: Partial<ConsoleConfig>): ConsoleConfig {
  const fromPage = typeof window !== "undefined" ? window.__OAK_CONSOLE_CONFIG__ : undefined;
  return { ...DEFAULTS, ...fromPage, ...overrides };
}
