/** Wizard orchestrator: owns the server-confirmed session snapshot and
 * renders exactly one step screen at a time.
 *
 * The console is stateless with respect to workflow legality — every
 * transition is attempted server-side and the UI only ever renders what
 * the server returned. A rejected transition (the session moved on in
 * another tab) becomes a step-mismatch banner whose refresh action
 * re-fetches the session.
 */

import { ApiError, OakClient } from "./api.js";
import { clear, el, setInlineError } from "./dom.js";
import { STEP_TITLES, canRequestSuggestion, isComplete, stepForState } from "./steps.js";
import type { StepIndex } from "./steps.js";
import { strings as defaultStrings } from "./strings.js";
import type { Strings } from "./strings.js";
import type { DecisionValue, SearchBody, SearchResponse, Session } from "./types.js";
import { renderDecision } from "./views/decision.js";
import { renderGuide } from "./views/guide.js";
import { renderMeasure } from "./views/measure.js";
import type { GuideInfo } from "./views/measure.js";
import { renderScan } from "./views/scan.js";
import { renderSearch } from "./views/search.js";
import { renderSummary } from "./views/summary.js";

export interface SessionStore {
  get(): string | null;
  set(sessionId: string): void;
  clear(): void;
}

const STORAGE_KEY = "oak.session";

function browserStore(): SessionStore {
  const available = typeof window !== "undefined" && !!window.sessionStorage;
  return {
    get: () => (available ? window.sessionStorage.getItem(STORAGE_KEY) : null),
    set: (id) => { if (available) window.sessionStorage.setItem(STORAGE_KEY, id); },
    clear: () => { if (available) window.sessionStorage.removeItem(STORAGE_KEY); },
  };
}

export class Wizard {
  private readonly root: HTMLElement;
  private readonly client: OakClient;
  private readonly strings: Strings;
  private readonly store: SessionStore;

  private session: Session | null = null;
  private searchResponse: SearchResponse | null = null;
  private searchQuery = { text: "", transcript: "" };
  private guide: GuideInfo | null = null;
  private guideRequested = false;
  private mismatch = false;
  private inflight: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, client: OakClient,
              options: { strings?: Strings; store?: SessionStore } = {}) {
    this.root = root;
    this.client = client;
    this.strings = options.strings ?? defaultStrings;
    this.store = options.store ?? browserStore();
  }

  /** Resume the stored session if one exists, then draw the first screen. */
  async start(): Promise<void> {
    const stored = this.store.get();
    if (stored) {
      try {
        this.session = await this.client.getSession(stored);
      } catch {
        this.store.clear();
        this.session = null;
      }
    }
    this.render();
  }

  /** Settles once every queued action (and any it queued) has finished. */
  async idle(): Promise<void> {
    let current: Promise<void>;
    do {
      current = this.inflight;
      await current;
    } while (current !== this.inflight);
  }

  get currentSession(): Session | null {
    return this.session;
  }

  // --- action plumbing -------------------------------------------------------

  private run(op: () => Promise<void>): void {
    this.inflight = this.inflight.then(async () => {
      try {
        await op();
      } catch (err) {
        this.handleError(err);
      }
    });
  }

  private handleError(err: unknown): void {
    if (err instanceof ApiError) {
      if (err.isStepMismatch) {
        this.mismatch = true;
        this.render();
        return;
      }
      setInlineError(this.root, err.message);
      return;
    }
    setInlineError(this.root, this.strings.networkError);
  }

  private setSession(session: Session): void {
    this.session = session;
    this.store.set(session.session_id);
  }

  private async uploadFile(file: File): Promise<string> {
    const buffer = await file.arrayBuffer();
    return this.client.uploadMedia(buffer, file.type || "application/octet-stream");
  }

  // --- step actions -----------------------------------------------------------

  private startSession(productId: string, operatorId: string): void {
    this.run(async () => {
      const session = await this.client.startSession(productId, operatorId);
      this.setSession(session);
      this.searchResponse = null;
      this.searchQuery = { text: "", transcript: "" };
      this.guide = null;
      this.guideRequested = false;
      this.render();
    });
  }

  private runSearch(text: string, transcript: string, imageFile: File | null): void {
    this.run(async () => {
      const body: SearchBody = {};
      if (text) body.text = text;
      if (transcript) body.audio_transcript = transcript;
      if (imageFile) body.image_media_id = await this.uploadFile(imageFile);
      this.searchQuery = { text, transcript };
      this.searchResponse = await this.client.search(body);
      this.render();
    });
  }

  private selectDefect(defectId: string): void {
    this.run(async () => {
      if (!this.session) return;
      const session = await this.client.attachDefect(this.session.session_id, defectId);
      this.setSession(session);
      this.render();
    });
  }

  private confirmAssessed(): void {
    this.run(async () => {
      if (!this.session) return;
      const info = await this.client.markAssessed(this.session.session_id);
      this.setSession(info.session);
      this.guide = {
        instruction: info.instruction,
        guideMediaIds: info.guide_media_ids,
        missing: info.missing_instruction,
      };
      this.guideRequested = true;
      this.render();
    });
  }

  private logMeasurement(metric: string, value: number, unit: string,
                         commentaryFile: File | null): void {
    this.run(async () => {
      if (!this.session) return;
      const sessionId = this.session.session_id;
      let commentaryId: string | undefined;
      if (commentaryFile) commentaryId = await this.uploadFile(commentaryFile);
      await this.client.logMeasurement(sessionId, metric, value, unit, commentaryId);
      this.setSession(await this.client.getSession(sessionId));
      this.render();
    });
  }

  private requestSuggestion(): void {
    this.run(async () => {
      if (!this.session) return;
      const sessionId = this.session.session_id;
      await this.client.requestSuggestion(sessionId);
      this.setSession(await this.client.getSession(sessionId));
      this.render();
    });
  }

  private recordDecision(decision: DecisionValue, overrideComment: string): void {
    this.run(async () => {
      if (!this.session) return;
      const session = await this.client.recordDecision(
        this.session.session_id, decision, overrideComment || undefined);
      this.setSession(session);
      this.render();
    });
  }

  private refreshSession(): void {
    this.run(async () => {
      if (!this.session) return;
      this.setSession(await this.client.getSession(this.session.session_id));
      this.mismatch = false;
      this.render();
    });
  }

  private newInspection(): void {
    this.session = null;
    this.searchResponse = null;
    this.searchQuery = { text: "", transcript: "" };
    this.guide = null;
    this.guideRequested = false;
    this.mismatch = false;
    this.store.clear();
    this.render();
  }

  /** Step 4 after a cold resume: the assessed response is gone, so pull
   * the instruction and gallery from the defect's detail record. */
  private ensureGuide(): void {
    if (this.guide || this.guideRequested) return;
    const defectId = this.session?.defect_id;
    if (!defectId) return;
    this.guideRequested = true;
    this.run(async () => {
      const detail = await this.client.defectDetail(defectId);
      const instruction = String(detail.node.props["measurement_instruction"] ?? "");
      this.guide = {
        instruction,
        guideMediaIds: detail.image_media_ids,
        missing: !instruction,
      };
      this.render();
    });
  }

  // --- rendering ---------------------------------------------------------------

  private header(active: StepIndex): HTMLElement {
    const nav = el("nav", { class: "step-nav", "aria-label": "steps" });
    for (const index of [1, 2, 3, 4, 5] as StepIndex[]) {
      nav.append(el("span", {
        class: index === active ? "step-dot active" : "step-dot",
        "data-step": String(index),
      }, `${index} ${STEP_TITLES[index]}`));
    }
    return nav;
  }

  render(): void {
    clear(this.root);
    const state = this.session ? this.session.state : null;
    const step = stepForState(state);

    this.root.append(el("h1", { class: "app-title" }, this.strings.appTitle));
    this.root.append(this.header(step));

    if (this.mismatch) {
      const banner = el("div", { id: "mismatch-banner", class: "banner", role: "alert" },
        el("span", {}, this.strings.stepMismatch));
      const refresh = el("button", { id: "refresh-btn", type: "button" },
        this.strings.refresh);
      refresh.addEventListener("click", () => this.refreshSession());
      banner.append(refresh);
      this.root.append(banner);
    }

    const screen = el("section", { class: "step-screen", "data-step": String(step) });
    const mediaUrl = (mediaId: string) => this.client.mediaUrl(mediaId);

    if (this.session && isComplete(this.session.state)) {
      renderSummary(screen, {
        strings: this.strings,
        session: this.session,
        mediaUrl,
        onNewInspection: () => this.newInspection(),
      });
    } else if (step === 1 || !this.session) {
      renderScan(screen, {
        strings: this.strings,
        onStart: (productId, operatorId) => this.startSession(productId, operatorId),
      });
    } else if (step === 2) {
      renderSearch(screen, {
        strings: this.strings,
        response: this.searchResponse,
        initialText: this.searchQuery.text,
        initialTranscript: this.searchQuery.transcript,
        mediaUrl,
        onSearch: (text, transcript, file) => this.runSearch(text, transcript, file),
        onSelect: (defectId) => this.selectDefect(defectId),
      });
    } else if (step === 3) {
      renderGuide(screen, {
        strings: this.strings,
        session: this.session,
        onAssessed: () => this.confirmAssessed(),
      });
    } else if (step === 4) {
      this.ensureGuide();
      renderMeasure(screen, {
        strings: this.strings,
        session: this.session,
        guide: this.guide,
        suggestEnabled: canRequestSuggestion(this.session),
        mediaUrl,
        onMeasure: (metric, value, unit, file) =>
          this.logMeasurement(metric, value, unit, file),
        onSuggest: () => this.requestSuggestion(),
      });
    } else {
      renderDecision(screen, {
        strings: this.strings,
        session: this.session,
        onDecide: (decision, comment) => this.recordDecision(decision, comment),
      });
    }

    this.root.append(screen);
  }
}
