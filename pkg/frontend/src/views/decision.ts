/** Step 5: show the conformity suggestion and record the final decision.
 *
 * Decision buttons are disabled until the server has issued a
 * suggestion; the server remains the authority on override-comment
 * requirements and surfaces them as inline errors here.
 */

import { el, errorSlot } from "../dom.js";
import { decisionEnabled } from "../steps.js";
import type { Strings } from "../strings.js";
import type { DecisionValue, Session } from "../types.js";

export interface DecisionProps {
  strings: Strings;
  session: Session;
  onDecide: (decision: DecisionValue, overrideComment: string) => void;
}

export function renderDecision(host: HTMLElement, props: DecisionProps): void {
  const s = props.strings;
  const suggestion = props.session.suggestion;
  host.append(el("h2", {}, s.decisionTitle));

  if (suggestion) {
    const panel = el("section", { class: "suggestion-panel", id: "suggestion-panel" });
    panel.append(el("p", { class: "suggestion-action", id: "suggestion-action" },
      `${s.decisionSuggested}: ${suggestion.action}`));
    panel.append(el("p", { class: "suggestion-explanation" }, suggestion.explanation));
    if (suggestion.matched_rule_id) {
      panel.append(el("p", { class: "suggestion-rule" }, suggestion.matched_rule_id));
    }
    host.append(panel);
  }

  const comment = el("textarea", {
    id: "override-comment", rows: "3",
    placeholder: s.decisionOverrideLabel, "aria-label": s.decisionOverrideLabel,
  });

  const enabled = decisionEnabled(props.session);
  const buttons = el("div", { class: "decision-buttons" });
  const choices: [string, DecisionValue, string][] = [
    ["decision-conform", "Conform", s.decisionConform],
    ["decision-scrap", "Scrap", s.decisionScrap],
    ["decision-rework", "Rework", s.decisionRework],
  ];
  for (const [id, decision, label] of choices) {
    const button = el("button", { id, class: "primary decision", type: "button" }, label);
    button.disabled = !enabled;
    button.addEventListener("click", () => props.onDecide(decision, comment.value.trim()));
    buttons.append(button);
  }

  host.append(
    el("label", { for: "override-comment" }, s.decisionOverrideLabel),
    comment,
    errorSlot(),
    buttons,
  );
}
