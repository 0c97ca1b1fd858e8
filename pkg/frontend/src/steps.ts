/** Pure mapping from server-confirmed session state to wizard step.
 *
 * The console keeps no state machine of its own: the step index is a
 * function of the session the server last returned, nothing else.
 */

import type { DecisionValue, Session, SessionState, Suggestion } from "./types.js";

export type StepIndex = 1 | 2 | 3 | 4 | 5;

export const STEP_TITLES: Record<StepIndex, string> = {
  1: "Scan",
  2: "Identify",
  3: "Assess",
  4: "Measure",
  5: "Decide",
};

export function stepForState(state: SessionState | null): StepIndex {
  switch (state) {
    case null:
    case "Created":
      return 1;
    case "ProductScanned":
      return 2;
    case "DefectIdentified":
      return 3;
    case "SeverityAssessed":
    case "MeasurementLogged":
      return 4;
    case "SuggestionIssued":
    case "DecisionRecorded":
      return 5;
  }
}

export function isComplete(state: SessionState | null): boolean {
  return state === "DecisionRecorded";
}

/** The suggestion request is gated on at least one logged measurement. */
export function canRequestSuggestion(session: Session | null): boolean {
  if (!session) return false;
  return session.state === "MeasurementLogged" && session.measurements.length >= 1;
}

/** Decision controls stay disabled until the server has issued a suggestion. */
export function decisionEnabled(session: Session | null): boolean {
  return !!session && session.suggestion !== null;
}

/** Whether the chosen decision deviates from the suggestion, in which
 * case the server will demand an override comment. A "Review" suggestion
 * has no matching decision value, so every decision deviates from it. */
export function overrideRequired(
  suggestion: Suggestion | null,
  decision: DecisionValue,
): boolean {
  if (!suggestion) return false;
  return suggestion.action === "Review" || suggestion.action !== decision;
}
