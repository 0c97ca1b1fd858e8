/** Single string table: every user-visible label lives here so a
 * translated table can be swapped in without touching view code. */

export const strings = {
  appTitle: "Inspection Console",
  scanTitle: "1 · Scan product",
  scanProductLabel: "Product ID",
  scanOperatorLabel: "Operator ID",
  scanSubmit: "Start inspection",
  scanMissing: "Product and operator IDs are required.",

  searchTitle: "2 · Identify the defect",
  searchTextLabel: "Describe what you see",
  searchTranscriptLabel: "Spoken description (transcript)",
  searchImageLabel: "Photo of the defect",
  searchSubmit: "Search",
  searchNoModality: "Enter a description, a transcript, or pick a photo first.",
  searchDegraded: "Query rewriting is unavailable; showing results for the raw query.",
  searchSelect: "This is the defect",
  searchNoResults: "No matching defects. Try different words or add a photo.",

  guideTitle: "3 · Severity assessment",
  guideConfirm: "Severity assessed — show measurement guide",
  guideMissingInstruction: "No measurement instruction is on file for this defect.",

  measureTitle: "4 · Log measurements",
  measureMetricLabel: "Metric",
  measureValueLabel: "Value",
  measureUnitLabel: "Unit",
  measureCommentaryLabel: "Commentary (audio/video, optional)",
  measureSubmit: "Log measurement",
  measureBadNumber: "The value must be a finite number.",
  measureSuggest: "Request conformity suggestion",
  measureLogged: "Logged measurements",

  decisionTitle: "5 · Decision",
  decisionSuggested: "Suggested action",
  decisionOverrideLabel: "Override comment (required when deviating)",
  decisionConform: "Conform",
  decisionScrap: "Scrap",
  decisionRework: "Rework",

  summaryTitle: "Inspection complete",
  summaryDecision: "Final decision",
  summaryOverride: "Override comment",

  stepMismatch: "The session moved on in another tab. Refresh to continue.",
  refresh: "Refresh",
  networkError: "The service could not be reached.",
} as const;

export type Strings = typeof strings;
