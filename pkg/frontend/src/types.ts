/** JSON shapes of the knowledge-base service API, mirrored field for field. */

export type SessionState =
  | "Created"
  | "ProductScanned"
  | "DefectIdentified"
  | "SeverityAssessed"
  | "MeasurementLogged"
  | "SuggestionIssued"
  | "DecisionRecorded";

export type DecisionValue = "Conform" | "Scrap" | "Rework";
export type SuggestionAction = "Conform" | "Scrap" | "Review";

export interface Measurement {
  measurement_id: string;
  defect_id: string;
  metric: string;
  value: number;
  unit: string;
  commentary_media_id: string | null;
  created_at: string;
}

export interface Suggestion {
  action: SuggestionAction;
  matched_rule_id: string | null;
  explanation: string;
}

export interface Session {
  session_id: string;
  product_id: string;
  operator_id: string;
  state: SessionState;
  defect_id: string | null;
  measurements: Measurement[];
  suggestion: Suggestion | null;
  decision: DecisionValue | null;
  override_comment: string | null;
  history: [string, string][];
}

export interface AssessmentResponse {
  session: Session;
  instruction: string;
  guide_media_ids: string[];
  missing_instruction: boolean;
}

export interface ChannelInfo {
  rank: number;
  score: number;
}

export interface SearchResult {
  defect_id: string;
  fused_score: number;
  channels: Record<string, ChannelInfo>;
  evidence: { contexts: string[]; image_media_ids: string[] };
}

export interface SearchResponse {
  results: SearchResult[];
  degraded: boolean;
}

export interface SearchBody {
  text?: string;
  audio_transcript?: string;
  image_media_id?: string;
  k?: number;
  rating_weight?: number;
}

export interface DefectDetail {
  node: { id: string; kind: string; props: Record<string, unknown> };
  neighbors_out: Record<string, string[]>;
  neighbors_in: Record<string, string[]>;
  contexts: string[];
  image_media_ids: string[];
  rules: Array<{
    rule_id: string;
    defect_id: string;
    metric: string;
    op: string;
    threshold: number | [number, number];
    action: SuggestionAction;
    priority: number;
  }>;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}
