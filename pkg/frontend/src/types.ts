// Wire formats of the play service. The client renders these verbatim and
// never derives game logic of its own.

export interface QuestionPayload {
  round: number;
  flag: string;
  options: string[];
  option_codes: string[];
}

export interface StatePayload {
  phase: string;
  round: number;
  score: number;
  strategy: string;
  disagreement_count: number;
  pending_candidate: string | null;
  clue_offered: boolean;
  system_question_pending: boolean;
  strategy_state: unknown;
  finished: boolean;
}

export interface NluPayload {
  intent: string;
  entity: string | null;
  match_score: number | null;
  matched_surface: string | null;
}

export interface ActionRecord {
  act: string;
  payload: Record<string, unknown>;
  text: string;
}

export interface CreateSessionResponse {
  session_id: string;
  utterance: string;
  question: QuestionPayload;
  state: StatePayload;
}

export interface SnapshotEvent {
  type: "state";
  session_id: string;
  utterance: string;
  state: StatePayload;
  question: QuestionPayload;
}

export interface TurnEvent {
  type: "turn";
  session_id: string;
  turn_id: number;
  speaker: string;
  observed_speaker: string;
  text: string;
  nlu: NluPayload;
  actions: ActionRecord[];
  state: StatePayload;
  question: QuestionPayload;
}

export interface StreamErrorEvent {
  type: "error";
  detail: string;
}

export type StreamEvent = SnapshotEvent | TurnEvent | StreamErrorEvent;

export type PlayerId = "P1" | "P2";
