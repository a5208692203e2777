/**
 * Payload shapes of the dosepath HTTP API. Field names are the server's
 * contract; the dashboard renders them verbatim and computes no protocol
 * logic of its own.
 */

export type DecisionCode = "esc" | "sta" | "des" | "stop";

export interface TallyJson {
  t: number;
  n: number;
}

export interface StateJson {
  lower: TallyJson[];
  higher: TallyJson[];
}

export interface JournalEntryJson {
  seq: number;
  ts: string;
  kind: "created" | "cohort_recorded" | "undone";
  decision?: DecisionCode;
  size?: number;
  dlts?: number;
  state?: string;
  target?: number;
  doses?: number;
  cohort_sizes?: number[];
}

export interface TrialStatusPayload {
  id: string;
  status: "active" | "concluded";
  recommendation: number | null;
  next_decision: DecisionCode;
  doses: number;
  cohort_sizes: number[];
  reachable_recommendations: number[];
  journal: JournalEntryJson[];
  records_live: number;
  state: StateJson;
  state_text: string;
  current_dose: number;
  tallies: TallyJson[];
}

export interface TrialCreatedPayload {
  id: string;
  status: "active" | "concluded";
  recommendation: number | null;
  next_decision: DecisionCode;
  cohort_sizes: number[];
  state: StateJson;
  state_text: string;
  current_dose: number;
  tallies: TallyJson[];
}

export interface WhatIfOption {
  size: number;
  dlts: number;
  next_decision: DecisionCode;
  status: "active" | "concluded";
  recommendation: number | null;
  reachable_recommendations: number[];
  state: StateJson;
  state_text: string;
  current_dose: number;
  tallies: TallyJson[];
}

export interface WhatIfPayload {
  id: string;
  decision: DecisionCode;
  options: WhatIfOption[];
}
