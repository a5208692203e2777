/**
 * Pure rendering: every function maps an API payload to an HTML string.
 * Nothing here computes protocol logic; the mandated decision, the
 * recommendations and every tally come straight from the service, so a
 * fixed payload always renders to the same markup.
 */

import type {
  DecisionCode,
  JournalEntryJson,
  TrialStatusPayload,
  WhatIfOption,
  WhatIfPayload,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Human wording for a decision code, phrased against the current dose. */
export function decisionLabel(code: DecisionCode, currentDose: number): string {
  switch (code) {
    case "esc":
      return `escalate to dose ${currentDose + 1}`;
    case "sta":
      return `stay at dose ${currentDose}`;
    case "des":
      return `de-escalate to dose ${currentDose - 1}`;
    case "stop":
      return "stop";
  }
}

export function renderBanner(status: TrialStatusPayload): string {
  if (status.status === "concluded") {
    const recommendation =
      status.recommendation === 0
        ? "no dose recommended"
        : `recommended dose: ${status.recommendation}`;
    return `<div class="banner concluded" data-role="banner">trial concluded &mdash; ${recommendation}</div>`;
  }
  const label = decisionLabel(status.next_decision, status.current_dose);
  return `<div class="banner active" data-role="banner">next: ${escapeHtml(label)}</div>`;
}

/** Dose ladder, highest dose first, with the current dose marked. */
export function renderLadder(status: TrialStatusPayload): string {
  const rows: string[] = [];
  for (let level = status.tallies.length; level >= 1; level--) {
    const tally = status.tallies[level - 1]!;
    const current = level === status.current_dose;
    const marker = current ? `<span class="marker">&#9654;</span>` : "";
    rows.push(
      `<tr class="dose-row${current ? " current" : ""}" data-dose="${level}">` +
        `<td>${marker}</td><td>dose ${level}</td>` +
        `<td class="tally">${tally.t}/${tally.n}</td></tr>`,
    );
  }
  return `<table class="ladder"><tbody>${rows.join("")}</tbody></table>`;
}

function describeEntry(entry: JournalEntryJson): string {
  if (entry.kind === "cohort_recorded") {
    return (
      `#${entry.seq} ${entry.decision}: cohort of ${entry.size}, ` +
      `${entry.dlts} DLT(s) &rarr; ${escapeHtml(entry.state ?? "")}`
    );
  }
  if (entry.kind === "undone") {
    return `#${entry.seq} correction: entry #${entry.target} undone`;
  }
  return `#${entry.seq} trial created`;
}

export function renderJournal(status: TrialStatusPayload): string {
  const items = status.journal
    .map((entry) => `<li class="journal-entry ${entry.kind}">${describeEntry(entry)}</li>`)
    .join("");
  return `<ol class="journal" data-role="journal">${items}</ol>`;
}

export function renderRecommendations(status: TrialStatusPayload): string {
  const recs = status.reachable_recommendations.join(", ");
  return `<div class="recs" data-role="recs">possible final recommendations: ${recs}</div>`;
}

/** Full trial view: banner, ladder, reachable recommendations, journal. */
export function renderTrial(status: TrialStatusPayload): string {
  return [
    renderBanner(status),
    `<div class="state-text">state: ${escapeHtml(status.state_text)}</div>`,
    renderLadder(status),
    renderRecommendations(status),
    renderJournal(status),
  ].join("\n");
}

function describeOption(option: WhatIfOption): string {
  if (option.status === "concluded") {
    const recommendation =
      option.recommendation === 0
        ? "no dose recommended"
        : `rec ${option.recommendation}`;
    return `trial would conclude, ${recommendation}`;
  }
  return `then ${decisionLabel(option.next_decision, option.current_dose)}`;
}

/** One row per possible cohort outcome of the mandated decision. */
export function renderWhatIf(payload: WhatIfPayload): string {
  const rows = payload.options
    .map(
      (option) =>
        `<tr class="whatif-row" data-size="${option.size}" data-dlts="${option.dlts}">` +
        `<td>${option.size}</td><td>${option.dlts}</td>` +
        `<td>${escapeHtml(option.state_text)}</td>` +
        `<td>${describeOption(option)}</td>` +
        `<td>{${option.reachable_recommendations.join(", ")}}</td></tr>`,
    )
    .join("");
  return (
    `<table class="whatif" data-role="whatif" data-decision="${payload.decision}">` +
    `<thead><tr><th>cohort</th><th>DLTs</th><th>resulting state</th>` +
    `<th>consequence</th><th>possible recs</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderError(message: string): string {
  return `<div class="banner error" data-role="error">${escapeHtml(message)}</div>`;
}
