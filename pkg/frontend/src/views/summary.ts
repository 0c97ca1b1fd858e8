/** Read-only summary once the decision is recorded. */

import { el } from "../dom.js";
import type { Strings } from "../strings.js";
import type { Session } from "../types.js";

export interface SummaryProps {
  strings: Strings;
  session: Session;
  mediaUrl: (mediaId: string) => string;
  onNewInspection: () => void;
}

export function renderSummary(host: HTMLElement, props: SummaryProps): void {
  const s = props.strings;
  const session = props.session;

  const rows = el("dl", { class: "summary-rows", id: "summary" });
  const row = (label: string, value: string, id?: string) => {
    rows.append(el("dt", {}, label));
    rows.append(el("dd", id ? { id } : {}, value));
  };
  row(s.scanProductLabel, session.product_id);
  row(s.scanOperatorLabel, session.operator_id);
  row(s.searchTitle, session.defect_id ?? "");
  row(s.summaryDecision, session.decision ?? "", "summary-decision");
  if (session.override_comment) {
    row(s.summaryOverride, session.override_comment, "summary-override");
  }
  if (session.suggestion) {
    row(s.decisionSuggested, session.suggestion.action);
  }

  const measurements = el("ul", { class: "measurement-list" });
  for (const m of session.measurements) {
    const item = el("li", {}, `${m.metric} = ${m.value} ${m.unit}`.trim());
    if (m.commentary_media_id) {
      item.append(" ");
      item.append(el("a", {
        class: "commentary-link",
        href: props.mediaUrl(m.commentary_media_id),
        target: "_blank",
      }, "▶"));
    }
    measurements.append(item);
  }

  const restart = el("button", { id: "new-inspection", class: "primary", type: "button" },
    s.scanSubmit);
  restart.addEventListener("click", () => props.onNewInspection());

  host.append(
    el("h2", {}, s.summaryTitle),
    rows,
    el("h3", {}, s.measureLogged),
    measurements,
    restart,
  );
}
