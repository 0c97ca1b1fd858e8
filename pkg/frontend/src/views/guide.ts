/** Step 3: severity assessment. Shows the identified defect and advances
 * the session once the operator confirms the assessment; the measurement
 * guide then appears on step 4. */

import { el, errorSlot } from "../dom.js";
import type { Strings } from "../strings.js";
import type { Session } from "../types.js";

export interface GuideProps {
  strings: Strings;
  session: Session;
  onAssessed: () => void;
}

export function renderGuide(host: HTMLElement, props: GuideProps): void {
  const s = props.strings;
  const confirm = el("button", { id: "assess-confirm", class: "primary", type: "button" },
    s.guideConfirm);
  confirm.addEventListener("click", () => props.onAssessed());

  host.append(
    el("h2", {}, s.guideTitle),
    el("p", { class: "defect-chosen", id: "assess-defect" }, props.session.defect_id ?? ""),
    errorSlot(),
    confirm,
  );
}
