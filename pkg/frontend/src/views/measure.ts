/** Step 4: log measurements against the measurement guide.
 *
 * The guide panel (instruction text + image gallery) stays visible for
 * the whole step. The value field must parse as a finite number before
 * any request is made; optional commentary is uploaded first so the
 * measurement can carry its media id.
 */

import { el, errorSlot, setInlineError } from "../dom.js";
import type { Strings } from "../strings.js";
import type { Session } from "../types.js";

export interface GuideInfo {
  instruction: string;
  guideMediaIds: string[];
  missing: boolean;
}

export interface MeasureProps {
  strings: Strings;
  session: Session;
  guide: GuideInfo | null;
  suggestEnabled: boolean;
  mediaUrl: (mediaId: string) => string;
  onMeasure: (metric: string, value: number, unit: string, commentaryFile: File | null) => void;
  onSuggest: () => void;
}

function guidePanel(props: MeasureProps): HTMLElement {
  const s = props.strings;
  const panel = el("section", { class: "guide-panel", id: "guide-panel" });
  const guide = props.guide;
  if (!guide) return panel;
  if (guide.missing) {
    panel.append(el("p", { class: "guide-missing" }, s.guideMissingInstruction));
  } else {
    panel.append(el("p", { class: "guide-instruction", id: "guide-instruction" },
      guide.instruction));
  }
  if (guide.guideMediaIds.length) {
    const gallery = el("div", { class: "thumb-row", id: "guide-gallery" });
    for (const mediaId of guide.guideMediaIds) {
      gallery.append(el("img", {
        class: "thumb", src: props.mediaUrl(mediaId), alt: "guide", loading: "lazy",
      }));
    }
    panel.append(gallery);
  }
  return panel;
}

function measurementRows(props: MeasureProps): HTMLElement {
  const list = el("ul", { class: "measurement-list", id: "measurement-list" });
  for (const m of props.session.measurements) {
    const row = el("li", { class: "measurement-row" },
      `${m.metric} = ${m.value} ${m.unit}`.trim());
    if (m.commentary_media_id) {
      row.append(" ");
      row.append(el("a", {
        class: "commentary-link",
        href: props.mediaUrl(m.commentary_media_id),
        target: "_blank",
      }, "▶"));
    }
    list.append(row);
  }
  return list;
}

export function renderMeasure(host: HTMLElement, props: MeasureProps): void {
  const s = props.strings;
  const metric = el("input", {
    id: "measure-metric", type: "text", autocomplete: "off",
    placeholder: s.measureMetricLabel, "aria-label": s.measureMetricLabel,
  });
  const value = el("input", {
    id: "measure-value", type: "text", inputmode: "decimal", autocomplete: "off",
    placeholder: s.measureValueLabel, "aria-label": s.measureValueLabel,
  });
  const unit = el("input", {
    id: "measure-unit", type: "text", autocomplete: "off",
    placeholder: s.measureUnitLabel, "aria-label": s.measureUnitLabel,
  });
  const commentary = el("input", {
    id: "measure-commentary", type: "file", accept: "audio/*,video/*",
    "aria-label": s.measureCommentaryLabel,
  });

  const submit = el("button", { id: "measure-submit", class: "primary", type: "button" },
    s.measureSubmit);
  submit.addEventListener("click", () => {
    const metricValue = metric.value.trim();
    const raw = value.value.trim();
    const parsed = raw === "" ? NaN : Number(raw);
    if (!metricValue || !Number.isFinite(parsed)) {
      setInlineError(host, s.measureBadNumber);
      return;
    }
    const file = commentary.files && commentary.files.length
      ? commentary.files[0] ?? null : null;
    props.onMeasure(metricValue, parsed, unit.value.trim(), file);
  });

  const suggest = el("button", { id: "suggest-btn", class: "primary", type: "button" },
    s.measureSuggest);
  suggest.disabled = !props.suggestEnabled;
  suggest.addEventListener("click", () => props.onSuggest());

  host.append(
    el("h2", {}, s.measureTitle),
    guidePanel(props),
    el("label", { for: "measure-metric" }, s.measureMetricLabel),
    metric,
    el("label", { for: "measure-value" }, s.measureValueLabel),
    value,
    el("label", { for: "measure-unit" }, s.measureUnitLabel),
    unit,
    el("label", { for: "measure-commentary" }, s.measureCommentaryLabel),
    commentary,
    errorSlot(),
    submit,
  );

  if (props.session.measurements.length) {
    host.append(el("h3", {}, s.measureLogged), measurementRows(props));
  }
  host.append(suggest);
}
