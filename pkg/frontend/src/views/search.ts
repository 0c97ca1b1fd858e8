/** Step 2: describe the defect (text, transcript, and/or photo) and pick
 * one of the ranked results.
 *
 * Results are rendered strictly in the order the service returned them;
 * this module never sorts, filters, or re-ranks.
 */

import { el, errorSlot, setInlineError } from "../dom.js";
import type { Strings } from "../strings.js";
import type { SearchResponse, SearchResult } from "../types.js";

export interface SearchProps {
  strings: Strings;
  response: SearchResponse | null;
  initialText: string;
  initialTranscript: string;
  mediaUrl: (mediaId: string) => string;
  onSearch: (text: string, transcript: string, imageFile: File | null) => void;
  onSelect: (defectId: string) => void;
}

function resultCard(result: SearchResult, props: SearchProps): HTMLElement {
  const s = props.strings;
  const card = el("article", { class: "result-card", "data-defect-id": result.defect_id });
  card.append(el("h3", { class: "result-id" }, result.defect_id));
  card.append(el("p", { class: "result-score" }, result.fused_score.toFixed(6)));

  const channels = Object.keys(result.channels).sort();
  if (channels.length) {
    card.append(el("p", { class: "result-channels" },
      channels.map((name) => `${name}#${result.channels[name]?.rank}`).join(" · ")));
  }

  for (const text of result.evidence.contexts) {
    card.append(el("p", { class: "evidence-text" }, text));
  }
  if (result.evidence.image_media_ids.length) {
    const gallery = el("div", { class: "thumb-row" });
    for (const mediaId of result.evidence.image_media_ids) {
      gallery.append(el("img", {
        class: "thumb", src: props.mediaUrl(mediaId), alt: result.defect_id, loading: "lazy",
      }));
    }
    card.append(gallery);
  }

  const pick = el("button", { class: "primary select-defect", type: "button" }, s.searchSelect);
  pick.addEventListener("click", () => props.onSelect(result.defect_id));
  card.append(pick);
  return card;
}

export function renderSearch(host: HTMLElement, props: SearchProps): void {
  const s = props.strings;
  const text = el("input", {
    id: "search-text", type: "text", autocomplete: "off",
    placeholder: s.searchTextLabel, "aria-label": s.searchTextLabel,
  });
  const transcript = el("input", {
    id: "search-transcript", type: "text", autocomplete: "off",
    placeholder: s.searchTranscriptLabel, "aria-label": s.searchTranscriptLabel,
  });
  const image = el("input", {
    id: "search-image", type: "file", accept: "image/*", "aria-label": s.searchImageLabel,
  });
  text.value = props.initialText;
  transcript.value = props.initialTranscript;

  const submit = el("button", { id: "search-submit", class: "primary", type: "button" },
    s.searchSubmit);
  submit.addEventListener("click", () => {
    const textValue = text.value.trim();
    const transcriptValue = transcript.value.trim();
    const file = image.files && image.files.length ? image.files[0] ?? null : null;
    if (!textValue && !transcriptValue && !file) {
      setInlineError(host, s.searchNoModality);
      return;
    }
    props.onSearch(textValue, transcriptValue, file);
  });

  host.append(
    el("h2", {}, s.searchTitle),
    el("label", { for: "search-text" }, s.searchTextLabel),
    text,
    el("label", { for: "search-transcript" }, s.searchTranscriptLabel),
    transcript,
    el("label", { for: "search-image" }, s.searchImageLabel),
    image,
    errorSlot(),
    submit,
  );

  if (props.response) {
    if (props.response.degraded) {
      host.append(el("p", { class: "degraded-note", id: "degraded-note" }, s.searchDegraded));
    }
    const list = el("div", { id: "search-results", class: "result-list" });
    if (props.response.results.length === 0) {
      list.append(el("p", { class: "no-results" }, s.searchNoResults));
    }
    for (const result of props.response.results) {
      list.append(resultCard(result, props));
    }
    host.append(list);
  }
}
