/** Step 1: scan the product and start an inspection session. */

import { el, errorSlot, setInlineError } from "../dom.js";
import type { Strings } from "../strings.js";

export interface ScanProps {
  strings: Strings;
  onStart: (productId: string, operatorId: string) => void;
}

export function renderScan(host: HTMLElement, props: ScanProps): void {
  const s = props.strings;
  const product = el("input", {
    id: "scan-product", type: "text", autocomplete: "off",
    placeholder: s.scanProductLabel, "aria-label": s.scanProductLabel,
  });
  const operator = el("input", {
    id: "scan-operator", type: "text", autocomplete: "off",
    placeholder: s.scanOperatorLabel, "aria-label": s.scanOperatorLabel,
  });

  const submit = el("button", { id: "scan-submit", class: "primary", type: "button" },
    s.scanSubmit);
  submit.addEventListener("click", () => {
    const productId = product.value.trim();
    const operatorId = operator.value.trim();
    if (!productId || !operatorId) {
      setInlineError(host, s.scanMissing);
      return;
    }
    props.onStart(productId, operatorId);
  });

  host.append(
    el("h2", {}, s.scanTitle),
    el("label", { for: "scan-product" }, s.scanProductLabel),
    product,
    el("label", { for: "scan-operator" }, s.scanOperatorLabel),
    operator,
    errorSlot(),
    submit,
  );
}
