// Running-total preview for the grading form. Sums the points of the
// levels currently selected, using the exact point strings from the
// rubric payload, so the preview always matches what the API will store.

import type { Rubric } from "./api.js";
import { formatRational, parseRational, percentDisplay, sum } from "./rational.js";

export interface Preview {
  complete: boolean; // every criterion has a selection
  total: string; // canonical rational string, e.g. "3" or "7/2"
  percentDisplay: string | null; // "75.00", only when complete
}

export function previewTotal(rubric: Rubric, selections: Record<string, string>): Preview {
  const picked = [];
  let complete = true;
  for (const criterion of rubric.criteria) {
    const label = selections[criterion.name];
    const level = criterion.levels.find((l) => l.label === label);
    if (!level) {
      complete = false;
      continue;
    }
    picked.push(parseRational(level.points));
  }
  const total = sum(picked);
  return {
    complete,
    total: formatRational(total),
    percentDisplay: complete ? percentDisplay(total, parseRational(rubric.max_score)) : null,
  };
}
