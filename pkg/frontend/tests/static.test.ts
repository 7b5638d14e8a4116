// Guards the division of labor: the server computes every statistic and
// the UI only displays the payload strings. Any line in src/ mentioning
// mean/median/mode must be a type declaration, a payload property access,
// or a display label -- never a local computation.

import { readdirSync, readFileSync, statSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

const SRC = join(dirname(fileURLToPath(import.meta.url)), "..", "src");

function sourceFiles(dir: string): string[] {
  const out: string[] = [];
  for (const entry of readdirSync(dir)) {
    const path = join(dir, entry);
    if (statSync(path).isDirectory()) out.push(...sourceFiles(path));
    else if (path.endsWith(".ts")) out.push(path);
  }
  return out;
}

const ALLOWED = [
  /^\s*(mean|median|modes):\s/, // interface field declarations
  /summary\.(mean|median|modes)/, // verbatim display of payload fields
  /"(mean|median|mode)"/, // display labels
  /\/\/.*(mean|median|mode)/i, // comments
];

describe("statistics stay server-side", () => {
  it("never computes mean, median or mode locally", () => {
    for (const file of sourceFiles(SRC)) {
      const lines = readFileSync(file, "utf8").split("\n");
      lines.forEach((line, i) => {
        if (!/\b(mean|median|modes?)\b/i.test(line)) return;
        const ok = ALLOWED.some((pattern) => pattern.test(line));
        expect(ok, `${file}:${i + 1} mentions a statistic outside display: ${line.trim()}`).toBe(true);
      });
    }
  });

  it("never sorts score arrays (no local median/mode machinery)", () => {
    for (const file of sourceFiles(SRC)) {
      const text = readFileSync(file, "utf8");
      expect(/\.sort\(/.test(text), `${file} sorts locally`).toBe(false);
    }
  });
});
