// Exact rational arithmetic for the grading-form preview. The server is
// the source of truth for every displayed statistic; this mirrors its
// exact score representation ("3", "1.5", "7/2") only so the running
// total shown while grading matches the value the API will store.

export interface Rational {
  num: bigint;
  den: bigint; // always > 0
}

function gcd(a: bigint, b: bigint): bigint {
  while (b !== 0n) {
    [a, b] = [b, a % b];
  }
  return a < 0n ? -a : a;
}

function normalize(num: bigint, den: bigint): Rational {
  if (den === 0n) throw new Error("zero denominator");
  if (den < 0n) {
    num = -num;
    den = -den;
  }
  const g = gcd(num, den) || 1n;
  return { num: num / g, den: den / g };
}

export function parseRational(text: string): Rational {
  const s = text.trim();
  const frac = s.match(/^(-?\d+)\/(\d+)$/);
  if (frac) return normalize(BigInt(frac[1]), BigInt(frac[2]));
  const dec = s.match(/^(-?)(\d+)(?:\.(\d+))?$/);
  if (!dec) throw new Error(`not a rational: ${text}`);
  const sign = dec[1] === "-" ? -1n : 1n;
  const whole = BigInt(dec[2]);
  const fracDigits = dec[3] ?? "";
  const scale = 10n ** BigInt(fracDigits.length);
  return normalize(sign * (whole * scale + BigInt(fracDigits || "0")), scale);
}

export function add(a: Rational, b: Rational): Rational {
  return normalize(a.num * b.den + b.num * a.den, a.den * b.den);
}

export const ZERO: Rational = { num: 0n, den: 1n };

export function sum(values: Rational[]): Rational {
  return values.reduce(add, ZERO);
}

export function equals(a: Rational, b: Rational): boolean {
  return a.num === b.num && a.den === b.den;
}

// Canonical server form: integers render bare, everything else as "p/q".
export function formatRational(r: Rational): string {
  return r.den === 1n ? r.num.toString() : `${r.num}/${r.den}`;
}

// Two decimal places, round-half-up — matches the server's rendering.
export function percentDisplay(total: Rational, max: Rational): string {
  if (max.num === 0n) throw new Error("zero maximum score");
  // 100 * total / max, scaled to hundredths
  const num = 10000n * total.num * max.den;
  const den = total.den * max.num;
  let cents = num / den;
  const remainder = num % den;
  if (2n * remainder >= den) cents += 1n;
  const sign = cents < 0n ? "-" : "";
  if (cents < 0n) cents = -cents;
  const whole = cents / 100n;
  const frac = (cents % 100n).toString().padStart(2, "0");
  return `${sign}${whole}.${frac}`;
}
