/**
 * Exact rational arithmetic over bigints.
 *
 * Everything crossing the wire is a `"p/q"` string; binary floats never
 * touch a protocol value. Floats are allowed only for display geometry
 * (percent widths of the piece bar).
 */

export interface Rat {
  readonly num: bigint;
  readonly den: bigint;
}

function gcd(a: bigint, b: bigint): bigint {
  while (b !== 0n) [a, b] = [b, a % b];
  return a < 0n ? -a : a;
}

export function rat(num: bigint, den: bigint = 1n): Rat {
  if (den === 0n) throw new Error("zero denominator");
  if (den < 0n) [num, den] = [-num, -den];
  const g = gcd(num < 0n ? -num : num, den) || 1n;
  return { num: num / g, den: den / g };
}

/** Parse "p/q", "p", or decimal text like "0.58" — all exactly. */
export function parseRat(text: string): Rat {
  const trimmed = text.trim();
  const frac = /^(-?\d+)\/(\d+)$/.exec(trimmed);
  if (frac) return rat(BigInt(frac[1]!), BigInt(frac[2]!));
  const int = /^-?\d+$/.exec(trimmed);
  if (int) return rat(BigInt(trimmed));
  const dec = /^(-?)(\d+)\.(\d+)$/.exec(trimmed);
  if (dec) {
    const sign = dec[1] === "-" ? -1n : 1n;
    const whole = BigInt(dec[2]!);
    const fracDigits = dec[3]!;
    const scale = 10n ** BigInt(fracDigits.length);
    return rat(sign * (whole * scale + BigInt(fracDigits)), scale);
  }
  throw new Error(`not a rational: ${JSON.stringify(text)}`);
}

export function formatRat(r: Rat): string {
  return r.den === 1n ? r.num.toString() : `${r.num}/${r.den}`;
}

export function cmp(a: Rat, b: Rat): number {
  const left = a.num * b.den;
  const right = b.num * a.den;
  return left === right ? 0 : left < right ? -1 : 1;
}

export function add(a: Rat, b: Rat): Rat {
  return rat(a.num * b.den + b.num * a.den, a.den * b.den);
}

export function sub(a: Rat, b: Rat): Rat {
  return rat(a.num * b.den - b.num * a.den, a.den * b.den);
}

export function mul(a: Rat, b: Rat): Rat {
  return rat(a.num * b.num, a.den * b.den);
}

/** Display-only approximation. */
export function toNumber(r: Rat): number {
  return Number(r.num) / Number(r.den);
}

/**
 * Exact position inside [lo, hi] for slider step k of `grid`:
 * lo + (k/grid) * (hi - lo). The browser slider moves over integers, the
 * wire value stays an exact fraction.
 */
export function sliderValue(lo: Rat, hi: Rat, step: number, grid: number): Rat {
  if (!Number.isInteger(step) || !Number.isInteger(grid) || grid < 1)
    throw new Error("slider step/grid must be integers");
  const k = BigInt(Math.min(Math.max(step, 0), grid));
  return add(lo, mul(rat(k, BigInt(grid)), sub(hi, lo)));
}
