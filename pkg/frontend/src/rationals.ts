// Exact rational arithmetic over bigint.
//
// The service serializes every numeric value either as a JSON-safe integer
// or as a "p/q" string. This module parses those tokens, does exact math
// on them (the shaded-area computation must match the server to the digit),
// and re-serializes in the identical canonical form.

export class Rat {
  readonly num: bigint;
  readonly den: bigint; // always > 0, gcd(num, den) == 1

  private constructor(num: bigint, den: bigint) {
    this.num = num;
    this.den = den;
  }

  static fromBigints(num: bigint, den: bigint): Rat {
    if (den === 0n) throw new Error("zero denominator");
    if (den < 0n) {
      num = -num;
      den = -den;
    }
    const g = gcd(num < 0n ? -num : num, den);
    return new Rat(g === 0n ? num : num / g, g === 0n ? den : den / g);
  }

  static fromInt(n: number | bigint): Rat {
    return new Rat(BigInt(n), 1n);
  }

  static zero(): Rat {
    return new Rat(0n, 1n);
  }

  add(other: Rat): Rat {
    return Rat.fromBigints(this.num * other.den + other.num * this.den, this.den * other.den);
  }

  sub(other: Rat): Rat {
    return Rat.fromBigints(this.num * other.den - other.num * this.den, this.den * other.den);
  }

  mul(other: Rat): Rat {
    return Rat.fromBigints(this.num * other.num, this.den * other.den);
  }

  neg(): Rat {
    return new Rat(-this.num, this.den);
  }

  cmp(other: Rat): number {
    const lhs = this.num * other.den;
    const rhs = other.num * this.den;
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
  }

  isZero(): boolean {
    return this.num === 0n;
  }

  isInteger(): boolean {
    return this.den === 1n;
  }

  max(other: Rat): Rat {
    return this.cmp(other) >= 0 ? this : other;
  }

  min(other: Rat): Rat {
    return this.cmp(other) <= 0 ? this : other;
  }

  /** Approximate float, for chart geometry only. Never round-trips to the API. */
  toNumber(): number {
    return Number(this.num) / Number(this.den);
  }

  /** Canonical token: plain integer string or "p/q". Matches the service. */
  toJson(): number | string {
    if (this.den === 1n) {
      const asNumber = Number(this.num);
      if (Number.isSafeInteger(asNumber)) return asNumber;
      return `${this.num}/1`;
    }
    return `${this.num}/${this.den}`;
  }

  toString(): string {
    return this.den === 1n ? this.num.toString() : `${this.num}/${this.den}`;
  }
}

function gcd(a: bigint, b: bigint): bigint {
  while (b !== 0n) {
    const t = a % b;
    a = b;
    b = t;
  }
  return a;
}

const FRACTION_TOKEN = /^(-?\d+)\/(\d+)$/;

/** True when a JSON value is a token the service could have emitted. */
export function isValueToken(value: unknown): value is number | string {
  if (typeof value === "number") return Number.isSafeInteger(value);
  if (typeof value === "string") return FRACTION_TOKEN.test(value);
  return false;
}

/** Parse a service value token (safe integer or "p/q" string). */
export function ratFromJson(value: unknown): Rat {
  if (typeof value === "number") {
    if (!Number.isSafeInteger(value)) {
      throw new Error(`non-integer numeric token: ${value}`);
    }
    return Rat.fromInt(value);
  }
  if (typeof value === "string") {
    const m = FRACTION_TOKEN.exec(value);
    if (!m) throw new Error(`malformed rational token: ${JSON.stringify(value)}`);
    return Rat.fromBigints(BigInt(m[1]!), BigInt(m[2]!));
  }
  throw new Error(`expected number or "p/q" string, got ${typeof value}`);
}

/**
 * Parse operator input from a form field. Accepts integers, fractions
 * ("3/4") and plain decimals ("2.5"), which become exact rationals.
 */
export function parseUserInput(text: string): Rat {
  const trimmed = text.trim();
  if (trimmed === "") throw new Error("empty value");
  const frac = FRACTION_TOKEN.exec(trimmed);
  if (frac) return Rat.fromBigints(BigInt(frac[1]!), BigInt(frac[2]!));
  const dec = /^(-?)(\d+)(?:\.(\d+))?$/.exec(trimmed);
  if (!dec) throw new Error(`cannot parse ${JSON.stringify(text)} as a rational`);
  const sign = dec[1] === "-" ? -1n : 1n;
  const whole = BigInt(dec[2]!);
  const fracDigits = dec[3] ?? "";
  const scale = 10n ** BigInt(fracDigits.length);
  const num = sign * (whole * scale + (fracDigits === "" ? 0n : BigInt(fracDigits)));
  return Rat.fromBigints(num, scale);
}
