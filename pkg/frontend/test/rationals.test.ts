import { describe, expect, it } from "vitest";
import { Rat, isValueToken, parseUserInput, ratFromJson } from "../src/rationals.js";

describe("ratFromJson", () => {
  it("parses safe integers", () => {
    expect(ratFromJson(42).toString()).toBe("42");
    expect(ratFromJson(-7).toString()).toBe("-7");
    expect(ratFromJson(0).toJson()).toBe(0);
  });

  it("parses fraction tokens and normalizes sign", () => {
    expect(ratFromJson("3/4").toJson()).toBe("3/4");
    expect(ratFromJson("-6/4").toJson()).toBe("-3/2");
  });

  it("rejects tokens the service never emits", () => {
    expect(() => ratFromJson(0.5)).toThrow(/non-integer/);
    expect(() => ratFromJson("1.5")).toThrow(/malformed/);
    expect(() => ratFromJson("1/0")).toThrow();
    expect(() => ratFromJson(null)).toThrow();
    expect(() => ratFromJson(2 ** 53)).toThrow(/non-integer/);
  });

  it("round-trips tokens through toJson", () => {
    for (const token of [5, -12, 0, "7/3", "-9/2"]) {
      expect(ratFromJson(token).toJson()).toBe(token);
    }
  });
});

describe("isValueToken", () => {
  it("accepts what the canonical serializer can produce", () => {
    expect(isValueToken(3)).toBe(true);
    expect(isValueToken("-5/2")).toBe(true);
  });

  it("rejects floats, exponents and junk strings", () => {
    expect(isValueToken(0.25)).toBe(false);
    expect(isValueToken(2 ** 53)).toBe(false);
    expect(isValueToken("1e3")).toBe(false);
    expect(isValueToken("")).toBe(false);
    expect(isValueToken([])).toBe(false);
  });
});

describe("arithmetic", () => {
  it("adds, subtracts and multiplies exactly", () => {
    const third = Rat.fromBigints(1n, 3n);
    const sixth = Rat.fromBigints(1n, 6n);
    expect(third.add(sixth).toJson()).toBe("1/2");
    expect(third.sub(sixth).toJson()).toBe("1/6");
    expect(third.mul(Rat.fromInt(6)).toJson()).toBe(2);
  });

  it("compares without float error", () => {
    const a = Rat.fromBigints(10n ** 30n + 1n, 10n ** 30n);
    const b = Rat.fromInt(1);
    expect(a.cmp(b)).toBe(1);
    expect(b.cmp(a)).toBe(-1);
    expect(a.cmp(a)).toBe(0);
  });

  it("keeps huge integers exact via the p/1 escape hatch", () => {
    const huge = Rat.fromBigints(2n ** 60n, 1n);
    expect(huge.toJson()).toBe(`${2n ** 60n}/1`);
  });
});

describe("parseUserInput", () => {
  it("accepts integers, fractions and decimals", () => {
    expect(parseUserInput("12").toJson()).toBe(12);
    expect(parseUserInput(" 3/4 ").toJson()).toBe("3/4");
    expect(parseUserInput("2.5").toJson()).toBe("5/2");
    expect(parseUserInput("-0.125").toJson()).toBe("-1/8");
  });

  it("rejects junk", () => {
    expect(() => parseUserInput("")).toThrow();
    expect(() => parseUserInput("abc")).toThrow();
    expect(() => parseUserInput("1/")).toThrow();
    expect(() => parseUserInput("1e5")).toThrow();
  });
});
