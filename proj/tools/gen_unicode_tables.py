#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

Usage: python3 tools/gen_unicode_tables.py > src/unicode_tables.inc
"""
import sys
import unicodedata

MAX_CP = 0x2FFFF


def char_class(cp):
    c = chr(cp)
    if c in "\t\n\v\f\r\x1c\x1d\x1e\x1f\x85":
        return "kSpace"
    cat = unicodedata.category(c)
    if cat == "Lu" or cat == "Lt":
        return "kUpper"
    if cat[0] == "L":
        return "kLetter"
    if cat[0] == "M":
        return "kMark"
    if cat[0] == "N":
        return "kDigit"
    if cat[0] == "Z":
        return "kSpace"
    if cat in ("Cn", "Co", "Cs"):
        return "kLetter" if cat == "Co" else "kOther"
    return "kOther"


def main():
    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py (unicodedata %s). Do not edit.\n\n"
              % unicodedata.unidata_version)
    ranges = []
    start, cur = 0, char_class(0)
    for cp in range(1, MAX_CP + 1):
        k = char_class(cp)
        if k != cur:
            ranges.append((start, cp - 1, cur))
            start, cur = cp, k
    ranges.append((start, MAX_CP, cur))
    ranges = [r for r in ranges if r[2] != "kOther"]
    out.write("constexpr ClassRange kClassRanges[] = {\n")
    for lo, hi, k in ranges:
        out.write("    {0x%04X, 0x%04X, CharClass::%s},\n" % (lo, hi, k))
    out.write("};\n\n")

    out.write("constexpr CodepointMap kLowerMap[] = {\n")
    for cp in range(MAX_CP + 1):
        c = chr(cp)
        lo = c.lower()
        if len(lo) == 1 and lo != c:
            out.write("    {0x%04X, 0x%04X},\n" % (cp, ord(lo)))
    out.write("};\n\n")

    out.write("constexpr CodepointMap kBaseMap[] = {\n")
    for cp in range(MAX_CP + 1):
        c = chr(cp)
        d = unicodedata.normalize("NFD", c)
        if len(d) > 1 and all(unicodedata.combining(x) for x in d[1:]) \
                and not unicodedata.combining(d[0]):
            out.write("    {0x%04X, 0x%04X},\n" % (cp, ord(d[0])))
    out.write("};\n")


if __name__ == "__main__":
    main()
