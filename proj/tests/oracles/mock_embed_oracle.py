"""Independent reference for the trigram feature-hash mock embedder.

Prints cosine similarities used as frozen expectations in the C++ tests.
"""
import math
import sys
import unicodedata


def fold(s):
    s = unicodedata.normalize("NFD", s)
    s = "".join(c for c in s if not unicodedata.combining(c))
    s = " ".join(s.split())
    return s.lower()


def fnv1a64(data):
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) & 0xFFFFFFFFFFFFFFFF
    return h


def embed(s, dim=256):
    t = "#" + fold(s) + "#"
    v = [0.0] * dim
    for i in range(len(t) - 2):
        h = fnv1a64(t[i:i + 3].encode("utf-8"))
        sign = -1.0 if h & 1 else 1.0
        v[(h >> 1) % dim] += sign
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def cos(a, b):
    return sum(x * y for x, y in zip(embed(a), embed(b)))


if __name__ == "__main__":
    pairs = [("métastases", "metastasis"), ("métastases", "fièvre"),
             ("metástasis", "métastases"), ("metástasis", "hépatiques"),
             ("hepáticas", "métastases"), ("hepáticas", "hépatiques")]
    for a, b in pairs:
        print(f"{a}\t{b}\t{cos(a, b):.12f}")
    v = embed("tumeur")
    print("tumeur nonzero", [(i, round(x, 12)) for i, x in enumerate(v) if x])
