"""Regenerate the bundled corpus JSON files (1-based cycle notation).

The projective-line groups are built from F_8 = F_2[t]/(t^3 + t + 1):
field elements are coded 0..7 by bit pattern, points of PG(1,8) are the
field codes as 1..8 and the point at infinity as 9.
"""

import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "qplab", "corpus")


def f8_mul(a, b):
    out = 0
    for i in range(3):
        if (b >> i) & 1:
            out ^= a << i
    for i in (5, 4, 3):
        if (out >> i) & 1:
            out ^= (0b1011 << (i - 3))  # t^3 = t + 1
    return out


def f8_inv(a):
    for b in range(1, 8):
        if f8_mul(a, b) == 1:
            return b
    raise ValueError(a)


INF = 8  # 0-based index of the point at infinity


def perm_to_cycles(images):
    seen = set()
    cycles = []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        pt = images[start]
        while pt != start:
            cyc.append(pt)
            seen.add(pt)
            pt = images[pt]
        cycles.append([p + 1 for p in cyc])
    return cycles


def projective_maps():
    def apply(fn):
        return [fn(x) for x in range(9)]

    def add1(x):
        return INF if x == INF else x ^ 1

    def mult(x):
        return INF if x == INF else f8_mul(2, x)  # 2 codes t, a generator of F_8*

    def invert(x):
        if x == INF:
            return 0
        if x == 0:
            return INF
        return f8_inv(x)

    def frob(x):
        return INF if x == INF else f8_mul(x, x)

    return {name: apply(fn)
            for name, fn in [("add1", add1), ("mult", mult),
                             ("invert", invert), ("frob", frob)]}


def sl23_gens():
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    index = {v: i for i, v in enumerate(vecs)}

    def act(mat):
        out = []
        for (a, b) in vecs:
            img = ((a * mat[0][0] + b * mat[1][0]) % 3,
                   (a * mat[0][1] + b * mat[1][1]) % 3)
            out.append(index[img])
        return out

    s = act([[0, 2], [1, 0]])   # order 4
    t = act([[1, 1], [0, 1]])   # order 3
    return [s, t]


def main():
    os.makedirs(OUT, exist_ok=True)
    pm = projective_maps()
    groups = {
        "c2": (2, [[[1, 2]]]),
        "c3": (3, [[[1, 2, 3]]]),
        "s3": (3, [[[1, 2]], [[1, 2, 3]]]),
        "a4": (4, [[[1, 2, 3]], [[2, 3, 4]]]),
        "d8": (4, [[[1, 2, 3, 4]], [[1, 3]]]),
        "s4": (4, [[[1, 2]], [[1, 2, 3, 4]]]),
        "a5": (5, [[[1, 2, 3]], [[3, 4, 5]]]),
        "s5": (5, [[[1, 2]], [[1, 2, 3, 4, 5]]]),
        "a6": (6, [[[1, 2, 3]], [[2, 3, 4, 5, 6]]]),
        "a7": (7, [[[1, 2, 3]], [[1, 2, 3, 4, 5, 6, 7]]]),
        "s7": (7, [[[1, 2]], [[1, 2, 3, 4, 5, 6, 7]]]),
        "a5xa5": (10, [[[1, 2, 3]], [[3, 4, 5]], [[6, 7, 8]], [[8, 9, 10]]]),
        "s3xs3": (6, [[[1, 2]], [[1, 2, 3]], [[4, 5]], [[4, 5, 6]]]),
        "a4xa4": (8, [[[1, 2, 3]], [[2, 3, 4]], [[5, 6, 7]], [[6, 7, 8]]]),
        "s5xs3": (8, [[[1, 2]], [[1, 2, 3, 4, 5]], [[6, 7]], [[6, 7, 8]]]),
        "a5xs3": (8, [[[1, 2, 3]], [[3, 4, 5]], [[6, 7]], [[6, 7, 8]]]),
        "sl23": (8, [perm_to_cycles(g) for g in sl23_gens()]),
        "psl28": (9, [perm_to_cycles(pm[k]) for k in ("add1", "mult", "invert")]),
        "pgammal28": (9, [perm_to_cycles(pm[k])
                          for k in ("add1", "mult", "invert", "frob")]),
    }
    for name, (degree, gens) in sorted(groups.items()):
        path = os.path.join(OUT, f"{name}.json")
        with open(path, "w") as fh:
            json.dump({"name": name, "degree": degree, "generators": gens},
                      fh, indent=1)
            fh.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
