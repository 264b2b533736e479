#!/usr/bin/env python3
"""Writes the small demo corpus and embedding table under data/toy/."""
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"
DIM = 8
GROUPS = {
    "joy": ["merry", "festive", "bright", "cheerful", "laughter", "dance", "song", "smile"],
    "identity": ["rights", "community", "pride", "marriage", "activist", "lesbian",
                 "liberation", "movement"],
    "animal": ["fur", "paw", "tail", "bark", "purr", "pet", "kitten", "puppy"],
}
FUNCTION = ["the", "a", "of", "and", "was", "is"]


def main():
    rng = random.Random(20140601)
    OUT.mkdir(parents=True, exist_ok=True)

    base = {g: [rng.gauss(0, 1) for _ in range(DIM)] for g in GROUPS}
    vec = {}
    for g, words in GROUPS.items():
        for w in words:
            vec[w] = [b + rng.gauss(0, 0.25) for b in base[g]]
    for w in FUNCTION:
        vec[w] = [rng.gauss(0, 0.1) for _ in range(DIM)]
    vec["*UNK*"] = [0.0] * DIM

    with open(OUT / "toy.vec", "w") as f:
        f.write(f"{len(vec)} {DIM}\n")
        for w, v in vec.items():
            f.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    def gram(middle, group):
        ctx = []
        for _ in range(4):
            if rng.random() < 0.25:
                ctx.append(rng.choice(FUNCTION))
            else:
                ctx.append(rng.choice(GROUPS[group]))
        return " ".join(ctx[:2] + [middle] + ctx[2:])

    lines = []
    for year in range(1800, 2009):
        # share of "gay" contexts drawn from the identity group rises after 1950
        shift = min(max((year - 1950) / 40.0, 0.0), 1.0)
        for _ in range(3):
            lines.append((gram("happy", "joy"), year))
            lines.append((gram("cat", "animal"), year))
            lines.append((gram("dog", "animal"), year))
            lines.append((gram("gay", "identity" if rng.random() < shift else "joy"), year))
            if year >= 1890:
                lines.append((gram("homosexual", "identity"), year))
    with open(OUT / "toy.tsv", "w") as f:
        for text, year in lines:
            count = rng.randint(1, 60)
            volumes = rng.randint(1, count)
            f.write(f"{text}\t{year}\t{count}\t{volumes}\n")
        # outside the default 1800-2008 window
        f.write("the merry happy song and\t1799\t4\t1\n")
        f.write("the merry happy song and\t2009\t4\t1\n")


if __name__ == "__main__":
    main()
