"""Generate the synthetic stage-race fixture used by the tests and demos.

Stage times are in seconds. Most riders finish in a few large groups that
share one time; some riders abandon and stay missing from then on; one rider
("Coquard") is missing on s17 only and reappears on s18, mimicking a data
entry error at the source.
"""
import csv
import random
import sys

STAGES = ["s1", "s15", "s16", "s17", "s18", "s19", "s20", "s21"]
BASE = {"s1": 12400, "s15": 17500, "s16": 15800, "s17": 15000,
        "s18": 16000, "s19": 14000, "s20": 3300, "s21": 9900}
RIDERS = ["Pogacar", "Roglic", "Porte", "Landa", "Mas", "Lopez", "Uran", "Yates",
          "Carapaz", "Kuss", "Bennett", "Sagan", "Coquard", "Ewan", "Van Aert",
          "Alaphilippe", "Martin", "Quintana", "Bardet", "Pinot", "Dumoulin",
          "Valverde", "Nibali", "Caruso", "Hirschi", "Kwiatkowski", "Castroviejo",
          "Bernal", "Thomas", "Kruijswijk", "Gesink", "Trentin", "Kristoff",
          "Matthews", "Greipel", "Nizzolo", "Bouhanni", "Pedersen", "Cort", "Hindley"]


def main(out_path, rel_path):
    rng = random.Random(2020)
    abandoned = {"Bardet": "s15", "Pinot": "s16", "Bernal": "s18", "Kristoff": "s19"}
    rows = []
    for rider in RIDERS:
        row = {"rider": rider}
        gone = False
        for s in STAGES:
            if rider in abandoned and abandoned[rider] == s:
                gone = True
            if gone or (rider == "Coquard" and s == "s17"):
                row[s] = ""
                continue
            if s == "s20":  # time trial: no groups
                t = BASE[s] + rng.randint(0, 400)
            else:
                group = rng.choices([0, 1, 2, 3], weights=[6, 2, 1, 1])[0]
                t = BASE[s] + [0, 35, 410, 1220][group]
            if rider == "Pogacar" and s in ("s20",):
                t = BASE[s] - 1
            row[s] = str(t)
        rows.append(row)

    with open(out_path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["rider"] + STAGES)
        w.writeheader()
        w.writerows(rows)

    # Time lost to the stage winner: d<i> = s<i> - min(s<i>).
    mins = {s: min(int(r[s]) for r in rows if r[s]) for s in STAGES}
    rel = []
    for r in rows:
        out = {"rider": r["rider"]}
        for s in STAGES:
            out["d" + s[1:]] = str(int(r[s]) - mins[s]) if r[s] else ""
        rel.append(out)
    with open(rel_path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["rider"] + ["d" + s[1:] for s in STAGES])
        w.writeheader()
        w.writerows(rel)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tdf.csv",
         sys.argv[2] if len(sys.argv) > 2 else "tdf_relative.csv")
