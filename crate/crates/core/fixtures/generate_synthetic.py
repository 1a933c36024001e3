"""Regenerates synthetic/ and its expected scores with a dense numpy solve."""
import csv
import pathlib

import numpy as np

CENSUS = 2006
ALPHA = 0.85
OUT = pathlib.Path(__file__).parent / "synthetic"

JOURNALS = [
    ("MED1", "Clinical Letters", ["Medicine"]),
    ("MED2", "Journal of Internal Practice", ["Medicine"]),
    ("MED3", "Public Health Reports", ["Medicine", "Economics"]),
    ("MED4", "Surgery Quarterly", ["Medicine"]),
    ("ECO1", "Ecology Review", ["Ecology"]),
    ("ECO2", "Marine Systems", ["Ecology"]),
    ("ECO3", "Field Botany", ["Ecology"]),
    ("ECO4", "Population Dynamics", ["Ecology", "Economics"]),
    ("ECN1", "Economic Inquiry", ["Economics"]),
    ("ECN2", "Labour Studies", ["Economics"]),
    ("ECN3", "Trade and Prices", ["Economics"]),
    ("ARCH", "Archive of Old Notes", ["History"]),
]


def main():
    rng = np.random.default_rng(2006)
    ids = [j[0] for j in JOURNALS]
    n = len(ids)
    years = range(2000, CENSUS + 1)
    articles = {(i, y): int(rng.integers(5, 120)) for i in range(n) for y in years}

    records = []
    for citing in range(n):
        if ids[citing] == "ARCH":
            continue
        for cited in range(n):
            same_field = bool(set(JOURNALS[citing][2]) & set(JOURNALS[cited][2]))
            for cited_year in range(1996, CENSUS + 1):
                rate = 0.6 if same_field else 0.08
                count = int(rng.poisson(rate * (3 if cited_year >= CENSUS - 2 else 1)))
                if count > 0:
                    records.append((ids[citing], ids[cited], CENSUS, cited_year, count))
        # earlier census year, ignored by the metrics
        records.append((ids[citing], ids[(citing + 1) % n], CENSUS - 1, CENSUS - 2, 4))

    with open(OUT / "journals.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["journal_id", "name", "fields", "year", "articles"])
        for i, (jid, name, fields) in enumerate(JOURNALS):
            for y in years:
                w.writerow([jid, name, ";".join(fields), y, articles[(i, y)]])
    with open(OUT / "citations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["citing_id", "cited_id", "citing_year", "cited_year", "count"])
        w.writerows(records)

    index = {j: k for k, j in enumerate(ids)}
    z = np.zeros((n, n))
    ifc = np.zeros(n)
    tc = np.zeros(n, dtype=int)
    for citing, cited, cy, dy, c in records:
        if cy != CENSUS:
            continue
        i, j = index[cited], index[citing]
        tc[i] += c
        if dy in (CENSUS - 1, CENSUS - 2):
            ifc[i] += c
        if CENSUS - 5 <= dy <= CENSUS - 1 and i != j:
            z[i, j] += c
    n5 = np.array([sum(articles[(i, y)] for y in range(CENSUS - 5, CENSUS)) for i in range(n)])
    n2 = np.array([sum(articles[(i, y)] for y in range(CENSUS - 2, CENSUS)) for i in range(n)])
    a = n5 / n5.sum()
    col = z.sum(axis=0)
    p = np.where(col > 0, z / np.where(col > 0, col, 1), a[:, None])
    pi = np.linalg.solve(np.eye(n) - ALPHA * p, (1 - ALPHA) * a)
    pi /= pi.sum()
    h = np.where(col > 0, z / np.where(col > 0, col, 1), 0.0)
    inf = h @ pi
    ef = 100 * inf / inf.sum()
    ai = 0.01 * ef / a

    with open(OUT / "expected_scores.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["journal_id", "ef", "ai", "impact_factor", "total_citations", "n5", "n2"])
        for k in range(n):
            w.writerow([ids[k], f"{ef[k]:.12f}", f"{ai[k]:.12f}", f"{ifc[k] / n2[k]:.12f}", tc[k], n5[k], n2[k]])


if __name__ == "__main__":
    main()
