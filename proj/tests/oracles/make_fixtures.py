"""Regenerates tests/fixtures/oracle_values.json with scipy/numpy/hashlib.

The C++ suite never calls this; it only reads the frozen output.
"""
import hashlib
import json
import math
import pathlib

import numpy as np
from scipy import special, stats

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "oracle_values.json"


def sha(s):
    return hashlib.sha256(s.encode("utf-8")).hexdigest()


def distributions():
    cdf = []
    for df in (1, 2, 3, 5, 10, 20, 30, 100, 1000):
        for t in (-40.0, -6.5, -2.466, -1.0, -0.1, 0.0, 0.3, 0.816, 2.077, 3.5, 12.0):
            cdf.append({"t": t, "df": df, "cdf": float(stats.t.cdf(t, df)),
                        "two_tailed": float(2 * stats.t.sf(abs(t), df)),
                        "pdf": float(stats.t.pdf(t, df))})
    quant = []
    for df in (1, 2, 4, 9, 20, 60, 500):
        for p in (1e-6, 0.001, 0.025, 0.1, 0.5, 0.8, 0.975, 0.999):
            quant.append({"p": p, "df": df, "q": float(stats.t.ppf(p, df))})
    fsurv = []
    for d1, d2 in ((1, 1), (1, 20), (2, 30), (3, 7), (5, 100)):
        for f in (0.0, 0.01, 0.5, 1.0, 2.5, 6.136, 40.0):
            fsurv.append({"f": f, "d1": d1, "d2": d2, "sf": float(stats.f.sf(f, d1, d2))})
    beta = []
    for a, b in ((0.5, 0.5), (1, 1), (2, 5), (10, 0.5), (0.5, 30), (50, 60)):
        for x in (0.0, 1e-4, 0.1, 0.37, 0.5, 0.9, 0.9999, 1.0):
            beta.append({"a": a, "b": b, "x": x, "value": float(special.betainc(a, b, x))})
    return {"t_cdf": cdf, "t_quantile": quant, "f_survival": fsurv, "incomplete_beta": beta}


def pooled(m1, s1, n1, m2, s2, n2):
    df = n1 + n2 - 2
    sp = math.sqrt(((n1 - 1) * s1 ** 2 + (n2 - 1) * s2 ** 2) / df)
    se = sp * math.sqrt(1 / n1 + 1 / n2)
    t = (m1 - m2) / se
    crit = stats.t.ppf(0.975, df)
    return {"t": t, "df": df, "p": float(2 * stats.t.sf(abs(t), df)), "diff": m1 - m2,
            "se_dm": se, "ci_low": m1 - m2 - crit * se, "ci_high": m1 - m2 + crit * se,
            "d_average": (m1 - m2) / math.sqrt((s1 ** 2 + s2 ** 2) / 2),
            "d_pooled": (m1 - m2) / sp}


TABLE1 = [
    ("#EDITS", 1.000, 0.816, 0.750, 0.622),
    ("#POSTS", 4.300, 4.270, 3.500, 3.778),
    ("#SHARES", 1.700, 2.263, 1.333, 2.146),
    ("#PUBLICATIONS", 6.000, 4.190, 4.833, 5.408),
    ("RSK", 4.025, 1.003, 4.396, 1.281),
    ("CTRL", 4.667, 1.432, 3.389, 1.441),
    ("BEN", 4.850, 0.727, 5.313, 0.765),
    ("EIPC", 2.900, 1.233, 4.111, 1.072),
]


def comparisons():
    out = []
    for name, m1, s1, m2, s2 in TABLE1:
        r = pooled(m1, s1, 10, m2, s2, 12)
        r["variable"] = name
        out.append(r)
    return out


def levene_sets():
    rng = np.random.default_rng(20240506)
    out = []
    for k in range(6):
        a = rng.normal(5, 1 + k * 0.3, size=8 + k).round(3)
        b = rng.normal(4, 1.5, size=11).round(3)
        w, p = stats.levene(a, b, center="mean")
        out.append({"g1": a.tolist(), "g2": b.tolist(), "w": float(w), "p": float(p)})
    return out


def alpha(matrix):
    m = np.asarray(matrix, dtype=float)
    k = m.shape[1]
    item_var = m.var(axis=0, ddof=1).sum()
    total_var = m.sum(axis=1).var(ddof=1)
    return float(k / (k - 1) * (1 - item_var / total_var))


def alpha_sets():
    rng = np.random.default_rng(7)
    out = []
    for k in (2, 3, 6, 11):
        base = rng.integers(1, 8, size=15)
        noise = rng.integers(-2, 3, size=(15, k))
        mat = np.clip(base[:, None] + noise, 1, 7).tolist()
        out.append({"matrix": mat, "alpha": alpha(mat)})
    return out


def digests():
    vectors = [
        (7, "hello"), (7, ""), (8, "hello"), (1, "s3cret"), (42, "Grüße aus Köln 🌍"),
        (1, "sunset with friends"), (2, "sunset with friends"), (999999, "x"),
        (3, "IMG_1234.jpg:204800"), (3, "IMG_1234.jpg:204801"), (12, "new post\nsecond line"),
        (5, "tab\tseparated"), (6, "comma, separated"), (7, "\"quoted\""), (10, " leading space"),
        (11, "trailing space "), (13, "日本語のキャプション"), (14, "emoji 🎉🎉"),
        (2147483647, "max id"), (15, "a" * 300),
    ]
    return [{"user_id": u, "content": c, "digest": sha(f"{u}:{c}")} for u, c in vectors]


def main():
    doc = {
        "distributions": distributions(),
        "comparisons": comparisons(),
        "levene": levene_sets(),
        "alpha": alpha_sets(),
        "digests": digests(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
