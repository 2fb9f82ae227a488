"""Independent reference implementations used by the tests. Deliberately
naive: quadratic loops, textbook formulas, no shared code with the package."""

import math

import numpy as np
from scipy import stats


def dbscan_components(points, eps):
    """Connected components of the eps-threshold graph; singletons are noise.

    Valid as a DBSCAN oracle when min_pts = 2 on distinct points. Clusters are
    numbered by their smallest member index."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            dx = points[i][0] - points[j][0]
            dy = points[i][1] - points[j][1]
            if math.sqrt(dx * dx + dy * dy) <= eps:
                parent[find(i)] = find(j)
    roots = [find(i) for i in range(n)]
    sizes = {}
    for r in roots:
        sizes[r] = sizes.get(r, 0) + 1
    labels, order = [], {}
    for r in roots:
        if sizes[r] < 2:
            labels.append(-1)
        else:
            order.setdefault(r, len(order))
            labels.append(order[r])
    return labels


def dbscan_textbook(points, eps, min_pts):
    """Plain DBSCAN (core/border, BFS expansion) with border points joining the
    first cluster that reaches them in index order; clusters then renumbered by
    smallest member."""
    n = len(points)
    nbrs = []
    for i in range(n):
        row = []
        for j in range(n):
            dx = points[i][0] - points[j][0]
            dy = points[i][1] - points[j][1]
            if math.sqrt(dx * dx + dy * dy) <= eps:
                row.append(j)
        nbrs.append(row)
    core = [len(r) >= min_pts for r in nbrs]
    labels = [None] * n
    cid = 0
    for i in range(n):
        if labels[i] is not None or not core[i]:
            continue
        labels[i] = cid
        queue = [i]
        while queue:
            p = queue.pop(0)
            if not core[p]:
                continue
            for q in nbrs[p]:
                if labels[q] is None:
                    labels[q] = cid
                    queue.append(q)
        cid += 1
    first = {}
    for i, lab in enumerate(labels):
        if lab is not None and lab not in first:
            first[lab] = len(first)
    return [first[lab] if lab is not None else -1 for lab in labels]


def auc_pairwise(scores, labels):
    """P(score_pos > score_neg) + 0.5 P(tie) over all pairs."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(pos) * len(neg))


def ols_normal_equations(X, y):
    """beta, se, t, p via (X'X)^-1 and scipy's t distribution."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    resid = y - X @ beta
    sigma2 = resid @ resid / (n - k)
    se = np.sqrt(np.diag(xtx_inv) * sigma2)
    t = beta / se
    p = 2 * stats.t.sf(np.abs(t), n - k)
    return beta, se, t, p


def gazetteer_pairs(path, region_names=()):
    """Distinct (lowercase name, id) pairs from a Geonames file, counted by
    scanning lines: primary name, ascii name and comma-separated alternates
    of rows with a city, ADM1 or PCL* feature, plus regions named in
    ``region_names``."""
    pairs = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 19:
                continue
            try:
                lat, lon = float(cols[4]), float(cols[5])
            except ValueError:
                continue
            if not (-90 <= lat <= 90 and -180 <= lon <= 180):
                continue
            fclass, fcode = cols[6], cols[7]
            ok = fclass == "P" or (fclass == "A" and (fcode == "ADM1" or fcode.startswith("PCL")))
            ok = ok or (fclass == "L" and fcode in ("RGN", "RGNE")
                        and cols[1].strip().lower() in region_names)
            if not ok:
                continue
            names = [cols[1], cols[2]] + [a for a in cols[3].split(",") if a]
            for nm in names:
                if nm.strip():
                    pairs.add((nm.strip().lower(), int(cols[0])))
    return pairs


def tree_predict_loop(tree_dict, row):
    """Walk one serialized tree node by node."""
    node = 0
    while tree_dict["feature"][node] >= 0:
        f = tree_dict["feature"][node]
        if row[f] <= tree_dict["threshold"][node]:
            node = tree_dict["left"][node]
        else:
            node = tree_dict["right"][node]
    return tree_dict["value"][node]
