"""Independent reference implementations used as test oracles. These are
deliberately written as straight-line code, separate from the package
internals, so agreement is evidence of correctness rather than tautology."""
from __future__ import annotations

import numpy as np

# ---------------------------------------------------------------------------
# MTLD


def mtld_oracle(tokens, threshold=0.72):
    """Bidirectional MTLD computed literally from the procedure: forward
    scan, reversed scan, partial factors, mean of defined directions.
    None when neither direction completes any factor."""
    def one_direction(seq):
        factors = 0.0
        window = []
        for tok in seq:
            window.append(tok)
            ttr = len(set(window)) / len(window)
            if ttr < threshold:
                factors += 1.0
                window = []
        if window:
            ttr = len(set(window)) / len(window)
            factors += (1.0 - ttr) / (1.0 - threshold)
        return factors

    n = len(tokens)
    values = []
    for seq in (list(tokens), list(reversed(tokens))):
        factors = one_direction(seq)
        if factors > 0:
            values.append(n / factors)
    if not values:
        return None
    return sum(values) / len(values)


# ---------------------------------------------------------------------------
# Overlap brute force

def overlap_oracle(doc):
    """Overlap features by explicit pair enumeration, with the unit sets
    rebuilt from the raw tokens."""
    from essayscore import annotate

    lexical = {"NN", "NNS", "NNP", "NNPS", "VB", "VBD", "VBG", "VBN",
               "VBP", "VBZ", "JJ", "JJR", "JJS", "RB", "RBR", "RBS"}
    nouns_tags = {"NN", "NNS", "NNP", "NNPS"}
    per_sentence = []
    for sent in doc.sentences:
        content, nouns, stems, args = set(), set(), set(), set()
        for tok in sent.tokens:
            form = tok.form.lower()
            stem = (tok.stem or annotate.stem_word(tok.form)).lower()
            if tok.pos in lexical:
                content.add(form)
                stems.add(stem)
            if tok.pos in nouns_tags:
                nouns.add(form)
                args.add(stem)
            if tok.pos == "PRP":
                args.add(form)
        per_sentence.append({"content": content, "noun": nouns,
                             "stem": stems, "arg": args})
    n = len(per_sentence)
    out = {}
    for kind in ("content", "noun", "stem", "arg"):
        local_hits = local_pairs = 0
        global_hits = global_pairs = 0
        for i in range(n):
            for j in range(n):
                if j <= i:
                    continue
                shared = bool(per_sentence[i][kind]
                              & per_sentence[j][kind])
                global_pairs += 1
                global_hits += shared
                if j == i + 1:
                    local_pairs += 1
                    local_hits += shared
        out[f"DISC_{kind}OverlapLocal"] = (
            local_hits / local_pairs if local_pairs else 0.0)
        out[f"DISC_{kind}OverlapGlobal"] = (
            global_hits / global_pairs if global_pairs else 0.0)
    return out


# ---------------------------------------------------------------------------
# Quadratic-programming oracles (cvxopt)

def _qp(P, q, G, h, A, b):
    from cvxopt import matrix, solvers
    opts = {"show_progress": False, "abstol": 1e-10, "reltol": 1e-10,
            "feastol": 1e-10, "maxiters": 200}
    sol = solvers.qp(matrix(P), matrix(q), matrix(G), matrix(h),
                     matrix(A), matrix(b), options=opts)
    return np.array(sol["x"]).ravel()


def qp_svc_objective(X, y, C):
    """Optimal dual objective (maximization form) of the binary SVM via a
    general-purpose QP solver."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    Q = np.outer(y, y) * (X @ X.T)
    P = Q + 1e-10 * np.eye(n)
    q = -np.ones(n)
    G = np.vstack([-np.eye(n), np.eye(n)])
    h = np.hstack([np.zeros(n), C * np.ones(n)])
    A = y.reshape(1, -1)
    b = np.zeros(1)
    alpha = _qp(P, q, G, h, A, b)
    return float(alpha.sum() - 0.5 * alpha @ Q @ alpha)


def qp_svr_objective(X, y, C, epsilon):
    """Optimal dual objective (minimization form) of the epsilon-SVR via
    the standard alpha+/alpha- QP."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    K = X @ X.T
    Q = np.block([[K, -K], [-K, K]])
    P = Q + 1e-10 * np.eye(2 * n)
    q = np.hstack([epsilon - y, epsilon + y])
    G = np.vstack([-np.eye(2 * n), np.eye(2 * n)])
    h = np.hstack([np.zeros(2 * n), C * np.ones(2 * n)])
    A = np.hstack([np.ones(n), -np.ones(n)]).reshape(1, -1)
    b = np.zeros(1)
    u = _qp(P, q, G, h, A, b)
    return float(0.5 * u @ Q @ u + q @ u)


# ---------------------------------------------------------------------------
# ReliefF / RReliefF direct-formula oracles

def _scaled_columns(X):
    n, d = X.shape
    cols = []
    for j in range(d):
        col = X[:, j].astype(float)
        mn, mx = col.min(), col.max()
        if mx > mn:
            cols.append((col - mn) / (mx - mn))
        else:
            cols.append(np.zeros(n))
    return cols


def _attr_diff(cols, cats, a, r, t):
    d = len(cols)
    if a < d:
        return abs(cols[a][r] - cols[a][t])
    values = cats[a - d]
    return 0.0 if values[r] == values[t] else 1.0


def relieff_class_oracle(X, labels, prompts, l1s, k):
    """ReliefF weights by literal formula evaluation: for each instance,
    k nearest hits per class (Manhattan, ties by row index), hit diffs
    subtracted, miss diffs weighted by P(class)/(1 - P(own))."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    cols = _scaled_columns(X)
    cats = [list(prompts), list(l1s)]
    nattr = len(cols) + len(cats)

    def dist(r, t):
        return sum(_attr_diff(cols, cats, a, r, t) for a in range(nattr))

    classes = sorted(set(labels), key=str)
    priors = {c: labels.count(c) / n for c in classes}
    weights = np.zeros(nattr)
    for r in range(n):
        for cls in classes:
            pool = [t for t in range(n) if t != r and labels[t] == cls]
            if not pool:
                continue
            pool.sort(key=lambda t: (dist(r, t), t))
            near = pool[:k]
            for t in near:
                for a in range(nattr):
                    d = _attr_diff(cols, cats, a, r, t) / (n * k)
                    if cls == labels[r]:
                        weights[a] -= d
                    else:
                        weights[a] += (priors[cls]
                                       / (1.0 - priors[labels[r]])) * d
    return weights


def rrelieff_oracle(X, scores, prompts, l1s, k):
    """RReliefF weights by the N_dC / N_dF / N_dC&dF decomposition with
    uniform 1/k neighbor weights and a min-max-scaled target."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    cols = _scaled_columns(X)
    cats = [list(prompts), list(l1s)]
    nattr = len(cols) + len(cats)

    def dist(r, t):
        return sum(_attr_diff(cols, cats, a, r, t) for a in range(nattr))

    y = np.asarray(scores, dtype=float)
    span = y.max() - y.min()
    ys = (y - y.min()) / span if span > 0 else np.zeros(n)
    n_dc = 0.0
    n_df = np.zeros(nattr)
    n_dcdf = np.zeros(nattr)
    total = 0.0
    for r in range(n):
        pool = sorted((t for t in range(n) if t != r),
                      key=lambda t: (dist(r, t), t))
        for t in pool[:k]:
            wgt = 1.0 / k
            dy = abs(ys[r] - ys[t])
            n_dc += dy * wgt
            total += wgt
            for a in range(nattr):
                d = _attr_diff(cols, cats, a, r, t)
                n_df[a] += d * wgt
                n_dcdf[a] += dy * d * wgt
    if n_dc <= 0 or total - n_dc <= 0:
        return np.zeros(nattr)
    return n_dcdf / n_dc - (n_df - n_dcdf) / (total - n_dc)


# ---------------------------------------------------------------------------
# Partial correlation via residual regression

def partial_corr_residual_oracle(x, y, z):
    """Pearson correlation of the least-squares residuals of x and y
    after regressing each on z (with intercept)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    design = np.column_stack([np.ones(len(z)), z])

    def residual(v):
        coef, *_ = np.linalg.lstsq(design, v, rcond=None)
        return v - design @ coef

    rx = residual(x)
    ry = residual(y)
    return float(rx @ ry / np.sqrt((rx @ rx) * (ry @ ry)))
