"""Linear max-margin learners and the experimental protocol pieces:
pairwise 3-class SVM classification, epsilon-insensitive regression,
stratified cross-validation, ReliefF/RReliefF feature ranking, and
minority-class subsampling.

Both solvers are sequential two-variable dual optimizers with
maximal-violating-pair working-set selection, linear kernel only. The
contract is KKT feasibility within the tolerance, not algorithmic
identity with any particular toolkit. Defaults C=1.0, epsilon=0.001,
tol=0.001.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import evaluate, vector

CLASS_ORDER = ("low", "medium", "high")
DEFAULT_C = 1.0
DEFAULT_EPSILON = 0.001
DEFAULT_TOL = 0.001
MODEL_FORMAT_VERSION = 1

_TAU = 1e-12


class ConfigurationError(ValueError):
    pass


class DegenerateModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Binary SVM (classification)

def svc_train(X, y, C=DEFAULT_C, tol=DEFAULT_TOL, max_iter=200000):
    """Train one binary soft-margin linear SVM. y must be +/-1. Returns
    (alpha, w, b) with the dual solution KKT-feasible within tol."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(X.shape[1])
    diag = np.einsum("ij,ij->i", X, X)
    for _ in range(max_iter):
        g = y * (X @ w) - 1.0  # gradient of the dual objective
        score = -y * g
        up = ((y > 0) & (alpha < C - _TAU)) | ((y < 0) & (alpha > _TAU))
        low = ((y < 0) & (alpha < C - _TAU)) | ((y > 0) & (alpha > _TAU))
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        j = int(np.flatnonzero(low)[np.argmin(score[low])])
        if score[i] - score[j] <= tol:
            break
        kij = float(X[i] @ X[j])
        quad = max(diag[i] + diag[j] - 2.0 * kij, _TAU)
        delta = (score[i] - score[j]) / quad
        old_i, old_j = alpha[i], alpha[j]
        total = y[i] * old_i + y[j] * old_j
        ai = np.clip(old_i + y[i] * delta, 0.0, C)
        aj = y[j] * (total - y[i] * ai)
        if aj < 0.0 or aj > C:
            aj = np.clip(aj, 0.0, C)
            ai = y[i] * (total - y[j] * aj)
        alpha[i], alpha[j] = ai, aj
        w += y[i] * (ai - old_i) * X[i] + y[j] * (aj - old_j) * X[j]
    b = _svc_bias(X, y, alpha, w, C)
    return alpha, w, b


def _svc_bias(X, y, alpha, w, C):
    margins = X @ w
    lo, hi = -np.inf, np.inf
    exact = []
    for t in range(len(y)):
        candidate = y[t] - margins[t]
        if _TAU < alpha[t] < C - _TAU:
            exact.append(candidate)
        elif alpha[t] <= _TAU:
            # y(wx + b) >= 1
            if y[t] > 0:
                lo = max(lo, candidate)
            else:
                hi = min(hi, candidate)
        else:
            # alpha at C: y(wx + b) <= 1
            if y[t] > 0:
                hi = min(hi, candidate)
            else:
                lo = max(lo, candidate)
    if exact:
        return float(np.mean(exact))
    if np.isfinite(lo) and np.isfinite(hi):
        return float((lo + hi) / 2.0)
    if np.isfinite(lo):
        return float(lo)
    if np.isfinite(hi):
        return float(hi)
    return 0.0


def svc_dual_objective(X, y, alpha):
    """Dual objective (maximization form) of a binary SVM."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    v = (alpha * y) @ X
    return float(alpha.sum() - 0.5 * (v @ v))


def svc_kkt_violation(X, y, alpha, w, b, C):
    """Largest KKT violation of a binary SVM solution: box breaches,
    equality-constraint residual, and complementary slackness."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    worst = abs(float(alpha @ y))
    worst = max(worst, float(np.max(-alpha, initial=0.0)))
    worst = max(worst, float(np.max(alpha - C, initial=0.0)))
    margin = y * (X @ w + b)
    for t in range(len(y)):
        if alpha[t] <= _TAU:
            worst = max(worst, 1.0 - margin[t])
        elif alpha[t] >= C - _TAU:
            worst = max(worst, margin[t] - 1.0)
        else:
            worst = max(worst, abs(margin[t] - 1.0))
    return worst


# ---------------------------------------------------------------------------
# Epsilon-insensitive regression

def svr_train(X, y, C=DEFAULT_C, epsilon=DEFAULT_EPSILON, tol=DEFAULT_TOL,
              max_iter=200000):
    """Train a linear epsilon-insensitive regressor. Returns
    (beta, w, b) where beta are the signed dual coefficients in [-C, C]
    summing to 0."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    beta = np.zeros(n)
    w = np.zeros(X.shape[1])
    diag = np.einsum("ij,ij->i", X, X)
    for _ in range(max_iter):
        g = X @ w - y
        d_up = g + np.where(beta >= 0.0, epsilon, -epsilon)
        d_dn = -g + np.where(beta <= 0.0, epsilon, -epsilon)
        d_up = np.where(beta < C - _TAU, d_up, np.inf)
        d_dn = np.where(beta > -C + _TAU, d_dn, np.inf)
        i = int(np.argmin(d_up))
        j = int(np.argmin(d_dn))
        if i == j:
            masked = d_dn.copy()
            masked[i] = np.inf
            j = int(np.argmin(masked))
        if not np.isfinite(d_up[i]) or not np.isfinite(d_dn[j]) \
                or d_up[i] + d_dn[j] >= -tol:
            break
        t = _svr_step(beta[i], beta[j], float(g[i]), float(g[j]),
                      float(diag[i] + diag[j] - 2.0 * X[i] @ X[j]),
                      C, epsilon)
        if t <= 0.0:
            break
        old_i, old_j = beta[i], beta[j]
        beta[i] += t
        beta[j] -= t
        w += (beta[i] - old_i) * X[i] + (beta[j] - old_j) * X[j]
    b = _svr_bias(X, y, beta, w, C, epsilon)
    return beta, w, b


def _svr_step(bi, bj, gi, gj, eta, C, epsilon):
    """Exact minimizer of the piecewise quadratic along beta_i += t,
    beta_j -= t for t in [0, t_max]."""
    eta = max(eta, _TAU)
    t_max = min(C - bi, bj + C)
    if t_max <= 0.0:
        return 0.0

    def objective(t):
        return (0.5 * eta * t * t + t * (gi - gj)
                + epsilon * (abs(bi + t) - abs(bi)
                             + abs(bj - t) - abs(bj)))

    candidates = {t_max}
    for kink in (-bi, bj):
        if 0.0 < kink < t_max:
            candidates.add(kink)
    for si in (-1.0, 1.0):
        for sj in (-1.0, 1.0):
            t_star = -(gi - gj + epsilon * (si - sj)) / eta
            if 0.0 < t_star < t_max \
                    and np.sign(bi + t_star) in (si, 0.0) \
                    and np.sign(bj - t_star) in (sj, 0.0):
                candidates.add(t_star)
    best_t = 0.0
    best_val = 0.0
    for t in candidates:
        val = objective(t)
        if val < best_val - 1e-15:
            best_val = val
            best_t = t
    return best_t


def _svr_bias(X, y, beta, w, C, epsilon):
    residual = y - X @ w
    lo, hi = -np.inf, np.inf
    exact = []
    for t in range(len(y)):
        if _TAU < beta[t] < C - _TAU:
            exact.append(residual[t] - epsilon)
        elif -C + _TAU < beta[t] < -_TAU:
            exact.append(residual[t] + epsilon)
        elif abs(beta[t]) <= _TAU:
            lo = max(lo, residual[t] - epsilon)
            hi = min(hi, residual[t] + epsilon)
        elif beta[t] >= C - _TAU:
            hi = min(hi, residual[t] - epsilon)
        else:
            lo = max(lo, residual[t] + epsilon)
    if exact:
        return float(np.mean(exact))
    if np.isfinite(lo) and np.isfinite(hi) and lo <= hi:
        return float((lo + hi) / 2.0)
    if np.isfinite(lo):
        return float(lo)
    if np.isfinite(hi):
        return float(hi)
    return 0.0


def svr_objective(X, y, beta, epsilon):
    """Dual objective (minimization form) of the regressor."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    v = beta @ X
    return float(0.5 * (v @ v) - y @ beta
                 + epsilon * np.abs(beta).sum())


def svr_kkt_violation(X, y, beta, w, b, C, epsilon):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    worst = abs(float(beta.sum()))
    worst = max(worst, float(np.max(np.abs(beta) - C, initial=0.0)))
    residual = y - (X @ w + b)
    for t in range(len(y)):
        if abs(beta[t]) <= _TAU:
            worst = max(worst, abs(residual[t]) - epsilon)
        elif _TAU < beta[t] < C - _TAU:
            worst = max(worst, abs(residual[t] - epsilon))
        elif -C + _TAU < beta[t] < -_TAU:
            worst = max(worst, abs(residual[t] + epsilon))
        elif beta[t] >= C - _TAU:
            worst = max(worst, epsilon - residual[t])
        else:
            worst = max(worst, residual[t] + epsilon)
    return worst


# ---------------------------------------------------------------------------
# Model container

@dataclass
class BinaryMachine:
    pair: tuple  # (negative class, positive class)
    weights: np.ndarray
    bias: float


@dataclass
class LinearModel:
    task: str  # "classification" | "regression"
    feature_names: tuple
    stats: vector.NormalizationStats
    prompt_vocab: tuple
    l1_vocab: tuple
    profile_name: str
    hyperparams: dict
    classes: tuple = ()
    machines: list = field(default_factory=list)
    weights: Optional[np.ndarray] = None
    bias: float = 0.0

    def save(self, path):
        obj = {
            "format_version": MODEL_FORMAT_VERSION,
            "task": self.task,
            "feature_names": list(self.feature_names),
            "normalization": self.stats.to_json(),
            "prompt_vocabulary": list(self.prompt_vocab),
            "l1_vocabulary": list(self.l1_vocab),
            "profile": self.profile_name,
            "hyperparams": self.hyperparams,
            "classes": list(self.classes),
            "machines": [
                {"pair": list(m.pair), "weights": m.weights.tolist(),
                 "bias": m.bias}
                for m in self.machines],
        }
        if self.weights is not None:
            obj["weights"] = self.weights.tolist()
            obj["bias"] = self.bias
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(obj, handle, indent=2)
            handle.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as handle:
            obj = json.load(handle)
        model = cls(
            task=obj["task"],
            feature_names=tuple(obj["feature_names"]),
            stats=vector.NormalizationStats.from_json(obj["normalization"]),
            prompt_vocab=tuple(obj["prompt_vocabulary"]),
            l1_vocab=tuple(obj["l1_vocabulary"]),
            profile_name=obj["profile"],
            hyperparams=obj["hyperparams"],
            classes=tuple(obj["classes"]),
            machines=[BinaryMachine(tuple(m["pair"]),
                                    np.asarray(m["weights"]), m["bias"])
                      for m in obj["machines"]],
        )
        if "weights" in obj:
            model.weights = np.asarray(obj["weights"])
            model.bias = obj["bias"]
        return model


def _prepare(matrix: vector.FeatureMatrix):
    prompt_vocab = vector.build_vocabulary(matrix.prompts) \
        if matrix.profile.include_prompt else ()
    l1_vocab = vector.build_vocabulary(matrix.l1s) \
        if matrix.profile.include_l1 else ()
    expanded, names = vector.expand(matrix, prompt_vocab, l1_vocab)
    nfeat = matrix.values.shape[1]
    imputed = np.zeros_like(expanded, dtype=bool)
    imputed[:, :nfeat] = matrix.imputed
    scaled, stats = vector.normalize(expanded, imputed)
    return scaled, names, stats, prompt_vocab, l1_vocab


def _model_inputs(model: LinearModel, matrix: vector.FeatureMatrix):
    expanded, names = vector.expand(
        matrix, model.prompt_vocab, model.l1_vocab)
    if names != model.feature_names:
        raise ConfigurationError(
            "matrix profile does not match the model's feature layout")
    return vector.apply_normalization(expanded, model.stats)


def train_classifier(matrix: vector.FeatureMatrix, C=DEFAULT_C,
                     tol=DEFAULT_TOL, seed=0) -> LinearModel:
    """Pairwise one-vs-one SVM over the fixed class order
    (low, medium, high). Normalization statistics and categorical
    vocabularies come from the training matrix and travel with the
    model."""
    labels = matrix.labels
    if any(lab is None for lab in labels):
        raise ConfigurationError("classification needs labels on all rows")
    present = [c for c in CLASS_ORDER if c in set(labels)]
    if len(present) < 2:
        raise DegenerateModelError(
            f"need at least 2 classes, found {present}")
    scaled, names, stats, prompt_vocab, l1_vocab = _prepare(matrix)
    machines = []
    for a_idx in range(len(present)):
        for b_idx in range(a_idx + 1, len(present)):
            neg, pos = present[a_idx], present[b_idx]
            rows = [r for r, lab in enumerate(labels) if lab in (neg, pos)]
            Xp = scaled[rows]
            yp = np.array([1.0 if labels[r] == pos else -1.0
                           for r in rows])
            alpha, w, b = svc_train(Xp, yp, C=C, tol=tol)
            machines.append(BinaryMachine((neg, pos), w, b))
    return LinearModel(
        task="classification",
        feature_names=names,
        stats=stats,
        prompt_vocab=prompt_vocab,
        l1_vocab=l1_vocab,
        profile_name=matrix.profile.name,
        hyperparams={"C": C, "tol": tol, "seed": seed},
        classes=tuple(present),
        machines=machines,
    )


def train_regressor(matrix: vector.FeatureMatrix, C=DEFAULT_C,
                    epsilon=DEFAULT_EPSILON, tol=DEFAULT_TOL,
                    seed=0) -> LinearModel:
    scores = matrix.scores
    if any(s is None for s in scores):
        raise ConfigurationError("regression needs scores on all rows")
    scaled, names, stats, prompt_vocab, l1_vocab = _prepare(matrix)
    y = np.asarray(scores, dtype=float)
    beta, w, b = svr_train(scaled, y, C=C, epsilon=epsilon, tol=tol)
    return LinearModel(
        task="regression",
        feature_names=names,
        stats=stats,
        prompt_vocab=prompt_vocab,
        l1_vocab=l1_vocab,
        profile_name=matrix.profile.name,
        hyperparams={"C": C, "epsilon": epsilon, "tol": tol, "seed": seed},
        weights=w,
        bias=b,
    )


def predict(model: LinearModel, matrix: vector.FeatureMatrix):
    """Predicted labels (classification, pairwise voting with ties to the
    lowest class in the fixed order) or scores (regression)."""
    X = _model_inputs(model, matrix)
    if model.task == "regression":
        return [float(v) for v in X @ model.weights + model.bias]
    votes = np.zeros((X.shape[0], len(model.classes)))
    index = {c: i for i, c in enumerate(model.classes)}
    for machine in model.machines:
        decision = X @ machine.weights + machine.bias
        neg, pos = machine.pair
        votes[decision >= 0, index[pos]] += 1
        votes[decision < 0, index[neg]] += 1
    out = []
    order = [CLASS_ORDER.index(c) for c in model.classes]
    for row in range(X.shape[0]):
        best = max(range(len(model.classes)),
                   key=lambda c: (votes[row, c], -order[c]))
        out.append(model.classes[best])
    return out


# ---------------------------------------------------------------------------
# Cross-validation

def _stratified_folds(labels, k, seed):
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    for cls in sorted(set(labels), key=str):
        rows = [r for r, lab in enumerate(labels) if lab == cls]
        rng.shuffle(rows)
        for pos, row in enumerate(rows):
            folds[pos % k].append(row)
    return [sorted(f) for f in folds]


def _plain_folds(n, k, seed):
    rng = np.random.default_rng(seed)
    rows = list(range(n))
    rng.shuffle(rows)
    folds = [[] for _ in range(k)]
    for pos, row in enumerate(rows):
        folds[pos % k].append(row)
    return [sorted(f) for f in folds]


def cross_validate(matrix: vector.FeatureMatrix, k=10, seed=0,
                   task="classification", C=DEFAULT_C,
                   epsilon=DEFAULT_EPSILON, tol=DEFAULT_TOL):
    """k-fold cross-validation, stratified for classification.
    Normalization statistics are computed inside each training fold only.
    Deterministic given the seed."""
    n = len(matrix.ids)
    if k > n:
        raise ConfigurationError(f"k={k} exceeds {n} rows")
    if task == "classification":
        folds = _stratified_folds(matrix.labels, k, seed)
    else:
        folds = _plain_folds(n, k, seed)
    all_pred = [None] * n
    for fold in folds:
        if not fold:
            continue
        train_rows = [r for r in range(n) if r not in set(fold)]
        train = matrix.subset(train_rows)
        test = matrix.subset(fold)
        if task == "classification":
            model = train_classifier(train, C=C, tol=tol, seed=seed)
        else:
            model = train_regressor(train, C=C, epsilon=epsilon, tol=tol,
                                    seed=seed)
        for row, value in zip(fold, predict(model, test)):
            all_pred[row] = value
    if task == "classification":
        return evaluate.classification_report(all_pred, matrix.labels)
    return evaluate.regression_report(all_pred, matrix.scores)


# ---------------------------------------------------------------------------
# ReliefF / RReliefF

@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple  # ((name, weight), ...) non-increasing by weight

    def names(self):
        return [name for name, _ in self.entries]


def _relief_attributes(matrix: vector.FeatureMatrix):
    """Scaled numeric columns plus one categorical attribute each for
    prompt and L1 (0/1 diff)."""
    scaled, _ = vector.normalize(
        matrix.values, matrix.imputed) if matrix.values.shape[0] >= 2 \
        else (matrix.values, None)
    columns = [scaled[:, i] for i in range(scaled.shape[1])]
    names = list(matrix.feature_names)
    cats = []
    if matrix.profile.include_prompt:
        cats.append(("prompt", matrix.prompts))
    if matrix.profile.include_l1:
        cats.append(("l1", matrix.l1s))
    return columns, names, cats


def _diff_matrix(columns, cats, n):
    """n x n x nattr stack of attribute differences."""
    nattr = len(columns) + len(cats)
    diffs = np.zeros((n, n, nattr))
    for a, col in enumerate(columns):
        diffs[:, :, a] = np.abs(col[:, None] - col[None, :])
    for c, (_, values) in enumerate(cats):
        arr = np.array(values, dtype=object)
        diffs[:, :, len(columns) + c] = (
            arr[:, None] != arr[None, :]).astype(float)
    return diffs


def relieff(matrix: vector.FeatureMatrix, task="classification",
            k_neighbors=10, seed=0) -> FeatureRanking:
    """Instance-based feature relevance; every instance is sampled once
    (m = all). Classification uses ReliefF with class-prior weighted
    misses; regression uses the RReliefF decomposition with uniform
    neighbor weights. Distances are Manhattan over the same attribute
    diffs the updates use."""
    n = len(matrix.ids)
    if n <= k_neighbors:
        raise ConfigurationError(
            f"need more than k_neighbors={k_neighbors} rows, have {n}")
    columns, names, cats = _relief_attributes(matrix)
    all_names = names + [name for name, _ in cats]
    diffs = _diff_matrix(columns, cats, n)
    distance = diffs.sum(axis=2)
    nattr = len(all_names)
    weights = np.zeros(nattr)

    if task == "classification":
        labels = matrix.labels
        if any(lab is None for lab in labels):
            raise ConfigurationError("relieff needs labels on all rows")
        classes = sorted(set(labels), key=str)
        priors = {c: labels.count(c) / n for c in classes}
        rows_of = {c: [r for r in range(n) if labels[r] == c]
                   for c in classes}
        for r in range(n):
            own = labels[r]
            for cls in classes:
                pool = [t for t in rows_of[cls] if t != r]
                if not pool:
                    continue
                pool.sort(key=lambda t: (distance[r, t], t))
                near = pool[:k_neighbors]
                contrib = diffs[r, near, :].sum(axis=0) / (n * k_neighbors)
                if cls == own:
                    weights -= contrib
                else:
                    weights += priors[cls] / (1.0 - priors[own]) * contrib
        return _ranked(all_names, weights)

    scores = matrix.scores
    if any(s is None for s in scores):
        raise ConfigurationError("relieff regression needs scores")
    y = np.asarray(scores, dtype=float)
    span = y.max() - y.min()
    y_scaled = (y - y.min()) / span if span > 0 else np.zeros(n)
    n_dc = 0.0
    n_df = np.zeros(nattr)
    n_dcdf = np.zeros(nattr)
    total = 0.0
    for r in range(n):
        pool = sorted((t for t in range(n) if t != r),
                      key=lambda t: (distance[r, t], t))
        near = pool[:k_neighbors]
        for t in near:
            wgt = 1.0 / k_neighbors
            dy = abs(y_scaled[r] - y_scaled[t])
            n_dc += dy * wgt
            n_df += diffs[r, t, :] * wgt
            n_dcdf += dy * diffs[r, t, :] * wgt
            total += wgt
    if n_dc <= 0 or total - n_dc <= 0:
        return _ranked(all_names, np.zeros(nattr))
    weights = n_dcdf / n_dc - (n_df - n_dcdf) / (total - n_dc)
    return _ranked(all_names, weights)


def _ranked(names, weights):
    entries = sorted(zip(names, (float(w) for w in weights)),
                     key=lambda item: (-item[1], item[0]))
    return FeatureRanking(tuple(entries))


# ---------------------------------------------------------------------------
# Class balancing

def balance_indices(labels, seed=0) -> list:
    """Row indices of a minority-count subsample per class, original
    order preserved. Deterministic given the seed."""
    if not labels or any(lab is None for lab in labels):
        raise ConfigurationError("balancing needs labels on all rows")
    counts = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    target = min(counts.values())
    rng = np.random.default_rng(seed)
    keep = set()
    for cls in sorted(counts, key=str):
        rows = [r for r, lab in enumerate(labels) if lab == cls]
        if len(rows) > target:
            chosen = rng.choice(len(rows), size=target, replace=False)
            keep.update(rows[i] for i in chosen)
        else:
            keep.update(rows)
    return sorted(keep)


def subsample_balance(items, labels, seed=0) -> list:
    """Downsample every class to the minority-class count."""
    return [items[r] for r in balance_indices(labels, seed)]
