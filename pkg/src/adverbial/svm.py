"""Binary rbf-kernel SVM trained with sequential minimal optimization.

The simplified SMO scheme: sweep all points for KKT violations at
tolerance tol, pick the second working index at random (seeded), solve
the two-variable subproblem analytically and clip to the box. Training
stops after max_passes consecutive sweeps without an update or at the
iteration cap. Labels are +1 for the adverb (first element of the pair)
and -1 for the antonym; a decision value of exactly zero maps to the
adverb.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np

from .errors import DataError

MODEL_FORMAT = "rbf-svm-v1"


def rbf_kernel(X: np.ndarray, Z: np.ndarray, gamma: float) -> np.ndarray:
    """k(x, z) = exp(-gamma * ||x - z||^2), computed blockwise."""
    x2 = (X * X).sum(axis=1)[:, None]
    z2 = (Z * Z).sum(axis=1)[None, :]
    d2 = np.maximum(x2 + z2 - 2.0 * X @ Z.T, 0.0)
    return np.exp(-gamma * d2)


def scale_gamma(X: np.ndarray) -> float:
    """The 1 / (n_features * variance) heuristic, with a flat-data fallback."""
    var = float(X.var())
    d = X.shape[1]
    if var <= 0.0:
        return 1.0 / d
    return 1.0 / (d * var)


@dataclass
class SmoResult:
    alphas: np.ndarray
    bias: float
    iterations: int
    gamma: float
    C: float


def smo_train(X: np.ndarray, y: np.ndarray, C: float = 1.0,
              gamma: float | None = None, tol: float = 1e-3,
              max_passes: int = 10, max_iter: int = 2000,
              seed: int = 0) -> SmoResult:
    """Maximize the dual with SMO until KKT violations fall below tol."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise DataError("X must be 2-D with one label per row")
    if set(np.unique(y)) != {-1.0, 1.0}:
        raise DataError("training labels must contain both +1 and -1")
    if gamma is None:
        gamma = scale_gamma(X)
    if gamma <= 0 or C <= 0:
        raise DataError("gamma and C must be positive")

    n = len(X)
    K = rbf_kernel(X, X, gamma)
    alphas = np.zeros(n)
    b = 0.0
    rng = random.Random(seed)

    it = 0
    passes = 0
    while passes < max_passes and it < max_iter:
        changed = 0
        coef = alphas * y
        for i in range(n):
            Ei = float(coef @ K[:, i]) + b - y[i]
            if not ((y[i] * Ei < -tol and alphas[i] < C)
                    or (y[i] * Ei > tol and alphas[i] > 0)):
                continue
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            Ej = float(coef @ K[:, j]) + b - y[j]
            ai_old, aj_old = alphas[i], alphas[j]
            if y[i] == y[j]:
                L = max(0.0, ai_old + aj_old - C)
                H = min(C, ai_old + aj_old)
            else:
                L = max(0.0, aj_old - ai_old)
                H = min(C, C + aj_old - ai_old)
            if H - L < 1e-12:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0:
                continue
            aj = aj_old - y[j] * (Ei - Ej) / eta
            aj = min(max(aj, L), H)
            if abs(aj - aj_old) < 1e-10:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            alphas[i], alphas[j] = ai, aj
            coef[i], coef[j] = ai * y[i], aj * y[j]
            b1 = (b - Ei - y[i] * (ai - ai_old) * K[i, i]
                  - y[j] * (aj - aj_old) * K[i, j])
            b2 = (b - Ej - y[i] * (ai - ai_old) * K[i, j]
                  - y[j] * (aj - aj_old) * K[j, j])
            if 0 < ai < C:
                b = b1
            elif 0 < aj < C:
                b = b2
            else:
                b = 0.5 * (b1 + b2)
            changed += 1
        it += 1
        passes = passes + 1 if changed == 0 else 0
    b = _consistent_bias(K, y, alphas, C)
    return SmoResult(alphas=alphas, bias=b, iterations=it, gamma=gamma, C=C)


def _consistent_bias(K: np.ndarray, y: np.ndarray, alphas: np.ndarray,
                     C: float) -> float:
    """Bias consistent with the converged alphas.

    The running bias of the sweep is unreliable when every alpha sits on a
    box bound, so recompute it: mean of y - g over interior support
    vectors, else the midpoint of the interval the bound constraints allow.
    """
    g = K @ (alphas * y)
    eps = 1e-8 * max(C, 1.0)
    interior = (alphas > eps) & (alphas < C - eps)
    if interior.any():
        return float(np.mean(y[interior] - g[interior]))
    lowers = [-np.inf]
    uppers = [np.inf]
    for gi, yi, ai in zip(g, y, alphas):
        at_upper = ai >= C - eps
        if yi > 0:
            (uppers if at_upper else lowers).append(1.0 - gi)
        else:
            (lowers if at_upper else uppers).append(-1.0 - gi)
    lo, hi = max(lowers), min(uppers)
    if lo > hi:
        lo, hi = hi, lo
    if not np.isfinite(lo):
        return float(hi) if np.isfinite(hi) else 0.0
    if not np.isfinite(hi):
        return float(lo)
    return float(0.5 * (lo + hi))


def dual_objective(K: np.ndarray, y: np.ndarray, alphas: np.ndarray) -> float:
    coef = alphas * y
    return float(alphas.sum() - 0.5 * coef @ K @ coef)


def kkt_max_violation(K: np.ndarray, y: np.ndarray, alphas: np.ndarray,
                      b: float, C: float) -> float:
    """Largest per-point KKT violation of a candidate dual solution.

    alpha = 0 requires y*f >= 1, alpha = C requires y*f <= 1, interior
    alphas require y*f = 1.
    """
    f = K @ (alphas * y) + b
    margins = y * f
    bound_eps = 1e-8 * max(C, 1.0)
    worst = 0.0
    for a, m in zip(alphas, margins):
        if a <= bound_eps:
            worst = max(worst, 1.0 - m)
        elif a >= C - bound_eps:
            worst = max(worst, m - 1.0)
        else:
            worst = max(worst, abs(m - 1.0))
    return worst


@dataclass
class SvmModel:
    """Trained classifier for one adverb/antonym pair."""

    pair: tuple[str, str]
    support_vectors: np.ndarray
    coefficients: np.ndarray  # alpha_i * y_i of the support vectors
    bias: float
    gamma: float
    C: float

    def __post_init__(self) -> None:
        if len(self.support_vectors) != len(self.coefficients):
            raise DataError("support vector / coefficient count mismatch")
        if self.gamma <= 0 or self.C <= 0:
            raise DataError("gamma and C must be positive")
        bad = np.abs(self.coefficients) > self.C + 1e-9
        if bad.any():
            raise DataError("coefficient magnitude exceeds the box constraint")

    @property
    def n_features(self) -> int:
        return int(self.support_vectors.shape[1])

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise DataError(
                f"feature length {X.shape[1]} does not match training "
                f"length {self.n_features}")
        K = rbf_kernel(X, self.support_vectors, self.gamma)
        return K @ self.coefficients + self.bias


def train_svm(X: np.ndarray, labels: list[str], pair: tuple[str, str],
              C: float = 1.0, gamma: float | None = None,
              tol: float = 1e-3, max_passes: int = 10,
              max_iter: int = 2000, seed: int = 0) -> SvmModel:
    """Train the pair model; labels are class tokens from the pair."""
    X = np.asarray(X, dtype=float)
    adverb, antonym = pair
    unknown = [t for t in labels if t not in (adverb, antonym)]
    if unknown:
        raise DataError(f"labels {sorted(set(unknown))} not in pair {pair}")
    y = np.array([1.0 if t == adverb else -1.0 for t in labels])
    if len(set(labels)) < 2:
        raise DataError(f"pair {pair}: training data has a single class")
    result = smo_train(X, y, C=C, gamma=gamma, tol=tol,
                       max_passes=max_passes, max_iter=max_iter, seed=seed)
    keep = result.alphas > 1e-12
    return SvmModel(pair=pair,
                    support_vectors=X[keep].copy(),
                    coefficients=(result.alphas * y)[keep],
                    bias=result.bias,
                    gamma=result.gamma,
                    C=result.C)


def predict_object(model: SvmModel, feature: np.ndarray) -> str:
    """Class token for one behaviour; a decision of exactly zero maps to
    the adverb."""
    value = float(model.decision_function(feature)[0])
    return model.pair[0] if value >= 0.0 else model.pair[1]


def dump_model(model: SvmModel) -> str:
    payload = {
        "format": MODEL_FORMAT,
        "pair": list(model.pair),
        "C": model.C,
        "gamma": model.gamma,
        "bias": model.bias,
        "n_features": model.n_features,
        "coefficients": model.coefficients.tolist(),
        "support_vectors": model.support_vectors.tolist(),
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def parse_model(text: str) -> SvmModel:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"bad model file: {exc.msg}")
    if payload.get("format") != MODEL_FORMAT:
        raise DataError(f"unsupported model format {payload.get('format')!r}")
    n_sv = len(payload["coefficients"])
    n_features = int(payload["n_features"])
    return SvmModel(pair=tuple(payload["pair"]),
                    support_vectors=np.array(payload["support_vectors"],
                                             dtype=float).reshape(n_sv, n_features),
                    coefficients=np.array(payload["coefficients"], dtype=float),
                    bias=float(payload["bias"]),
                    gamma=float(payload["gamma"]),
                    C=float(payload["C"]))


def save_model(path, model: SvmModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_model(model))


def load_model(path) -> SvmModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
