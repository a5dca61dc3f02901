"""scikit-learn style wrappers.

Rows of ``X`` are digit streams of equal length. The wrappers only cover the
operations that take data; everything else in the package is a closed-form
or exhaustive computation with no fitting step.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .beta_core import make_beta
from .dimension import MarkovMeasure, gth_stationary, local_dim_estimate, markov_entropy
from .errors import DomainError
from .measures import CylWalkMeasure
from .words import enumerate_admissible, stream_counters

__all__ = ["DigitFrequencyTransformer", "LocalDimensionEstimator", "MarkovMeasureEstimator"]


def _check_streams(X):
    X = check_array(X, dtype=np.int64, ensure_2d=True)
    if X.size and (X.min() < 0 or X.max() > 1):
        raise DomainError("digit streams must be binary")
    return X.astype(np.int8)


class DigitFrequencyTransformer(TransformerMixin, BaseEstimator):
    """Map each stream to ``(zero frequency, N0/n, N1/n)``."""

    def __init__(self, beta="11"):
        self.beta = beta

    def fit(self, X, y=None):
        X = _check_streams(X)
        self.beta_ = make_beta(self.beta)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "beta_")
        X = _check_streams(X)
        n = X.shape[1]
        out = np.empty((X.shape[0], 3))
        for i, row in enumerate(X):
            c0, c1, _ = stream_counters(row, self.beta_)
            out[i] = (1 - row.mean(), c0[-1] / n, c1[-1] / n)
        return out


class LocalDimensionEstimator(TransformerMixin, BaseEstimator):
    """Map each stream to its local-dimension ratios at ``depths``."""

    def __init__(self, beta="11", p=0.5, depths=(100,)):
        self.beta = beta
        self.p = p
        self.depths = depths

    def fit(self, X, y=None):
        X = _check_streams(X)
        self.measure_ = CylWalkMeasure(self.p, self.beta)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "measure_")
        X = _check_streams(X)
        return np.vstack([local_dim_estimate(row, self.measure_, list(self.depths)) for row in X])


class MarkovMeasureEstimator(BaseEstimator):
    """Maximum-likelihood Markov measure of a given order on admissible words.

    ``fit`` counts overlapping ``order + 1`` windows; ``score`` is the mean
    log-likelihood per transition under the fitted chain.
    """

    def __init__(self, beta="11", order=1):
        self.beta = beta
        self.order = order

    def fit(self, X, y=None):
        X = _check_streams(X)
        k = int(self.order)
        if X.shape[1] <= k:
            raise DomainError("streams must be longer than the order")
        b = make_beta(self.beta)
        states = tuple(str(w) for w in enumerate_admissible(b, k))
        idx = {s: i for i, s in enumerate(states)}
        allowed = {str(w) for w in enumerate_admissible(b, k + 1)}
        counts = np.zeros((len(states), len(states)))
        weights = 1 << np.arange(k, -1, -1)
        for row in X:
            windows = np.lib.stride_tricks.sliding_window_view(row, k + 1)
            codes, freq = np.unique(windows @ weights, return_counts=True)
            for code, c in zip(codes.tolist(), freq.tolist()):
                word = format(code, f"0{k + 1}b")
                if word not in allowed:
                    raise DomainError(f"window {word} is not admissible")
                counts[idx[word[:k]], idx[word[1:]]] += c
        totals = counts.sum(axis=1, keepdims=True)
        if np.any(totals == 0):
            raise DomainError("some admissible state never occurs; cannot estimate its row")
        trans = counts / totals
        pi = gth_stationary(trans.tolist())
        self.measure_ = MarkovMeasure(k, states, tuple(pi), tuple(tuple(r) for r in trans.tolist()))
        self.entropy_ = markov_entropy(self.measure_)
        self.n_features_in_ = X.shape[1]
        return self

    def score(self, X, y=None):
        check_is_fitted(self, "measure_")
        X = _check_streams(X)
        k = self.measure_.order
        total = 0.0
        count = 0
        for row in X:
            text = "".join("1" if d else "0" for d in row.tolist())
            for s in range(len(text) - k):
                prob = self.measure_.append_prob(text[s : s + k], text[s + k])
                total += math.log(prob) if prob else -math.inf
                count += 1
        return total / count

    def predict_proba(self, X):
        """Probability that each stream's next digit is 0."""
        check_is_fitted(self, "measure_")
        X = _check_streams(X)
        k = self.measure_.order
        out = []
        for row in X:
            u = "".join(str(int(d)) for d in row[-k:])
            p0 = self.measure_.append_prob(u, 0)
            out.append(float(p0))
        p0 = np.array(out)
        return np.column_stack([p0, 1 - p0])
