"""Fidelity quantum kernel, classical baseline kernels, and Gram assembly.

The fidelity kernel is k(x, y) = |<phi(x)|phi(y)>|^2, the squared overlap of
the encoded statevectors. Per-sample states are computed once per Gram
assembly and inner products taken pairwise.
"""
from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass

import numpy as np

from .quantum_sim import FeatureMapSpec, feature_map_states


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Matrix of pairwise kernel values plus the producing kernel's identity."""

    values: np.ndarray
    spec_id: str

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def fidelity_kernel(spec: FeatureMapSpec, x: np.ndarray, y: np.ndarray) -> float:
    """Squared overlap of the encoded states of x and y; lies in [0, 1]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (spec.n_qubits,) or y.shape != (spec.n_qubits,):
        raise ValueError(f"feature vectors must have length {spec.n_qubits}")
    states = feature_map_states(spec, np.stack([x, y]))
    return float(abs(np.vdot(states[0], states[1])) ** 2)


def _mirror_upper(g: np.ndarray) -> np.ndarray:
    # exact symmetry: keep the upper triangle, mirror it below the diagonal
    return np.triu(g) + np.triu(g, 1).T


def gram_matrix(spec: FeatureMapSpec, X_a: np.ndarray, X_b: np.ndarray | None = None) -> GramMatrix:
    """Fidelity kernel between every row of X_a and X_b.

    With ``X_b=None`` the Gram of X_a against itself is returned, with the
    upper triangle computed and mirrored so the result is exactly symmetric.
    """
    X_a = np.atleast_2d(np.asarray(X_a, dtype=float))
    states_a = feature_map_states(spec, X_a)
    if X_b is None:
        overlaps = states_a @ states_a.conj().T
        values = _mirror_upper(np.abs(overlaps) ** 2)
    else:
        X_b = np.atleast_2d(np.asarray(X_b, dtype=float))
        states_b = feature_map_states(spec, X_b)
        values = np.abs(states_a @ states_b.conj().T) ** 2
    return GramMatrix(values=values, spec_id=spec.canonical())


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("feature vectors must have equal length")
    d = x - y
    return float(np.exp(-gamma * np.dot(d, d)))


def linear_kernel(x: np.ndarray, y: np.ndarray) -> float:
    """Dot product x . y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("feature vectors must have equal length")
    return float(np.dot(x, y))


def rbf_gram(X_a: np.ndarray, X_b: np.ndarray | None = None, *, gamma: float) -> GramMatrix:
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    X_a = np.atleast_2d(np.asarray(X_a, dtype=float))
    X_b2 = X_a if X_b is None else np.atleast_2d(np.asarray(X_b, dtype=float))
    sq = (
        np.sum(X_a**2, axis=1)[:, None]
        + np.sum(X_b2**2, axis=1)[None, :]
        - 2.0 * (X_a @ X_b2.T)
    )
    values = np.exp(-gamma * np.maximum(sq, 0.0))
    if X_b is None:
        values = _mirror_upper(values)
    return GramMatrix(values=values, spec_id=f"rbf;gamma={gamma!r}")


def linear_gram(X_a: np.ndarray, X_b: np.ndarray | None = None) -> GramMatrix:
    X_a = np.atleast_2d(np.asarray(X_a, dtype=float))
    X_b2 = X_a if X_b is None else np.atleast_2d(np.asarray(X_b, dtype=float))
    values = X_a @ X_b2.T
    if X_b is None:
        values = _mirror_upper(values)
    return GramMatrix(values=values, spec_id="linear")


def _digest(X: np.ndarray) -> str:
    X = np.ascontiguousarray(X)
    h = hashlib.sha1()
    h.update(str(X.shape).encode())
    h.update(str(X.dtype).encode())
    h.update(X.tobytes())
    return h.hexdigest()


class GramCache:
    """Memoizes Gram matrices, keyed on (kernel identity, dataset content hash).

    Grid search reuses the same (feature map, alpha) Gram across all C values
    and boosting rounds. Safe for concurrent read/insert of distinct keys;
    reads after a hit return the stored matrix unchanged.
    """

    def __init__(self):
        self._store: dict[tuple, GramMatrix] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._store)

    def _get(self, key: tuple, compute) -> GramMatrix:
        with self._lock:
            hit = self._store.get(key)
        if hit is not None:
            return hit
        value = compute()
        with self._lock:
            return self._store.setdefault(key, value)

    def fidelity(self, spec: FeatureMapSpec, X_a: np.ndarray, X_b: np.ndarray | None = None) -> GramMatrix:
        key = (spec.canonical(), _digest(X_a), None if X_b is None else _digest(X_b))
        return self._get(key, lambda: gram_matrix(spec, X_a, X_b))

    def rbf(self, X_a: np.ndarray, X_b: np.ndarray | None = None, *, gamma: float) -> GramMatrix:
        key = (f"rbf;gamma={gamma!r}", _digest(X_a), None if X_b is None else _digest(X_b))
        return self._get(key, lambda: rbf_gram(X_a, X_b, gamma=gamma))

    def linear(self, X_a: np.ndarray, X_b: np.ndarray | None = None) -> GramMatrix:
        key = ("linear", _digest(X_a), None if X_b is None else _digest(X_b))
        return self._get(key, lambda: linear_gram(X_a, X_b))


def export_gram_csv(gram: GramMatrix, path) -> None:
    """Write a Gram matrix as row-major CSV with a `# spec=` header line."""
    with open(path, "w") as fh:
        fh.write(f"# spec={gram.spec_id}\n")
        for row in np.atleast_2d(gram.values):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
