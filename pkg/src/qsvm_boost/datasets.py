"""Seeded generators for XOR, moons and circles data, with splitting and scaling.

All generators use numpy's PCG64 generator with an explicit seed, so datasets
reproduce bit-exactly. Features are min-max scaled to [0, pi] with the scaler
fitted on the training split only; validation/test features may slightly
exceed that range.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

_SPLIT_RETRIES = 100
_SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Two-feature samples with binary labels."""

    X: np.ndarray
    y: np.ndarray
    kind: str
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=int)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValueError(f"expected (n, 2) features, got {X.shape}")
        if y.shape != (X.shape[0],):
            raise ValueError("labels must match sample count")
        if set(np.unique(y)) != {0, 1}:
            raise ValueError("dataset must contain both classes")

    def __len__(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class FeatureScaler:
    """Per-feature affine map sending the fitted min/max range onto [0, pi]."""

    mins: np.ndarray
    maxs: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "FeatureScaler":
        X = np.asarray(X, dtype=float)
        return cls(mins=X.min(axis=0), maxs=X.max(axis=0))

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = self.maxs - self.mins
        scale = np.where(span > 0, math.pi / np.where(span > 0, span, 1.0), 0.0)
        return (X - self.mins) * scale


@dataclass(frozen=True)
class SplitDataset:
    train: LabeledDataset
    val: LabeledDataset
    test: LabeledDataset
    scaler: FeatureScaler


def xor_label(x1: float, x2: float) -> int:
    """1 when the coordinates share a sign, 0 otherwise."""
    return 1 if x1 * x2 > 0 else 0


def make_xor(n: int, margin: float = 0.0, seed: int = 0) -> LabeledDataset:
    """Uniform points on [-1, 1]^2 outside the band |x1*x2| < margin."""
    if n < 4:
        raise ValueError("need at least 4 samples")
    if not 0.0 <= margin < 1.0:
        raise ValueError(f"margin must lie in [0, 1), got {margin}")
    rng = np.random.default_rng(seed)
    kept: list[np.ndarray] = []
    total = 0
    while total < n:
        batch = rng.uniform(-1.0, 1.0, size=(max(n, 64), 2))
        batch = batch[np.abs(batch[:, 0] * batch[:, 1]) >= margin]
        kept.append(batch)
        total += len(batch)
    X = np.concatenate(kept)[:n]
    y = (X[:, 0] * X[:, 1] > 0).astype(int)
    return LabeledDataset(X, y, kind="xor", seed=seed, params={"margin": margin})


def make_moons(n: int, noise_std: float = 0.2, seed: int = 0) -> LabeledDataset:
    """Two interleaving half-circles with additive Gaussian noise."""
    if n < 4:
        raise ValueError("need at least 4 samples")
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    n0 = n // 2
    n1 = n - n0
    t0 = np.linspace(0.0, math.pi, n0)
    t1 = np.linspace(0.0, math.pi, n1)
    X = np.concatenate(
        [
            np.column_stack([np.cos(t0), np.sin(t0)]),
            np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)]),
        ]
    )
    rng = np.random.default_rng(seed)
    X = X + rng.normal(0.0, noise_std, size=X.shape)
    y = np.concatenate([np.zeros(n0, dtype=int), np.ones(n1, dtype=int)])
    return LabeledDataset(X, y, kind="moons", seed=seed, params={"noise_std": noise_std})


def make_circles(
    n: int, factor: float = 0.5, noise_std: float = 0.1, seed: int = 0
) -> LabeledDataset:
    """Concentric circles: class 0 at radius 1, class 1 at radius ``factor``."""
    if n < 4:
        raise ValueError("need at least 4 samples")
    if not 0.0 < factor < 1.0:
        raise ValueError(f"factor must lie in (0, 1), got {factor}")
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    n0 = n // 2
    n1 = n - n0
    a0 = np.linspace(0.0, 2.0 * math.pi, n0, endpoint=False)
    a1 = np.linspace(0.0, 2.0 * math.pi, n1, endpoint=False)
    X = np.concatenate(
        [
            np.column_stack([np.cos(a0), np.sin(a0)]),
            factor * np.column_stack([np.cos(a1), np.sin(a1)]),
        ]
    )
    rng = np.random.default_rng(seed)
    X = X + rng.normal(0.0, noise_std, size=X.shape)
    y = np.concatenate([np.zeros(n0, dtype=int), np.ones(n1, dtype=int)])
    return LabeledDataset(
        X, y, kind="circles", seed=seed, params={"factor": factor, "noise_std": noise_std}
    )


GENERATORS = {"xor": make_xor, "moons": make_moons, "circles": make_circles}


def split_and_scale(
    data: LabeledDataset,
    sizes: tuple[int, int, int] = (50, 50, 50),
    seed: int = 0,
) -> SplitDataset:
    """Random disjoint train/val/test split plus min-max scaling to [0, pi].

    Reshuffles (bounded retries) until every split contains both classes.
    The scaler is fitted on the training split only.
    """
    n_train, n_val, n_test = sizes
    if min(sizes) < 1:
        raise ValueError("every split needs at least one sample")
    if n_train + n_val + n_test > len(data):
        raise ValueError(f"split sizes {sizes} exceed dataset size {len(data)}")
    rng = np.random.default_rng(seed)
    for _ in range(_SPLIT_RETRIES):
        perm = rng.permutation(len(data))
        idx = {
            "train": perm[:n_train],
            "val": perm[n_train : n_train + n_val],
            "test": perm[n_train + n_val : n_train + n_val + n_test],
        }
        if all(np.unique(data.y[ix]).size == 2 for ix in idx.values()):
            break
    else:
        raise ValueError("could not produce splits containing both classes")
    scaler = FeatureScaler.fit(data.X[idx["train"]])
    parts = {
        name: LabeledDataset(
            scaler.transform(data.X[ix]), data.y[ix], data.kind, data.seed, dict(data.params)
        )
        for name, ix in idx.items()
    }
    return SplitDataset(train=parts["train"], val=parts["val"], test=parts["test"], scaler=scaler)


def dataset_to_csv(path, data: LabeledDataset | SplitDataset) -> None:
    """Write x1,x2,y rows (plus a split column post-split) with a comment header."""
    if isinstance(data, SplitDataset):
        ref = data.train
        blocks = [(name, getattr(data, name)) for name in _SPLIT_NAMES]
    else:
        ref = data
        blocks = [(None, data)]
    with open(path, "w") as fh:
        fh.write(f"# kind={ref.kind} seed={ref.seed} params={json.dumps(ref.params, sort_keys=True)}\n")
        fh.write("x1,x2,y,split\n" if isinstance(data, SplitDataset) else "x1,x2,y\n")
        for name, part in blocks:
            suffix = f",{name}" if name else ""
            for (x1, x2), label in zip(part.X, part.y):
                fh.write(f"{float(x1)!r},{float(x2)!r},{int(label)}{suffix}\n")


def dataset_from_csv(path) -> LabeledDataset | SplitDataset:
    """Read a dataset written by :func:`dataset_to_csv`."""
    kind, seed, params = "unknown", 0, {}
    rows: list[tuple[float, float, int, str | None]] = []
    header: list[str] | None = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].strip().split(" ", 2):
                    key, _, value = token.partition("=")
                    if key == "kind":
                        kind = value
                    elif key == "seed":
                        seed = int(value)
                    elif key == "params":
                        params = json.loads(value)
                continue
            if header is None:
                header = line.split(",")
                continue
            parts = line.split(",")
            rows.append(
                (float(parts[0]), float(parts[1]), int(parts[2]),
                 parts[3] if len(parts) > 3 else None)
            )
    if not rows:
        raise ValueError(f"no data rows in {path}")
    X = np.array([[r[0], r[1]] for r in rows])
    y = np.array([r[2] for r in rows])
    if header is not None and "split" in header:
        parts = {}
        for name in _SPLIT_NAMES:
            mask = np.array([r[3] == name for r in rows])
            parts[name] = LabeledDataset(X[mask], y[mask], kind, seed, params)
        scaler = FeatureScaler.fit(parts["train"].X)
        return SplitDataset(parts["train"], parts["val"], parts["test"], scaler)
    return LabeledDataset(X, y, kind, seed, params)
