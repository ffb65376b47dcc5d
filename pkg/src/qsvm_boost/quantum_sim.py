"""Dense statevector simulation of Pauli feature-map circuits.

A feature map encodes a classical vector ``x`` as the quantum state produced
by ``reps`` repetitions of [Hadamard layer, then one Pauli rotation
``exp(i * theta * P)`` per term], applied to |0...0>. Rotation angles are
``theta = alpha * phi_S(x)`` where ``phi_S`` is the registered data map for
the subset S of qubits the term acts on.

Conventions (fixed; the simulator and the dense oracle must share them):
  - qubit 0 is the least-significant bit of the amplitude index
  - letter i of a Pauli string acts on qubit i
  - a rotation term applies exp(i*theta*P) = cos(theta)*I + i*sin(theta)*P
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 12
MAX_ORACLE_QUBITS = 6

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, letter i acting on qubit i."""

    letters: str

    def __post_init__(self):
        if not self.letters:
            raise ValueError("Pauli string must not be empty")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)} in {self.letters!r}")
        if set(self.letters) == {"I"}:
            raise ValueError("Pauli string needs at least one non-identity letter")

    @property
    def support(self) -> tuple[int, ...]:
        """Qubit indices with a non-identity letter."""
        return tuple(q for q, c in enumerate(self.letters) if c != "I")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


def as_pauli_string(p: PauliString | str) -> PauliString:
    return p if isinstance(p, PauliString) else PauliString(p)


@dataclass(frozen=True, eq=False)
class Statevector:
    """Normalized vector of 2^n complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or amps.size < 2 or amps.size & (amps.size - 1):
            raise ValueError(f"amplitude count {amps.size} is not 2^n for n >= 1")
        norm = np.linalg.norm(amps)
        if abs(norm * norm - 1.0) > _NORM_TOL:
            raise ValueError(f"statevector is not normalized (|psi|^2 = {norm * norm!r})")

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1


def havlicek_data_map(subset: tuple[int, ...], x: np.ndarray) -> float:
    """x_i for singleton subsets, (pi - x_i)(pi - x_j) for pairs."""
    if len(subset) == 1:
        return float(x[subset[0]])
    if len(subset) == 2:
        i, j = subset
        return float((math.pi - x[i]) * (math.pi - x[j]))
    raise ValueError(f"data map supports subsets of size 1 or 2, got {len(subset)}")


DATA_MAPS = {"havlicek-default": havlicek_data_map}


def _expand_label(label: str, n_qubits: int) -> list[PauliString]:
    """Place a k-letter label on every ascending k-subset of qubits.

    A single letter therefore means that rotation on each qubit, and a pair
    (e.g. "ZZ") means the two-qubit string on every qubit pair.
    """
    k = len(label)
    out = []
    for qubits in itertools.combinations(range(n_qubits), k):
        letters = ["I"] * n_qubits
        for letter, q in zip(label, qubits):
            letters[q] = letter
        out.append(PauliString("".join(letters)))
    return out


@dataclass(frozen=True)
class FeatureMapSpec:
    """Pauli menu, repetition count and rotation factor defining one feature map.

    ``labels`` holds the menu form ("Z" = one rotation per qubit, "ZZ" = the
    two-qubit string on each pair); the expanded full-length strings are
    available as :attr:`paulis`.
    """

    n_qubits: int
    labels: tuple[str, ...]
    reps: int = 2
    alpha: float = 1.0
    data_map_id: str = "havlicek-default"

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        if self.reps < 1:
            raise ValueError("reps must be a positive integer")
        if not self.labels:
            raise ValueError("feature map needs at least one Pauli label")
        for label in self.labels:
            if not 1 <= len(label) <= self.n_qubits:
                raise ValueError(f"label {label!r} does not fit on {self.n_qubits} qubits")
            PauliString(label.ljust(self.n_qubits, "I"))  # letter validation
        if self.data_map_id not in DATA_MAPS:
            raise ValueError(f"unknown data map {self.data_map_id!r}")

    @property
    def paulis(self) -> tuple[PauliString, ...]:
        """Expanded full-length Pauli strings, in circuit order."""
        return tuple(p for label in self.labels for p in _expand_label(label, self.n_qubits))

    def terms(self) -> list[tuple[PauliString, tuple[int, ...]]]:
        """(Pauli string, acted-on subset) pairs, in circuit order."""
        return [(p, p.support) for p in self.paulis]

    def canonical(self) -> str:
        """Canonical text form, e.g. ``paulis=Z,ZZ;reps=2;alpha=1.0;map=havlicek-default``."""
        return (
            f"paulis={','.join(self.labels)};reps={self.reps};"
            f"alpha={self.alpha!r};map={self.data_map_id}"
        )


def parse_feature_map(text: str, n_qubits: int) -> FeatureMapSpec:
    """Parse the canonical text form back into a spec."""
    fields: dict[str, str] = {}
    for part in text.strip().split(";"):
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"malformed feature-map field {part!r}")
        fields[key.strip()] = value.strip()
    if "paulis" not in fields:
        raise ValueError(f"feature-map text missing paulis= field: {text!r}")
    return FeatureMapSpec(
        n_qubits=n_qubits,
        labels=tuple(fields["paulis"].split(",")),
        reps=int(fields.get("reps", 2)),
        alpha=float(fields.get("alpha", 1.0)),
        data_map_id=fields.get("map", "havlicek-default"),
    )


# --- statevector kernels (batched over samples; shape (m, 2^n)) ---

def _hadamard_all_batch(psi: np.ndarray) -> np.ndarray:
    m, dim = psi.shape
    n = dim.bit_length() - 1
    t = psi.reshape((m,) + (2,) * n)
    for ax in range(1, n + 1):
        t = np.moveaxis(np.moveaxis(t, ax, -1) @ _HADAMARD, -1, ax)
    return t.reshape(m, dim)


def _apply_pauli_batch(psi: np.ndarray, letters: str) -> np.ndarray:
    """Return P|psi> for each row of psi. Qubit q lives on tensor axis n-q."""
    m, dim = psi.shape
    n = len(letters)
    t = psi.reshape((m,) + (2,) * n).copy()
    for q, letter in enumerate(letters):
        if letter == "I":
            continue
        ax = 1 + (n - 1 - q)
        lo = tuple(0 if a == ax else slice(None) for a in range(n + 1))
        hi = tuple(1 if a == ax else slice(None) for a in range(n + 1))
        if letter == "Z":
            t[hi] *= -1
        else:
            t = np.flip(t, axis=ax).copy()
            if letter == "Y":
                t[lo] *= -1j
                t[hi] *= 1j
    return t.reshape(m, dim)


def _rotate_batch(psi: np.ndarray, p: PauliString, thetas: np.ndarray) -> np.ndarray:
    flipped = _apply_pauli_batch(psi, p.letters)
    c = np.cos(thetas)[:, None]
    s = np.sin(thetas)[:, None]
    return c * psi + 1j * s * flipped


# --- public operations ---

def zero_state(n: int) -> Statevector:
    """|0...0> on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return Statevector(amps)


def apply_hadamard_all(state: Statevector) -> Statevector:
    """Apply a Hadamard to every qubit."""
    return Statevector(_hadamard_all_batch(state.amplitudes[None, :])[0])


def apply_pauli_rotation(state: Statevector, p: PauliString | str, theta: float) -> Statevector:
    """Apply exp(i*theta*P); equals cos(theta)|psi> + i sin(theta) P|psi> since P^2 = I."""
    p = as_pauli_string(p)
    if len(p) != state.n_qubits:
        raise ValueError(f"Pauli string length {len(p)} != qubit count {state.n_qubits}")
    out = _rotate_batch(state.amplitudes[None, :], p, np.array([float(theta)]))
    return Statevector(out[0])


def feature_map_states(spec: FeatureMapSpec, X: np.ndarray) -> np.ndarray:
    """Encoded statevectors for each sample row, as an (m, 2^n) array."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != spec.n_qubits:
        raise ValueError(f"samples have {X.shape[1]} features, spec needs {spec.n_qubits}")
    data_map = DATA_MAPS[spec.data_map_id]
    terms = spec.terms()
    thetas = [
        spec.alpha * np.array([data_map(subset, x) for x in X]) for _, subset in terms
    ]
    psi = np.zeros((X.shape[0], 1 << spec.n_qubits), dtype=complex)
    psi[:, 0] = 1.0
    for _ in range(spec.reps):
        psi = _hadamard_all_batch(psi)
        for (p, _), theta in zip(terms, thetas):
            psi = _rotate_batch(psi, p, theta)
    return psi


def feature_map_state(spec: FeatureMapSpec, x: np.ndarray) -> Statevector:
    """Encoded state for one feature vector."""
    return Statevector(feature_map_states(spec, np.atleast_2d(x))[0])


# --- dense-matrix oracle (independent verification path) ---

def _kron_chain(mats: list[np.ndarray]) -> np.ndarray:
    """Tensor product with list index 0 as the least-significant factor."""
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(m, out)
    return out


def dense_pauli_matrix(p: PauliString | str) -> np.ndarray:
    p = as_pauli_string(p)
    return _kron_chain([PAULI_MATRICES[c] for c in p.letters])


def dense_term_unitary(p: PauliString | str, theta: float) -> np.ndarray:
    """exp(i*theta*P) as an explicit dense matrix, cos(theta)*I + i*sin(theta)*P."""
    p = as_pauli_string(p)
    dim = 1 << len(p)
    return math.cos(theta) * np.eye(dim, dtype=complex) + 1j * math.sin(theta) * dense_pauli_matrix(p)


def dense_unitary_oracle(spec: FeatureMapSpec, x: np.ndarray) -> np.ndarray:
    """Full circuit unitary as an explicit product of dense layer matrices.

    Intended as a verification oracle, so it is kept deliberately naive;
    limited to small qubit counts.
    """
    if spec.n_qubits > MAX_ORACLE_QUBITS:
        raise ValueError(f"dense oracle supports at most {MAX_ORACLE_QUBITS} qubits")
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.n_qubits,):
        raise ValueError(f"feature vector shape {x.shape} does not match {spec.n_qubits} qubits")
    data_map = DATA_MAPS[spec.data_map_id]
    h_layer = _kron_chain([_HADAMARD] * spec.n_qubits)
    u = np.eye(1 << spec.n_qubits, dtype=complex)
    for _ in range(spec.reps):
        u = h_layer @ u
        for p, subset in spec.terms():
            u = dense_term_unitary(p, spec.alpha * data_map(subset, x)) @ u
    return u
