"""Noise models built from device-calibration records.

Calibration files carry per-qubit coherence times, readout bit-flip
probabilities, and per-pair CNOT error rates.  A point worth stating
loudly: the bit-flip columns (``p01``/``p10``) are probabilities (fractions),
not percents, even when a source table heads them with a percent sign; the
readout assignment error is consistent with ``(p01 + p10) / 2`` only under
that reading.

The model applied per gate is depolarizing (at the reported gate error)
composed after T1/T2 damping over the gate duration, plus a per-qubit
column-stochastic readout confusion matrix applied to measured bits.
Reported errors exist only for SX/X and CNOT; RZ and Ph are virtual
(zero duration, zero error).  Missing CNOT pairs fall back to the fleet
median error.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .channels import KrausSet, pauli_basis
from .linalg import kron_all

_C = np.complex128

# Fleet medians used when a calibration record lacks a value.
MEDIAN_CNOT_ERROR = 8.690e-3
MEDIAN_SX_ERROR = 2.860e-4

DEFAULT_DURATIONS_NS = {"SX": 35.0, "X": 35.0, "CNOT": 300.0}


@dataclass(frozen=True)
class QubitCalibration:
    """Per-qubit record; times in seconds, frequencies in Hz."""

    index: int
    t1: float
    t2: float
    frequency: float
    anharmonicity: float
    readout_err: float
    p_meas0_prep1: float  # zeta: P(measure 0 | prepared 1)
    p_meas1_prep0: float  # eta:  P(measure 1 | prepared 0)
    readout_length: float
    sx_error: float

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError(f"qubit {self.index}: coherence times must be positive")
        for name in ("readout_err", "p_meas0_prep1", "p_meas1_prep0", "sx_error"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"qubit {self.index}: {name}={p} outside [0, 1]")


@dataclass(frozen=True)
class CnotCalibration:
    control: int
    target: int
    error: float

    def __post_init__(self):
        if not 0.0 <= self.error <= 1.0:
            raise ValueError(f"CNOT({self.control},{self.target}) error outside [0, 1]")


@dataclass(frozen=True)
class DeviceCalibration:
    qubits: tuple[QubitCalibration, ...]
    cnot: tuple[CnotCalibration, ...]
    durations: dict[str, float] = field(default_factory=dict)  # gate name -> seconds

    def qubit(self, index: int) -> QubitCalibration:
        for q in self.qubits:
            if q.index == index:
                return q
        raise ValueError(f"calibration has no qubit {index}")

    def cnot_error(self, control: int, target: int) -> float:
        for c in self.cnot:
            if (c.control, c.target) == (control, target):
                return c.error
        for c in self.cnot:  # error rates are symmetric in practice
            if (c.control, c.target) == (target, control):
                return c.error
        return MEDIAN_CNOT_ERROR


def parse_calibration(source) -> DeviceCalibration:
    """Load a calibration record from a JSON file path or an already-parsed dict.

    Expected shape::

        {"qubits": [{"index": 0, "t1_us": ..., "t2_us": ..., "freq_ghz": ...,
                     "anharm_ghz": ..., "readout_err": ..., "p01": ...,
                     "p10": ..., "readout_ns": ..., "sx_error": ...}, ...],
         "cnot": [{"control": 0, "target": 1, "error": ...}, ...],
         "durations_ns": {"sx": 35, "cnot": 300}}

    ``p01`` is P(measure 0 | prepared 1), ``p10`` is P(measure 1 | prepared 0).
    Units are converted here (us -> s, GHz -> Hz, ns -> s).  ``sx_error`` may
    be omitted, in which case the fleet median is substituted.
    """
    if isinstance(source, dict):
        raw = source
    else:
        with open(source) as fh:
            raw = json.load(fh)
    try:
        qubits = []
        for row in raw["qubits"]:
            qubits.append(
                QubitCalibration(
                    index=int(row["index"]),
                    t1=float(row["t1_us"]) * 1e-6,
                    t2=float(row["t2_us"]) * 1e-6,
                    frequency=float(row["freq_ghz"]) * 1e9,
                    anharmonicity=float(row["anharm_ghz"]) * 1e9,
                    readout_err=float(row["readout_err"]),
                    p_meas0_prep1=float(row["p01"]),
                    p_meas1_prep0=float(row["p10"]),
                    readout_length=float(row["readout_ns"]) * 1e-9,
                    sx_error=float(row.get("sx_error", MEDIAN_SX_ERROR)),
                )
            )
        cnot = tuple(
            CnotCalibration(int(r["control"]), int(r["target"]), float(r["error"]))
            for r in raw.get("cnot", ())
        )
        durations = {
            name.upper(): float(ns) * 1e-9
            for name, ns in raw.get("durations_ns", {}).items()
        }
    except KeyError as exc:
        raise ValueError(f"calibration record missing field {exc}") from exc
    return DeviceCalibration(tuple(qubits), cnot, durations)


# ---------------------------------------------------------------------------
# Elementary channels
# ---------------------------------------------------------------------------


def damping_kraus(t1: float, t2: float, duration: float) -> KrausSet:
    """Single-qubit T1/T2 decay over ``duration`` seconds.

    Amplitude damping with ``gamma = 1 - exp(-duration/t1)`` composed with
    pure dephasing ``lam = 1 - exp(-2 duration (1/t2 - 1/(2 t1)))``; together
    these reproduce population decay by ``exp(-duration/t1)`` and coherence
    decay by ``exp(-duration/t2)``.  ``t2`` is clamped to ``2 t1`` (with a
    warning) since faster transverse decay is inconsistent with this
    decomposition.
    """
    if t1 <= 0:
        raise ValueError("t1 must be positive")
    if t2 <= 0:
        raise ValueError("t2 must be positive")
    if duration < 0:
        raise ValueError("duration must be non-negative")
    if duration == 0:
        return KrausSet((np.eye(2, dtype=_C),))
    if t2 > 2 * t1:
        warnings.warn(
            f"t2={t2:.4g}s exceeds 2*t1={2 * t1:.4g}s; clamping t2 to 2*t1",
            stacklevel=2,
        )
        t2 = 2 * t1
    gamma = 1.0 - np.exp(-duration / t1)
    lam = 1.0 - np.exp(-2.0 * duration * (1.0 / t2 - 1.0 / (2.0 * t1)))
    amp = (
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=_C),
        np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=_C),
    )
    deph = (
        np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=_C),
        np.array([[0, 0], [0, np.sqrt(lam)]], dtype=_C),
    )
    ops = [d @ a for d in deph for a in amp]
    ops = [k for k in ops if np.abs(k).max() > 0]
    return KrausSet(tuple(ops))


def depolarizing_kraus(p: float, num_qubits: int) -> KrausSet:
    """Uniform depolarizing channel ``E(rho) = (1-p) rho + p I/d``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability {p} outside [0, 1]")
    basis = pauli_basis(num_qubits)
    d = basis.dim
    ops = [np.sqrt(1.0 - p + p / d**2) * np.eye(d, dtype=_C)]
    if p > 0:
        coeff = np.sqrt(p) / d
        ops.extend(coeff * w for w in basis.operators[1:])
    return KrausSet(tuple(ops))


def compose_kraus(first: KrausSet, then: KrausSet) -> KrausSet:
    """Sequential composition: ``first`` acts on the state before ``then``."""
    return KrausSet(tuple(b @ a for b in then.operators for a in first.operators))


def confusion_matrix(p_meas0_prep1: float, p_meas1_prep0: float) -> np.ndarray:
    """Column-stochastic readout matrix; column j is the prepared bit j."""
    zeta, eta = p_meas0_prep1, p_meas1_prep0
    return np.array([[1.0 - eta, zeta], [eta, 1.0 - zeta]])


# ---------------------------------------------------------------------------
# Assembled model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate Kraus noise plus per-qubit readout confusion.

    ``gate_noise`` maps ``(gate name, qubit tuple)`` to the KrausSet applied
    after the ideal gate on those qubits.  The pseudo-gate name ``"measure"``
    keyed per qubit carries decay over the readout window; execution paths
    apply it right before sampling.  Gates without an entry are noiseless
    (RZ/Ph are virtual), which is why noisy pipelines lower circuits to the
    native gate set first.
    """

    gate_noise: dict[tuple[str, tuple[int, ...]], KrausSet]
    readout_confusion: dict[int, np.ndarray]
    gate_durations: dict[str, float]
    label: str = "calibrated"

    def kraus_for(self, name: str, qubits: tuple[int, ...]) -> KrausSet | None:
        return self.gate_noise.get((name, tuple(qubits)))

    def measure_kraus(self, qubit: int) -> KrausSet | None:
        return self.gate_noise.get(("measure", (qubit,)))

    def confusion_for(self, num_qubits: int) -> list[np.ndarray]:
        return [self.readout_confusion[q] for q in range(num_qubits)]


def noise_model_from_calibration(
    calib: DeviceCalibration,
    durations: dict[str, float] | None = None,
    num_qubits: int = 2,
    qubit_map: tuple[int, ...] | None = None,
    label: str = "calibrated",
) -> NoiseModel:
    """Assemble a NoiseModel for a ``num_qubits`` register.

    ``qubit_map[i]`` names the calibration qubit backing circuit qubit ``i``
    (defaults to the identity mapping).  ``durations`` override gate
    durations in seconds; otherwise the calibration file's values and the
    package defaults apply.  Measurement duration is each qubit's readout
    length.
    """
    if qubit_map is None:
        qubit_map = tuple(range(num_qubits))
    if len(qubit_map) != num_qubits:
        raise ValueError("qubit_map length must equal num_qubits")
    dur = {k: v * 1e-9 for k, v in DEFAULT_DURATIONS_NS.items()}
    dur.update(calib.durations)
    dur.update({k.upper(): float(v) for k, v in (durations or {}).items()})
    dur.setdefault("RZ", 0.0)
    dur.setdefault("PH", 0.0)

    gate_noise: dict[tuple[str, tuple[int, ...]], KrausSet] = {}
    confusion: dict[int, np.ndarray] = {}

    cals = [calib.qubit(phys) for phys in qubit_map]
    for q, qc in enumerate(cals):
        for name in ("SX", "X"):
            gate_noise[(name, (q,))] = compose_kraus(
                damping_kraus(qc.t1, qc.t2, dur[name]),
                depolarizing_kraus(qc.sx_error, 1),
            )
        gate_noise[("measure", (q,))] = damping_kraus(qc.t1, qc.t2, qc.readout_length)
        confusion[q] = confusion_matrix(qc.p_meas0_prep1, qc.p_meas1_prep0)

    for i, j in itertools.permutations(range(num_qubits), 2):
        err = calib.cnot_error(qubit_map[i], qubit_map[j])
        damp = KrausSet(
            tuple(
                kron_all([a, b])
                for a in damping_kraus(cals[i].t1, cals[i].t2, dur["CNOT"]).operators
                for b in damping_kraus(cals[j].t1, cals[j].t2, dur["CNOT"]).operators
            )
        )
        gate_noise[("CNOT", (i, j))] = compose_kraus(damp, depolarizing_kraus(err, 2))

    return NoiseModel(gate_noise, confusion, dur, label=label)
