"""Process tomography: plan generation, execution, reconstruction, projection.

The pipeline mirrors how one characterizes a gate on hardware:

1. prepare each qubit in one of {|0>, |1>, |+>, |+i>} (informationally
   complete product set),
2. measure every qubit in each of the X/Y/Z bases (all outcomes kept),
3. run the target between preparation and basis rotation, collecting counts,
4. solve the Born-rule linear system for the Choi matrix by least squares
   over a Hermitian operator basis,
5. optionally project the estimate onto the CPTP set (Dykstra-corrected
   alternating projections between the PSD cone and the trace-preserving
   affine subspace).

Per-job RNG seeds derive from ``SeedSequence((base_seed, job_index))`` so
jobs are independent and insensitive to execution order.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .channels import ChoiMatrix, choi_from_unitary, pauli_basis
from .gates import Circuit, GateApplication, circuit_unitary, ga, to_native
from .linalg import dagger, frobenius, kron_all, partial_trace
from .metrics import FidelityReport, fidelity_report
from .noise import NoiseModel
from .simulator import (
    CountsTable,
    apply_measure_noise,
    measure_probabilities,
    sample_counts,
    simulate,
)

_C = np.complex128

PREP_TOKENS = ("0", "1", "+", "i")
SETTING_TOKENS = ("X", "Y", "Z")

_KETS = {
    "0": np.array([1, 0], dtype=_C),
    "1": np.array([0, 1], dtype=_C),
    "+": np.array([1, 1], dtype=_C) / math.sqrt(2),
    "i": np.array([1, 1j], dtype=_C) / math.sqrt(2),
}

_MEAS_ROT = {
    "Z": np.eye(2, dtype=_C),
    "X": np.array([[1, 1], [1, -1]], dtype=_C) / math.sqrt(2),
    "Y": (np.array([[1, 1], [1, -1]], dtype=_C) / math.sqrt(2)) @ np.diag([1, -1j]),
}


@dataclass(frozen=True)
class TomographyPlan:
    """Full factorial preparation x measurement schedule."""

    num_qubits: int
    preparations: tuple[str, ...]
    settings: tuple[str, ...]
    shots: int

    @property
    def num_jobs(self) -> int:
        return len(self.preparations) * len(self.settings)

    def jobs(self):
        """Canonical job order: preparation-major, setting-minor."""
        for prep in self.preparations:
            for setting in self.settings:
                yield prep, setting


def build_plan(num_qubits: int, shots: int = 4000) -> TomographyPlan:
    """All 4^K product preparations crossed with all 3^K Pauli settings."""
    if num_qubits < 1:
        raise ValueError("num_qubits must be at least 1")
    preps = tuple("".join(p) for p in itertools.product(PREP_TOKENS, repeat=num_qubits))
    settings = tuple("".join(s) for s in itertools.product(SETTING_TOKENS, repeat=num_qubits))
    return TomographyPlan(num_qubits, preps, settings, shots)


def prep_circuit(label: str, num_qubits: int | None = None) -> Circuit:
    """Circuit preparing the labeled product state from |0...0>.

    Tokens per qubit: '0' nothing, '1' an X gate, '+' a Hadamard,
    'i' Hadamard then Ph(pi/2) (the +1 eigenstate of Y).
    """
    num_qubits = num_qubits or len(label)
    gates: list[GateApplication] = []
    for q, token in enumerate(label):
        if token == "0":
            continue
        if token == "1":
            gates.append(ga("X", q))
        elif token == "+":
            gates.append(ga("H", q))
        elif token == "i":
            gates.append(ga("H", q))
            gates.append(ga("Ph", q, math.pi / 2))
        else:
            raise ValueError(f"unknown preparation token {token!r}")
    return Circuit(num_qubits, tuple(gates))


def prep_density(label: str) -> np.ndarray:
    """Density matrix of the labeled product state (closed form)."""
    kets = [_KETS[t] for t in label]
    psi = kets[0]
    for k in kets[1:]:
        psi = np.kron(psi, k)
    return np.outer(psi, psi.conj())


def measurement_circuit(setting: str, num_qubits: int | None = None) -> Circuit:
    """Basis-change circuit rotating the setting into the computational frame."""
    num_qubits = num_qubits or len(setting)
    gates: list[GateApplication] = []
    for q, basis in enumerate(setting.upper()):
        if basis == "Z":
            continue
        if basis == "X":
            gates.append(ga("H", q))
        elif basis == "Y":
            gates.append(ga("Ph", q, -math.pi / 2))
            gates.append(ga("H", q))
        else:
            raise ValueError(f"unknown measurement basis {basis!r}")
    return Circuit(num_qubits, tuple(gates))


def outcome_projector(setting: str, outcome: int) -> np.ndarray:
    """Projector (in the unrotated frame) for one outcome of a setting."""
    mats = []
    num_qubits = len(setting)
    for q, basis in enumerate(setting.upper()):
        r = _MEAS_ROT[basis]
        bit = (outcome >> (num_qubits - 1 - q)) & 1
        e = np.zeros((2, 2), dtype=_C)
        e[bit, bit] = 1.0
        mats.append(dagger(r) @ e @ r)
    return kron_all(mats)


@dataclass(frozen=True)
class TomographyDataset:
    """Frequencies (and raw counts when sampled) for every plan job."""

    plan: TomographyPlan
    frequencies: dict[tuple[str, str], np.ndarray]
    counts: dict[tuple[str, str], CountsTable] | None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        missing = [key for key in self.plan.jobs() if key not in self.frequencies]
        if missing:
            raise ValueError(f"dataset is missing {len(missing)} plan job(s), e.g. {missing[0]}")

    def to_dict(self) -> dict:
        jobs = []
        for prep, setting in self.plan.jobs():
            entry: dict = {"prep": prep, "setting": setting}
            if self.counts is not None:
                entry["counts"] = self.counts[(prep, setting)].to_dict()
            else:
                entry["frequencies"] = [float(f) for f in self.frequencies[(prep, setting)]]
            jobs.append(entry)
        return {
            "num_qubits": self.plan.num_qubits,
            "shots": self.plan.shots,
            "metadata": self.metadata,
            "jobs": jobs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TomographyDataset":
        plan = build_plan(int(d["num_qubits"]), int(d["shots"]))
        freqs: dict[tuple[str, str], np.ndarray] = {}
        counts: dict[tuple[str, str], CountsTable] | None = None
        jobs = {(j["prep"], j["setting"]): j for j in d["jobs"]}
        for key in plan.jobs():
            job = jobs[key]
            if "counts" in job:
                tab = CountsTable.from_dict(job["counts"])
                if counts is None:
                    counts = {}
                counts[key] = tab
                freqs[key] = tab.as_vector(plan.num_qubits) / tab.shots
            else:
                freqs[key] = np.asarray(job["frequencies"], dtype=float)
        return cls(plan, freqs, counts, dict(d.get("metadata", {})))


def execute_plan(
    plan: TomographyPlan,
    target: Circuit,
    noise: NoiseModel | None = None,
    seed: int = 0,
    exact: bool = False,
) -> TomographyDataset:
    """Simulate every (preparation, setting) job of the plan.

    With noise, the composed circuit (preparation + target + basis change)
    is lowered to the native gate set so calibrated per-gate noise applies,
    readout decay acts before sampling, and counts pass through the
    confusion matrices.  ``exact=True`` records exact outcome probabilities
    instead of sampled counts.
    """
    if target.num_qubits != plan.num_qubits:
        raise ValueError("target width does not match the plan")
    freqs: dict[tuple[str, str], np.ndarray] = {}
    counts: dict[tuple[str, str], CountsTable] | None = None if exact else {}
    confusion = noise.confusion_for(plan.num_qubits) if noise is not None else None
    for job_index, (prep, setting) in enumerate(plan.jobs()):
        circ = prep_circuit(prep, plan.num_qubits).extended(
            target, measurement_circuit(setting, plan.num_qubits)
        )
        if noise is not None:
            circ = to_native(circ)
        rho = simulate(circ, noise)
        rho = apply_measure_noise(rho, noise, plan.num_qubits)
        probs = measure_probabilities(rho, "Z" * plan.num_qubits)
        if exact:
            if confusion is not None:
                probs = kron_all(confusion).real @ probs
            freqs[(prep, setting)] = probs
        else:
            tab = sample_counts(
                probs,
                plan.shots,
                np.random.SeedSequence((seed, job_index)),
                confusion=confusion,
            )
            counts[(prep, setting)] = tab
            freqs[(prep, setting)] = tab.as_vector(plan.num_qubits) / plan.shots
    metadata = {
        "seed": seed,
        "exact": exact,
        "noise": noise.label if noise is not None else None,
    }
    return TomographyDataset(plan, freqs, counts, metadata)


# ---------------------------------------------------------------------------
# Linear-inversion reconstruction
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _design(
    preparations: tuple[str, ...], settings: tuple[str, ...], num_qubits: int
) -> tuple[np.ndarray, np.ndarray]:
    """Design matrix A and Hermitian basis stack B for the Born-rule system.

    Row order follows the plan (preparation-major, then setting, then
    outcome).  ``A[r, a] = Tr[(prep^T (x) projector) B_a]`` with ``B_a`` the
    Pauli operators on 2K wires scaled to an orthonormal Hermitian basis, so
    any least-squares solution is Hermitian by construction.
    """
    d = 2**num_qubits
    basis = pauli_basis(2 * num_qubits)
    bstack = np.stack(basis.operators).astype(_C) / d  # orthonormal: Tr(BaBb) = delta
    vb = bstack.reshape(len(basis.operators), -1)  # rows vec(B_a)
    rows = []
    for prep in preparations:
        rho_t = prep_density(prep).T
        for setting in settings:
            for outcome in range(d):
                op = np.kron(rho_t, outcome_projector(setting, outcome))
                rows.append(op.T.reshape(-1))  # vec(op^T) . vec(B) = Tr(op B)
    a = (np.stack(rows) @ vb.T).real
    return a, bstack


def linear_inversion(dataset: TomographyDataset) -> ChoiMatrix:
    """Least-squares Choi estimate from measured frequencies.

    Exact probabilities recover the true Choi matrix to solver precision;
    finite-shot input yields a Hermitian but possibly non-PSD estimate.
    Raises if the plan's design matrix is rank deficient (the plan does not
    span the operator space).
    """
    plan = dataset.plan
    d = 2**plan.num_qubits
    a, bstack = _design(plan.preparations, plan.settings, plan.num_qubits)
    f = np.concatenate([dataset.frequencies[key] for key in plan.jobs()])
    x, _, rank, _ = np.linalg.lstsq(a, f, rcond=None)
    if rank < d**4:
        raise ValueError(
            f"design matrix rank {rank} < {d**4}: plan is not informationally complete"
        )
    c = np.tensordot(x, bstack, axes=1)
    return ChoiMatrix(d, d, c)


# ---------------------------------------------------------------------------
# CPTP projection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionResult:
    choi: ChoiMatrix
    converged: bool
    iterations: int
    delta: float


def _project_tp(m: np.ndarray, d: int) -> np.ndarray:
    """Orthogonal projection onto the affine subspace Tr_out C = I."""
    tr_out = partial_trace(m, d, d, keep="a")
    return m + np.kron((np.eye(d) - tr_out) / d, np.eye(d, dtype=_C))


def project_cptp(raw: ChoiMatrix, tol: float = 1e-10, max_iter: int = 2000) -> ProjectionResult:
    """Nearest-CPTP projection by Dykstra-corrected alternating projections.

    Alternates the trace-preserving affine projection with eigenvalue
    clipping onto the PSD cone (the Dykstra correction rides on the cone
    step).  Stops when successive iterates differ by less than ``tol`` in
    Frobenius norm; hitting ``max_iter`` returns the best iterate flagged
    as non-converged.
    """
    d = raw.dim_in
    c = 0.5 * (raw.matrix + dagger(raw.matrix))
    correction = np.zeros_like(c)
    delta = np.inf
    for iteration in range(1, max_iter + 1):
        prev = c
        c = _project_tp(c, d)
        y = c + correction
        y = 0.5 * (y + dagger(y))
        w, v = np.linalg.eigh(y)
        c_psd = (v * np.clip(w, 0.0, None)) @ dagger(v)
        correction = y - c_psd
        c = c_psd
        delta = frobenius(c - prev)
        if delta < tol:
            return ProjectionResult(ChoiMatrix(d, d, c), True, iteration, delta)
    return ProjectionResult(ChoiMatrix(d, d, c), False, max_iter, delta)


# ---------------------------------------------------------------------------
# End-to-end pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReconstructionOptions:
    method: str = "linear_inversion_then_cptp"  # or "linear_inversion"
    cptp_tol: float = 1e-10
    max_iterations: int = 2000

    def __post_init__(self):
        if self.method not in ("linear_inversion", "linear_inversion_then_cptp"):
            raise ValueError(f"unknown reconstruction method {self.method!r}")
        if self.cptp_tol <= 0:
            raise ValueError("cptp_tol must be positive")


@dataclass(frozen=True)
class QptResult:
    choi: ChoiMatrix
    raw_choi: ChoiMatrix
    ideal_choi: ChoiMatrix
    report: FidelityReport
    dataset: TomographyDataset
    converged: bool

    def report_dict(self, shots: int | None = None, seed: int | None = None) -> dict:
        out = self.report.to_dict()
        out["converged"] = self.converged
        if shots is not None:
            out["shots"] = shots
        if seed is not None:
            out["seed"] = seed
        return out


def qpt(
    target: Circuit,
    noise: NoiseModel | None = None,
    shots: int = 4000,
    seed: int = 0,
    options: ReconstructionOptions | None = None,
    exact: bool = False,
) -> QptResult:
    """Full tomography of a circuit: plan, execute, invert, project, score.

    The fidelity in the report compares the estimate against the Choi
    matrix of the target's ideal unitary.
    """
    options = options or ReconstructionOptions()
    plan = build_plan(target.num_qubits, shots)
    dataset = execute_plan(plan, target, noise=noise, seed=seed, exact=exact)
    raw = linear_inversion(dataset)
    if options.method == "linear_inversion_then_cptp":
        proj = project_cptp(raw, tol=options.cptp_tol, max_iter=options.max_iterations)
        choi, converged = proj.choi, proj.converged
    else:
        choi, converged = raw, True
    ideal = choi_from_unitary(circuit_unitary(target))
    report = fidelity_report(choi, ideal)
    return QptResult(choi, raw, ideal, report, dataset, converged)
