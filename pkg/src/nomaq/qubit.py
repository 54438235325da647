"""Single-qubit states: density matrices, Bloch vectors and their checks.

Basis convention used throughout the package: row/column 1 is |0> = |H>
(ground), row/column 2 is |1> = |V> (excited).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class InvalidStateError(ValueError):
    """Raised when a matrix or vector does not describe a physical qubit state."""


@dataclass(frozen=True)
class BlochVector:
    sx: float
    sy: float
    sz: float

    def __post_init__(self):
        for v in (self.sx, self.sy, self.sz):
            if not math.isfinite(v):
                raise InvalidStateError(f"non-finite Bloch component {v!r}")

    @property
    def norm(self) -> float:
        return math.sqrt(self.sx**2 + self.sy**2 + self.sz**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive 2x2 matrix stored by its free entries.

    ``r12`` is the upper off-diagonal element; ``r21`` is its conjugate by
    construction so Hermiticity cannot be violated.
    """

    r11: float
    r22: float
    r12: complex

    def __post_init__(self):
        object.__setattr__(self, "r11", float(self.r11))
        object.__setattr__(self, "r22", float(self.r22))
        object.__setattr__(self, "r12", complex(self.r12))
        if not all(math.isfinite(v) for v in (self.r11, self.r22, self.r12.real, self.r12.imag)):
            raise InvalidStateError("density matrix entries must be finite")
        report = validate(self.matrix)
        if not report.ok:
            raise InvalidStateError(str(report))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.r11, self.r12], [self.r12.conjugate(), self.r22]], dtype=complex)

    @property
    def purity(self) -> float:
        return self.r11**2 + self.r22**2 + 2 * abs(self.r12) ** 2

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix":
        """Build from a 2x2 array; tiny Hermiticity defects are averaged away."""
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidStateError(f"expected a 2x2 matrix, got shape {m.shape}")
        herm = abs(m[1, 0] - np.conj(m[0, 1]))
        if herm > TOL or abs(m[0, 0].imag) > TOL or abs(m[1, 1].imag) > TOL:
            raise InvalidStateError(f"matrix is not Hermitian (violation {herm:.3g})")
        r12 = 0.5 * (m[0, 1] + np.conj(m[1, 0]))
        return cls(m[0, 0].real, m[1, 1].real, r12)

    def to_dict(self) -> dict:
        return {"r11": self.r11, "r22": self.r22, "r12_re": self.r12.real, "r12_im": self.r12.imag}

    @classmethod
    def from_dict(cls, d: dict) -> "DensityMatrix":
        return cls(d["r11"], d["r22"], complex(d["r12_re"], d["r12_im"]))

    def to_json(self) -> str:
        # json renders floats with repr(), the shortest round-trippable form
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "DensityMatrix":
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True)
class ValidationReport:
    hermiticity: float
    trace: float
    psd: float
    tol: float = TOL

    @property
    def hermitian_ok(self) -> bool:
        return self.hermiticity <= self.tol

    @property
    def trace_ok(self) -> bool:
        return self.trace <= self.tol

    @property
    def psd_ok(self) -> bool:
        return self.psd <= self.tol

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok

    def __str__(self) -> str:
        def line(name, ok, v):
            return f"{name}: {'pass' if ok else 'FAIL'} (violation {v:.3g})"

        return "; ".join([
            line("hermitian", self.hermitian_ok, self.hermiticity),
            line("unit trace", self.trace_ok, self.trace),
            line("positive semidefinite", self.psd_ok, self.psd),
        ])


def validate(rho) -> ValidationReport:
    """Check the density-matrix invariants of any 2x2 complex matrix.

    Each field of the report is a violation magnitude (0 means satisfied).
    The PSD violation is the largest of -det and -diagonal entries.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    herm = max(abs(m[1, 0] - np.conj(m[0, 1])), abs(m[0, 0].imag), abs(m[1, 1].imag))
    trace = abs(m[0, 0].real + m[1, 1].real - 1.0)
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    psd = max(0.0, -det, -m[0, 0].real, -m[1, 1].real)
    return ValidationReport(float(herm), float(trace), float(psd))


def from_bloch(b: BlochVector) -> DensityMatrix:
    if b.norm > 1 + TOL:
        raise InvalidStateError(f"Bloch vector length {b.norm:.15g} exceeds 1")
    return DensityMatrix(0.5 * (1 + b.sz), 0.5 * (1 - b.sz), 0.5 * complex(b.sx, -b.sy))


def to_bloch(rho: DensityMatrix) -> BlochVector:
    return BlochVector(2 * rho.r12.real, -2 * rho.r12.imag, rho.r11 - rho.r22)


def pure_state(amp0: complex, amp1: complex) -> DensityMatrix:
    v = np.array([amp0, amp1], dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise InvalidStateError("zero state vector")
    v = v / n
    return DensityMatrix.from_matrix(np.outer(v, v.conj()))


GROUND = DensityMatrix(1.0, 0.0, 0.0)
EXCITED = DensityMatrix(0.0, 1.0, 0.0)
PLUS = DensityMatrix(0.5, 0.5, 0.5)
MAXIMALLY_MIXED = DensityMatrix(0.5, 0.5, 0.0)
