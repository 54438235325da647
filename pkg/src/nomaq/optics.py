"""Jones-calculus model of the all-optical amplitude-damping bench.

Polarization carries the qubit (|H> = |0>, |V> = |1>) and the output path
of the interferometer carries the reservoir. An H-polarized beam is rotated
to +45 deg by HWP1, split by PBS1 (H transmitted, V reflected), the
reflected arm passes HWP2 and the PZT phase, the transmitted arm a fixed
HWP3@0, and PBS2 recombines them into output paths 0 and 1.

Wave-plate angles are measured from the horizontal, except HWP2 whose
setting ``theta`` is read from the vertical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import JointState, check_p
from .qubit import DensityMatrix
from .tomography import TomographyRecord

H = np.array([1, 0], dtype=complex)
V = np.array([0, 1], dtype=complex)

# amplitude arrays inside the bench are indexed [polarization, path]
_T, _R = 0, 1  # interferometer arms: transmitted, reflected at PBS1


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]], dtype=complex)


def retarder(angle: float, delay: float) -> np.ndarray:
    """Linear retarder with fast axis at ``angle`` from horizontal."""
    return rotation(-angle) @ np.diag([1, np.exp(-1j * delay)]) @ rotation(angle)


def hwp(angle: float) -> np.ndarray:
    """Half-wave plate, [[cos 2a, sin 2a], [sin 2a, -cos 2a]]."""
    return retarder(angle, math.pi)


def qwp(angle: float) -> np.ndarray:
    return retarder(angle, math.pi / 2)


@dataclass(frozen=True)
class WavePlate:
    kind: str
    angle: float
    from_vertical: bool = False

    def __post_init__(self):
        if self.kind not in ("HWP", "QWP"):
            raise ValueError(f"unknown wave plate kind {self.kind!r}")
        if not math.isfinite(self.angle):
            raise ValueError("wave plate angle must be finite")

    @property
    def internal_angle(self) -> float:
        # from-vertical reading theta acts like pi/2 - theta from horizontal,
        # giving |V> -> sin(2 theta)|H> + cos(2 theta)|V> for a half-wave plate
        return math.pi / 2 - self.angle if self.from_vertical else self.angle

    @property
    def matrix(self) -> np.ndarray:
        return (hwp if self.kind == "HWP" else qwp)(self.internal_angle)


@dataclass(frozen=True)
class PhaseShifter:
    delta_phi: float

    @property
    def factor(self) -> complex:
        return complex(np.exp(1j * self.delta_phi))


@dataclass(frozen=True)
class BenchConfig:
    """Bench settings. ``theta`` is HWP2's angle from vertical, in radians."""

    theta: float = 0.0
    delta_phi: float = 0.0
    visibility: float = 0.98
    sigma: float = 0.015
    rng_seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.delta_phi)):
            raise ValueError("theta and delta_phi must be finite")
        if not (0.0 <= self.visibility <= 1.0):
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility!r}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"sigma must be finite and >= 0, got {self.sigma!r}")
        if int(self.rng_seed) != self.rng_seed or self.rng_seed < 0:
            raise ValueError(f"rng_seed must be a non-negative integer, got {self.rng_seed!r}")

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)


class JonesState(JointState):
    """Bench output over {H path0, V path0, H path1, V path1}."""

    @property
    def a_H0(self) -> complex:
        return self.amplitudes[0]

    @property
    def a_V0(self) -> complex:
        return self.amplitudes[1]

    @property
    def a_H1(self) -> complex:
        return self.amplitudes[2]

    @property
    def a_V1(self) -> complex:
        return self.amplitudes[3]


def theta_from_p(p: float) -> float:
    """HWP2 angle with sin(2 theta) = sqrt(1 - p); lies in [0, pi/4]."""
    return 0.5 * math.asin(math.sqrt(1.0 - check_p(p)))


def p_from_theta(theta: float) -> float:
    return math.cos(2 * theta) ** 2


def pbs_split(pol: np.ndarray) -> np.ndarray:
    """PBS1: H goes to the transmitted arm, V to the reflected arm (phase +1)."""
    amp = np.zeros((2, 2), dtype=complex)
    amp[0, _T] = pol[0]
    amp[1, _R] = pol[1]
    return amp


def pbs_combine(amp: np.ndarray) -> np.ndarray:
    """PBS2: permutation of the four modes onto output paths 0 and 1.

    (H, T) -> (H, 0), (V, R) -> (V, 0), (H, R) -> (H, 1), (V, T) -> (V, 1).
    """
    out = np.zeros((2, 2), dtype=complex)
    out[0, 0] = amp[0, _T]
    out[1, 0] = amp[1, _R]
    out[0, 1] = amp[0, _R]
    out[1, 1] = amp[1, _T]
    return out


PREP_PLATE = WavePlate("HWP", math.radians(22.5))
ARM_PLATE = WavePlate("HWP", 0.0)


def run_bench(config: BenchConfig) -> JonesState:
    """Propagate the prepared +45 deg beam through the damping interferometer."""
    pol = PREP_PLATE.matrix @ H
    amp = pbs_split(pol)
    # HWP3@0 only flips the sign of V, and no V reaches the transmitted arm
    amp[:, _T] = ARM_PLATE.matrix @ amp[:, _T]
    amp[:, _R] = WavePlate("HWP", config.theta, from_vertical=True).matrix @ amp[:, _R]
    amp[:, _R] *= PhaseShifter(config.delta_phi).factor
    out = pbs_combine(amp)
    return JonesState((out[0, 0], out[1, 0], out[0, 1], out[1, 1]))


def reduced_state(state: JointState) -> DensityMatrix:
    """Polarization state with the path traced out."""
    return state.reduced()


def _projector_state(plates: list[np.ndarray], port: np.ndarray) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for m in plates:
        u = m @ u
    return u.conj().T @ port


# analyzer plates in beam order before PBS3; its transmitted port is the
# first element of each basis pair
ANALYZERS = {
    "HV": [],
    "diag": [hwp(math.radians(22.5))],
    "circ": [qwp(0.0), hwp(math.radians(22.5))],
}


def analyzer_states() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    return {k: (_projector_state(p, H), _projector_state(p, V)) for k, p in ANALYZERS.items()}


def ideal_intensities(rho: DensityMatrix, visibility: float = 1.0) -> np.ndarray:
    """Normalized intensities (I_H, I_V, I_+, I_-, I_R, I_L) with rho_12 scaled by visibility."""
    m = DensityMatrix(rho.r11, rho.r22, visibility * rho.r12).matrix
    out = []
    for a, b in analyzer_states().values():
        out.append((a.conj() @ m @ a).real)
        out.append((b.conj() @ m @ b).real)
    return np.array(out)


def measure_tomography(state: JointState, config: BenchConfig) -> TomographyRecord:
    """Virtual three-basis polarization tomography with visibility loss and camera noise."""
    raw = ideal_intensities(reduced_state(state), config.visibility)
    if config.sigma > 0:
        rng = np.random.default_rng(config.rng_seed)
        raw = raw * (1 + config.sigma * rng.standard_normal(6))
    # negative readings are clipped before the pair renormalization so that
    # every pair still sums to one
    pairs = np.clip(raw.reshape(3, 2), 0.0, None)
    sums = pairs.sum(axis=1)
    norm = np.full((3, 2), 0.5)
    ok = sums > 0
    norm[ok] = np.clip(pairs[ok] / sums[ok, None], 0.0, 1.0)
    total = float(sums.mean())
    return TomographyRecord(*norm.ravel(), I_total=total if total > 0 else 1.0,
                            theta_deg=config.theta_deg, seed=config.rng_seed)
