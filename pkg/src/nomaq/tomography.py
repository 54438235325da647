"""Single-qubit polarization tomography: Stokes inversion and physical projection.

Basis pairs are {H, V}, {+, -} and {R, L} with |+-> = (|H> +- |V>)/sqrt(2)
and |R> = (|H> + i|V>)/sqrt(2), |L> = (|H> - i|V>)/sqrt(2), so that

    s_z = I_H - I_V,  s_x = I_+ - I_-,  s_y = I_R - I_L.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

from .coherence import coherence
from .qubit import BlochVector, DensityMatrix, from_bloch

PAIR_TOL = 1e-9
FIELDS = ("I_H", "I_V", "I_plus", "I_minus", "I_R", "I_L")


class MalformedRecordError(ValueError):
    pass


@dataclass(frozen=True)
class TomographyRecord:
    I_H: float
    I_V: float
    I_plus: float
    I_minus: float
    I_R: float
    I_L: float
    I_total: float = 1.0
    theta_deg: float | None = None
    seed: int | None = None

    def __post_init__(self):
        for name in FIELDS:
            object.__setattr__(self, name, float(getattr(self, name)))
            if not math.isfinite(getattr(self, name)):
                raise MalformedRecordError(f"{name} is not finite")
        if not (self.I_total > 0 and math.isfinite(self.I_total)):
            raise MalformedRecordError("I_total must be positive")

    @property
    def intensities(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in FIELDS)

    def check(self) -> None:
        """Raise :class:`MalformedRecordError` unless every basis pair is normalized."""
        v = self.intensities
        for name, x in zip(FIELDS, v):
            if not (-PAIR_TOL <= x <= 1 + PAIR_TOL):
                raise MalformedRecordError(f"{name} = {x!r} outside [0, 1]")
        for (a, b), label in zip(((0, 1), (2, 3), (4, 5)), ("H/V", "+/-", "R/L")):
            err = abs(v[a] + v[b] - 1)
            if err > PAIR_TOL:
                raise MalformedRecordError(f"{label} intensities sum to {v[a] + v[b]!r} (off by {err:.3g})")

    def to_dict(self) -> dict:
        d = {"theta_deg": self.theta_deg}
        d.update({f: getattr(self, f) for f in FIELDS})
        d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "TomographyRecord":
        try:
            vals = [float(d[f]) for f in FIELDS]
        except KeyError as e:
            raise MalformedRecordError(f"missing field {e.args[0]!r}") from None
        except (TypeError, ValueError) as e:
            raise MalformedRecordError(str(e)) from None
        theta = d.get("theta_deg")
        seed = d.get("seed")
        return cls(*vals, I_total=float(d.get("I_total", 1.0)),
                   theta_deg=None if theta in (None, "") else float(theta),
                   seed=None if seed in (None, "") else int(seed))


CSV_HEADER = ("theta_deg",) + FIELDS + ("seed",)


def records_to_csv(records) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_HEADER) + "\n")
    for r in records:
        row = r.to_dict()
        out.write(",".join("" if row[k] is None else (f"{row[k]:.17g}" if isinstance(row[k], float)
                                                     else str(row[k])) for k in CSV_HEADER))
        out.write("\n")
    return out.getvalue()


def records_from_csv(text: str) -> list[TomographyRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise MalformedRecordError("no records in CSV input")
    return [TomographyRecord.from_dict(r) for r in rows]


def parse_records(text: str) -> list[TomographyRecord]:
    """Read one or more records from JSON (object or list) or CSV text."""
    s = text.strip()
    if s.startswith("{") or s.startswith("["):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as e:
            raise MalformedRecordError(f"invalid JSON: {e}") from None
        items = data if isinstance(data, list) else [data]
        return [TomographyRecord.from_dict(x) for x in items]
    return records_from_csv(s)


def linear_inversion(rec: TomographyRecord) -> BlochVector:
    rec.check()
    return BlochVector(rec.I_plus - rec.I_minus, rec.I_R - rec.I_L, rec.I_H - rec.I_V)


def project_physical(b: BlochVector) -> tuple[DensityMatrix, bool]:
    """Nearest physical state: radial projection onto the Bloch ball.

    Returns the state and whether a projection was needed.
    """
    n = b.norm
    if n <= 1:
        return from_bloch(b), False
    return from_bloch(BlochVector(b.sx / n, b.sy / n, b.sz / n)), True


@dataclass(frozen=True)
class ReconstructionResult:
    rho: DensityMatrix
    raw_bloch: BlochVector
    projected: bool
    coherence: float

    def to_dict(self) -> dict:
        return {
            "rho": self.rho.to_dict(),
            "raw_bloch": asdict(self.raw_bloch),
            "projected": self.projected,
            "coherence": self.coherence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def reconstruct(rec: TomographyRecord) -> ReconstructionResult:
    raw = linear_inversion(rec)
    rho, projected = project_physical(raw)
    return ReconstructionResult(rho, raw, projected, coherence(rho))
