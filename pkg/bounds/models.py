import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from linalg import as_matrix


LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixSet:
    """Finite set {A_1, ..., A_m} of real n x n matrices."""

    matrices: Tuple[np.ndarray, ...]
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if len(self.matrices) == 0:
            raise ValueError("a matrix set needs at least one matrix")
        mats = tuple(as_matrix(A, square=True, name=f"A{i}") for i, A in enumerate(self.matrices, start=1))
        n = mats[0].shape[0]
        for i, A in enumerate(mats, start=1):
            if A.shape[0] != n:
                raise ValueError(f"A{i} is {A.shape[0]}x{A.shape[0]}, expected {n}x{n}")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def of(cls, *matrices: Sequence, name: Optional[str] = None) -> "MatrixSet":
        return cls(tuple(np.asarray(A, dtype=float) for A in matrices), name=name)

    @property
    def n(self) -> int:
        return int(self.matrices[0].shape[0])

    @property
    def m(self) -> int:
        return len(self.matrices)

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.matrices)

    def scaled(self, factor: float) -> "MatrixSet":
        return MatrixSet(tuple(factor * A for A in self.matrices), name=self.name)

    def lifted(self, d: int) -> "MatrixSet":
        """{A_1^[d], ..., A_m^[d]}."""
        from symalg import induced_matrix

        label = f"{self.name}^[{d}]" if self.name else None
        return MatrixSet(tuple(induced_matrix(A, d) for A in self.matrices), name=label)


class Method(str, Enum):
    LOWER = "lower_products"
    SOS = "sos"
    CQ = "cq"
    SR = "sr"


METHOD_ORDER = (Method.LOWER, Method.SOS, Method.CQ, Method.SR)


@dataclass
class BoundReport:
    """One computed bound: lower_products is a lower bound, the others upper bounds."""

    method: Method
    value: float
    two_d: Optional[int] = None
    bracket: Optional[Tuple[float, float]] = None
    quality_factor: Optional[float] = None
    # SosCertificate for sos, the matrix P for cq
    certificate: Any = None
    # 1-based product word for lower_products
    witness: Optional[Tuple[int, ...]] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    probes: int = 0
    elapsed: float = 0.0

    @property
    def is_upper(self) -> bool:
        return self.method is not Method.LOWER

    def certificate_summary(self) -> Optional[Dict[str, Any]]:
        if self.method is Method.LOWER and self.witness is not None:
            return {"kind": "word", "word": list(self.witness)}
        if self.method is Method.CQ and self.certificate is not None:
            return {"kind": "cq", "P": np.asarray(self.certificate).tolist()}
        if self.method is Method.SOS and isinstance(self.certificate, dict):
            return dict(self.certificate)
        if self.method is Method.SOS and self.certificate is not None:
            return {"kind": "sos", "gamma": float(self.certificate.gamma)}
        return None

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "method": self.method.value,
            "two_d": self.two_d,
            "value": float(self.value),
            "bracket": list(self.bracket) if self.bracket is not None else None,
            "quality_factor": self.quality_factor,
            "certificate": self.certificate_summary(),
            "tolerances": dict(self.tolerances),
            "probes": self.probes,
        }
        if include_timing:
            out["elapsed"] = self.elapsed
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundReport":
        cert = data.get("certificate") or {}
        witness = tuple(cert["word"]) if cert.get("kind") == "word" else None
        certificate: Any = None
        if cert.get("kind") == "cq":
            certificate = np.array(cert["P"])
        elif cert.get("kind") == "sos":
            # only the summary survives serialisation
            certificate = dict(cert)
        bracket = data.get("bracket")
        return cls(
            method=Method(data["method"]),
            value=float(data["value"]),
            two_d=data.get("two_d"),
            bracket=tuple(bracket) if bracket is not None else None,
            quality_factor=data.get("quality_factor"),
            certificate=certificate,
            witness=witness,
            tolerances=dict(data.get("tolerances") or {}),
            probes=int(data.get("probes", 0)),
            elapsed=float(data.get("elapsed", 0.0)),
        )
