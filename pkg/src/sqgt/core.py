"""Channel semantics for semi-quantitative group testing.

A test pools integer amounts of every subject, adds them up and reports
which quantization region the total falls into.  Everything here is exact
integer arithmetic on numpy ``int64`` arrays.

Subjects (columns) are indexed from 0.
"""
from __future__ import annotations

import csv
import io
import json
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ValidationError(ValueError):
    """Inputs violate a documented precondition."""


class InfeasibleSizeError(RuntimeError):
    """Requested work exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class DesignParams:
    q: int
    Q: int
    u: int

    def __post_init__(self):
        if self.q < 2:
            raise ValidationError(f"alphabet size q must be >= 2, got {self.q}")
        if self.Q < 2:
            raise ValidationError(f"outcome count Q must be >= 2, got {self.Q}")
        if self.u < 1:
            raise ValidationError(f"defect bound u must be >= 1, got {self.u}")


@dataclass(frozen=True)
class Quantizer:
    """Finite thresholds ``(eta_1, ..., eta_{Q-1})``.

    ``eta_0 = 0`` and ``eta_Q = +inf`` are implicit, so a sum ``s`` maps to
    the unique ``r`` with ``eta_r <= s < eta_{r+1}``.

    ``eta`` is set only for quantizers declared equidistant (see
    :meth:`equidistant`).  Their top region is read as ``[(Q-1)*eta, Q*eta)``
    so that outcomes agree with the SQ-sum, which :meth:`validate_for` checks.
    A plain threshold vector such as the OR channel's ``(1,)`` never saturates.
    """

    thresholds: tuple[int, ...]
    eta: int | None = field(default=None, compare=False)

    def __post_init__(self):
        th = tuple(int(t) for t in self.thresholds)
        object.__setattr__(self, "thresholds", th)
        if not th:
            raise ValidationError("a quantizer needs at least one threshold")
        if th[0] <= 0:
            raise ValidationError("thresholds must be positive")
        if any(b <= a for a, b in zip(th, th[1:])):
            raise ValidationError(f"thresholds must be strictly increasing: {th}")
        if self.eta is not None and any(t != (r + 1) * self.eta for r, t in enumerate(th)):
            raise ValidationError(f"thresholds {th} are not multiples of eta={self.eta}")

    @property
    def Q(self) -> int:
        return len(self.thresholds) + 1

    @property
    def is_equidistant(self) -> bool:
        return self.eta is not None

    @classmethod
    def equidistant(cls, eta: int, Q: int) -> "Quantizer":
        if eta < 1:
            raise ValidationError(f"step eta must be >= 1, got {eta}")
        if Q < 2:
            raise ValidationError(f"Q must be >= 2, got {Q}")
        return cls(tuple(r * eta for r in range(1, Q)), eta=eta)

    @classmethod
    def for_design(cls, eta: int, q: int, u: int) -> "Quantizer":
        """Equidistant quantizer with the fewest levels that never saturates."""
        return cls.equidistant(eta, minimal_levels(eta, q, u))

    @classmethod
    def conventional(cls) -> "Quantizer":
        """OR-channel testing: outcome 1 iff the pooled sum is positive."""
        return cls((1,))

    @classmethod
    def adder(cls, max_sum: int) -> "Quantizer":
        """Unit thresholds: the outcome is the pooled sum itself."""
        return cls.equidistant(1, max_sum + 1)

    @classmethod
    def from_partition(cls, parts: Sequence[Iterable[int]]) -> "Quantizer":
        """Build from contiguous regions such as ``[{0, 1}, {2}, {3, 4}]``."""
        parts = [sorted(int(v) for v in p) for p in parts]
        if len(parts) < 2 or any(not p for p in parts):
            raise ValidationError("a partition needs at least two nonempty regions")
        expected = 0
        for p in parts:
            if p != list(range(expected, expected + len(p))):
                raise ValidationError(f"regions must tile 0, 1, 2, ... contiguously: {parts}")
            expected += len(p)
        return cls(tuple(p[0] for p in parts[1:]))

    def to_partition(self, max_sum: int) -> list[list[int]]:
        """Regions of ``{0, ..., max_sum}``; requires every region to be nonempty."""
        if self.thresholds[-1] > max_sum:
            raise ValidationError(
                f"threshold {self.thresholds[-1]} exceeds the largest sum {max_sum}"
            )
        bounds = (0,) + self.thresholds + (max_sum + 1,)
        return [list(range(a, b)) for a, b in zip(bounds, bounds[1:])]

    def partition_string(self, max_sum: int) -> str:
        return "".join(
            "{" + ",".join(str(v) for v in part) + "}" for part in self.to_partition(max_sum)
        )

    def validate_for(self, q: int, u: int) -> None:
        """Check that sums of at most ``u`` entries below ``q`` never saturate.

        Only equidistant quantizers can saturate: their top region stops at
        ``Q * eta``, which must exceed ``(q - 1) * u`` for the outcome to equal
        the SQ-sum.  General thresholds leave the top region unbounded.
        """
        top = (q - 1) * u
        if self.is_equidistant and self.Q * self.eta <= top:
            raise ValidationError(
                f"equidistant quantizer with Q={self.Q}, eta={self.eta} saturates "
                f"below the largest sum {top}; need Q >= {minimal_levels(self.eta, q, u)}"
            )

    def unreachable_levels(self, q: int, u: int) -> int:
        """Number of outcome levels no sum of ``u`` entries below ``q`` can hit."""
        top = (q - 1) * u
        return sum(1 for t in self.thresholds if t > top)

    def to_dict(self) -> dict:
        if self.is_equidistant:
            return {"Q": self.Q, "eta": self.eta}
        return {"Q": self.Q, "thresholds": list(self.thresholds)}

    @classmethod
    def from_dict(cls, data: dict) -> "Quantizer":
        if "eta" in data:
            return cls.equidistant(int(data["eta"]), int(data["Q"]))
        quant = cls(tuple(data["thresholds"]))
        if "Q" in data and int(data["Q"]) != quant.Q:
            raise ValidationError(f"Q={data['Q']} does not match {quant.Q - 1} thresholds")
        return quant


def minimal_levels(eta: int, q: int, u: int) -> int:
    """Smallest Q whose equidistant quantizer keeps every sum of u entries."""
    return max(2, (u * (q - 1)) // eta + 1)


class CodeMatrix:
    """``n x N`` test matrix over ``{0, ..., q-1}``; column ``j`` is subject ``j``."""

    def __init__(self, matrix, q: int):
        arr = np.array(matrix, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"code matrix must be a nonempty 2-d array, got shape {arr.shape}")
        if q < 2:
            raise ValidationError(f"alphabet size q must be >= 2, got {q}")
        if arr.min() < 0 or arr.max() > q - 1:
            raise ValidationError(f"entries must lie in [0, {q - 1}]")
        arr.setflags(write=False)
        self._matrix = arr
        self.q = int(q)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n(self) -> int:
        return self._matrix.shape[0]

    @property
    def N(self) -> int:
        return self._matrix.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self._matrix[:, j]

    def __eq__(self, other):
        if not isinstance(other, CodeMatrix):
            return NotImplemented
        return self.q == other.q and np.array_equal(self._matrix, other._matrix)

    def __hash__(self):
        return hash((self.q, self._matrix.shape, self._matrix.tobytes()))

    def __repr__(self):
        return f"CodeMatrix(q={self.q}, n={self.n}, N={self.N})"

    @classmethod
    def identity(cls, size: int, q: int = 2) -> "CodeMatrix":
        return cls(np.eye(size, dtype=np.int64), q)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "N": self.N,
            "layout": "tests-by-subjects",
            "matrix": self._matrix.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CodeMatrix":
        layout = data.get("layout", "tests-by-subjects")
        if layout != "tests-by-subjects":
            raise ValidationError(f"unsupported layout {layout!r}")
        code = cls(data["matrix"], int(data["q"]))
        if (code.n, code.N) != (data.get("n", code.n), data.get("N", code.N)):
            raise ValidationError(
                f"declared shape {data.get('n')}x{data.get('N')} does not match the matrix"
            )
        return code

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CodeMatrix":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self._matrix.tolist())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, q: int | None = None) -> "CodeMatrix":
        """Parse headerless CSV, rows are tests.  ``q`` defaults to max entry + 1."""
        rows = [[int(v) for v in row] for row in csv.reader(io.StringIO(text)) if row]
        if not rows:
            raise ValidationError("empty CSV code matrix")
        if len({len(r) for r in rows}) != 1:
            raise ValidationError("ragged CSV code matrix")
        if q is None:
            q = max(2, max(max(r) for r in rows) + 1)
        return cls(rows, q)


def quantize(total, quantizer: Quantizer):
    """Outcome level of a pooled sum (scalar or array)."""
    if np.ndim(total) == 0:
        if total < 0:
            raise ValidationError(f"pooled sum must be non-negative, got {total}")
        return bisect_right(quantizer.thresholds, int(total))
    totals = np.asarray(total, dtype=np.int64)
    if totals.size and totals.min() < 0:
        raise ValidationError("pooled sums must be non-negative")
    return np.searchsorted(np.asarray(quantizer.thresholds), totals, side="right").astype(np.int64)


def sq_sum(codewords: Sequence[Sequence[int]], eta: int) -> np.ndarray:
    """Coordinatewise ``floor(sum / eta)`` of one or more codewords."""
    if eta < 1:
        raise ValidationError(f"step eta must be >= 1, got {eta}")
    if len(codewords) == 0:
        raise ValidationError("SQ-sum needs at least one codeword")
    lengths = {len(x) for x in codewords}
    if len(lengths) != 1:
        raise ValidationError(f"codewords differ in length: {sorted(lengths)}")
    return np.sum(np.asarray(codewords, dtype=np.int64), axis=0) // eta


def syndrome(code: CodeMatrix, positives: Iterable[int], quantizer: Quantizer) -> np.ndarray:
    """Quantized outcome of every test when exactly ``positives`` are present."""
    idx = check_indices(positives, code.N)
    totals = code.matrix[:, list(idx)].sum(axis=1)
    return quantize(totals, quantizer)


def is_included(ya, yb) -> bool:
    """True iff ``ya`` is dominated coordinatewise by ``yb``."""
    ya = np.asarray(ya)
    yb = np.asarray(yb)
    if ya.shape != yb.shape:
        raise ValidationError(f"syndrome lengths differ: {ya.shape} vs {yb.shape}")
    return bool(np.all(ya <= yb))


def check_indices(positives: Iterable[int], N: int) -> tuple[int, ...]:
    """Sorted distinct column indices, each in ``range(N)``."""
    idx = [int(i) for i in positives]
    if len(set(idx)) != len(idx):
        raise ValidationError(f"duplicate subject indices in {idx}")
    bad = [i for i in idx if not 0 <= i < N]
    if bad:
        raise ValidationError(f"subject indices {bad} out of range for N={N}")
    return tuple(sorted(idx))


def syndrome_to_dict(outcomes, Q: int) -> dict:
    return {"Q": int(Q), "n": len(outcomes), "outcomes": [int(v) for v in outcomes]}


def syndrome_from_dict(data: dict) -> np.ndarray:
    out = np.asarray(data["outcomes"], dtype=np.int64)
    Q = data.get("Q")
    if out.ndim != 1:
        raise ValidationError("outcomes must be a flat list")
    if out.size and (out.min() < 0 or (Q is not None and out.max() > int(Q) - 1)):
        raise ValidationError(f"outcomes must lie in [0, Q-1] with Q={Q}")
    return out
