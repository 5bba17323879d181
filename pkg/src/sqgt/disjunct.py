"""SQ-disjunct codes: verification, certificates, scaling and naive decoding."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice
from math import comb
from typing import Sequence

import numpy as np

from .core import (
    CodeMatrix,
    DesignParams,
    Quantizer,
    ValidationError,
    quantize,
    syndrome,
)

# Elements of the (tests x subsets x columns) comparison cube per batch.
_BATCH_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class DisjunctReport:
    is_disjunct: bool
    witness: tuple[int, tuple[int, ...]] | None = None

    def __post_init__(self):
        if self.is_disjunct != (self.witness is None):
            raise ValueError("a witness is present exactly when the code is not disjunct")

    def __bool__(self):
        return self.is_disjunct

    def to_dict(self) -> dict:
        if self.witness is None:
            return {"disjunct": True, "witness": None}
        codeword, covering = self.witness
        return {"disjunct": False, "witness": {"codeword": codeword, "covering": list(covering)}}

    @classmethod
    def from_dict(cls, data: dict) -> "DisjunctReport":
        w = data.get("witness")
        if w is None:
            return cls(bool(data["disjunct"]))
        return cls(bool(data["disjunct"]), (int(w["codeword"]), tuple(int(c) for c in w["covering"])))


@dataclass(frozen=True)
class DecodeResult:
    positives: tuple[int, ...]
    consistent: bool


def is_sq_disjunct(code: CodeMatrix, params: DesignParams, quantizer: Quantizer) -> DisjunctReport:
    """Check that no codeword's syndrome is included in that of ``u`` others.

    Every ``u``-subset of columns is enumerated once and compared against all
    columns outside it.  With fewer than ``u`` other columns available the
    whole remainder is used, which is equivalent because inclusion is
    monotone in the covering set.  On failure the witness is the
    lexicographically smallest ``(codeword, covering set)`` pair.
    """
    if code.q != params.q:
        raise ValidationError(f"code alphabet q={code.q} differs from design q={params.q}")
    quantizer.validate_for(params.q, params.u)
    N = code.N
    if N == 1:
        return DisjunctReport(True)
    t = min(params.u, N - 1)
    mat = code.matrix
    singles = quantize(mat, quantizer)  # n x N
    n = code.n
    batch = max(1, _BATCH_ELEMENTS // (n * N))

    best = None
    subsets = combinations(range(N), t)
    offset = 0
    while True:
        chunk = list(islice(subsets, batch))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.int64)  # B x t
        covers = quantize(mat[:, idx].sum(axis=2), quantizer)  # n x B
        # included[b, x]: singles[:, x] <= covers[:, b] on every test
        included = np.all(singles[:, None, :] <= covers[:, :, None], axis=0)
        included[np.arange(len(chunk))[:, None], idx] = False
        hits = np.argwhere(included)
        if hits.size:
            # argwhere is row-major (subset, column); reorder by column first
            order = np.lexsort((hits[:, 0], hits[:, 1]))
            b, x = hits[order[0]]
            cand = (int(x), offset + int(b))
            if best is None or cand < best:
                best = cand
        offset += len(chunk)

    if best is None:
        return DisjunctReport(True)
    x, b = best
    covering = next(islice(combinations(range(N), t), b, None))
    return DisjunctReport(False, (x, tuple(covering)))


def disjunct_work(N: int, u: int, n: int) -> int:
    """Element comparisons performed by :func:`is_sq_disjunct`."""
    if N <= 1:
        return 0
    return comb(N, min(u, N - 1)) * N * n


def certifying_rows(codewords: Sequence[Sequence[int]], eta: int) -> np.ndarray:
    """Boolean ``n x s`` array: row k certifies column i against the others."""
    x = np.asarray(codewords, dtype=np.int64).T  # n x s
    rest = x.sum(axis=1, keepdims=True) - x
    return x // eta > rest // eta


def unique_coordinate_check(codewords: Sequence[Sequence[int]], eta: int, u: int | None = None) -> bool:
    """Whether each of ``u + 1`` codewords has its own certifying coordinate.

    A coordinate ``k`` certifies codeword ``i`` when
    ``floor(x[k, i] / eta) > floor(sum_{j != i} x[k, j] / eta)``.  At most one
    codeword can be certified per coordinate, so distinct coordinates exist
    iff every codeword is certified somewhere.
    """
    if eta < 1:
        raise ValidationError(f"step eta must be >= 1, got {eta}")
    if len(codewords) < 2:
        raise ValidationError("need at least two codewords")
    if u is not None and len(codewords) != u + 1:
        raise ValidationError(f"expected u + 1 = {u + 1} codewords, got {len(codewords)}")
    if len({len(c) for c in codewords}) != 1:
        raise ValidationError("codewords differ in length")
    return bool(certifying_rows(codewords, eta).any(axis=0).all())


def scale_code(binary_code: CodeMatrix, factor: int, q: int | None = None) -> CodeMatrix:
    """Multiply a binary code by ``factor``; the result lives over ``q`` symbols.

    ``q`` defaults to ``factor + 1``.
    """
    mat = binary_code.matrix
    if np.any((mat != 0) & (mat != 1)):
        raise ValidationError("scale_code needs a binary input code")
    if factor < 1:
        raise ValidationError(f"scaling factor must be positive, got {factor}")
    if q is None:
        q = factor + 1
    if factor > q - 1:
        raise ValidationError(f"factor {factor} exceeds the largest symbol q-1 = {q - 1}")
    return CodeMatrix(mat * factor, q)


def naive_decode(
    code: CodeMatrix,
    observed,
    quantizer: Quantizer,
    params: DesignParams | None = None,
) -> DecodeResult:
    """Declare positive every column whose own syndrome is included in ``observed``.

    Runs in O(nN).  For an SQ-disjunct code and at most ``u`` positives this
    recovers the positive set exactly; otherwise the result is flagged
    inconsistent when it does not reproduce ``observed``.
    """
    observed = np.asarray(observed, dtype=np.int64)
    if observed.shape != (code.n,):
        raise ValidationError(f"observed syndrome must have length {code.n}")
    singles = quantize(code.matrix, quantizer)
    found = np.flatnonzero(np.all(singles <= observed[:, None], axis=0))
    positives = tuple(int(j) for j in found)
    consistent = bool(np.array_equal(syndrome(code, positives, quantizer), observed))
    if params is not None and len(positives) > params.u:
        consistent = False
    return DecodeResult(positives, consistent)
