"""Concatenated SQ codes built from a binary disjunct base, and their decoder.

Block ``j`` (1-based) is the base code scaled by ``eta * D_j`` where
``D_j = 1 + u + ... + u**(j-1)``.  Any ``u`` columns of blocks ``1..j-1``
sum to at most ``u * D_{j-1} = D_j - 1`` in units of ``eta``, so the
contribution of block ``j`` can be peeled off with integer division.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import CodeMatrix, Quantizer, ValidationError, minimal_levels, syndrome
from .disjunct import DecodeResult


def block_weight(j: int, u: int) -> int:
    """``(u**j - 1) / (u - 1)``, read as ``j`` when ``u == 1``."""
    if u == 1:
        return j
    return (u**j - 1) // (u - 1)


def num_blocks(q: int, eta: int, u: int) -> int:
    """Largest ``K`` with ``eta * block_weight(K, u) <= q - 1``.

    Same as ``floor(log_u((q - 1) / eta * (u - 1) + 1))`` for ``u >= 2``
    without floating point; ``floor((q - 1) / eta)`` for ``u == 1``.
    """
    if eta < 1 or u < 1:
        raise ValidationError("eta and u must be positive")
    if u == 1:
        return (q - 1) // eta
    K = 0
    while eta * block_weight(K + 1, u) <= q - 1:
        K += 1
    return K


@dataclass(frozen=True)
class ConcatCode:
    code: CodeMatrix
    K: int
    base: CodeMatrix
    eta: int
    u: int

    @property
    def block_size(self) -> int:
        return self.base.N

    @property
    def quantizer(self) -> Quantizer:
        """Equidistant quantizer with the fewest non-saturating levels."""
        return Quantizer.for_design(self.eta, self.code.q, self.u)

    def block(self, j: int) -> np.ndarray:
        Nb = self.block_size
        return self.code.matrix[:, (j - 1) * Nb : j * Nb]

    def to_dict(self) -> dict:
        d = self.code.to_dict()
        d.update(K=self.K, block_size=self.block_size, eta=self.eta, u=self.u)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ConcatCode":
        code = CodeMatrix.from_dict(data)
        K, Nb, eta, u = (int(data[k]) for k in ("K", "block_size", "eta", "u"))
        if K * Nb != code.N:
            raise ValidationError(f"K * block_size = {K * Nb} does not match N = {code.N}")
        base = code.matrix[:, :Nb] // eta
        built = concat_construct(CodeMatrix(base, 2), code.q, eta, u)
        if built.code != code or built.K != K:
            raise ValidationError("matrix is not a concatenated code for the stated parameters")
        return built

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ConcatCode":
        return cls.from_dict(json.loads(text))


def concat_construct(base: CodeMatrix, q: int, eta: int, u: int) -> ConcatCode:
    """Stack ``K`` scaled copies of a binary ``u``-disjunct base side by side.

    The base is assumed ``u``-disjunct; check small bases with
    :func:`sqgt.disjunct.is_sq_disjunct` if unsure.
    """
    mat = base.matrix
    if np.any((mat != 0) & (mat != 1)):
        raise ValidationError("the base code must be binary")
    if q < 2 or eta < 1 or u < 1:
        raise ValidationError("need q >= 2, eta >= 1, u >= 1")
    if q - 1 < eta:
        raise ValidationError(f"no block fits: q - 1 = {q - 1} < eta = {eta}")
    K = num_blocks(q, eta, u)
    weights = [block_weight(j, u) for j in range(1, K + 1)]
    for j in range(2, K + 1):
        # u columns of the earlier blocks stay below the next block's weight
        if not u * eta * weights[j - 2] < eta * weights[j - 1]:
            raise AssertionError(f"block separation fails at j={j}")
    blocks = [eta * w * mat for w in weights]
    code = CodeMatrix(np.hstack(blocks), q)
    return ConcatCode(code=code, K=K, base=CodeMatrix(mat, 2), eta=eta, u=u)


def concat_decode(observed, code: ConcatCode) -> DecodeResult:
    """Recover up to ``u`` positives from an equidistant syndrome.

    Starting from ``r = observed``, for ``j = K..1`` the block-``j`` part is
    ``D_j * (r // D_j)`` and the remainder ``r % D_j`` carries the earlier
    blocks.  Within block ``j`` a column is positive when its own syndrome
    ``D_j * b`` is included in that part.
    """
    observed = np.asarray(observed, dtype=np.int64)
    n = code.code.n
    if observed.shape != (n,):
        raise ValidationError(f"observed syndrome must have length {n}")
    if observed.size and observed.min() < 0:
        raise ValidationError("syndrome entries must be non-negative")
    base = code.base.matrix
    Nb = code.block_size
    found: list[int] = []
    if code.u == 1:
        target = code.eta * observed
        hits = np.flatnonzero(np.all(code.code.matrix == target[:, None], axis=0))
        if observed.any() and hits.size:
            found.append(int(hits[0]))
    else:
        rest = observed
        for j in range(code.K, 0, -1):
            D = block_weight(j, code.u)
            part = D * (rest // D)
            rest = rest % D
            cols = np.flatnonzero(np.all(D * base <= part[:, None], axis=0))
            found.extend(int(c) + (j - 1) * Nb for c in cols)
        found.sort()
    positives = tuple(found)
    quant = code.quantizer
    consistent = len(positives) <= code.u and bool(
        np.array_equal(syndrome(code.code, positives, quant), observed)
    )
    return DecodeResult(positives, consistent)


def min_outcome_levels(q: int, eta: int, u: int) -> int:
    """Smallest Q keeping the constructed code's syndromes unsaturated."""
    return minimal_levels(eta, q, u)
