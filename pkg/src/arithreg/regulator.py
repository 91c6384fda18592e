"""Per-embedding regulator vectors.

Two kinds of vectors are produced: log-modulus vectors of units, which are
conjugation-invariant and sum to zero by the product formula, and value
vectors of formal sums under the single-valued dilogarithm, which flip sign
under conjugation (the stored real number is the coefficient of i) and
vanish identically at real embeddings. Conjugation equivariance is exact by
construction: each value is computed once per conjugacy class and mirrored
onto the partner embedding.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .dilog import bloch_wigner
from .errors import DomainError, PrecisionError
from .nf import EmbeddingSet, FieldElement, evaluate
from .precision import PrecisionContext
from .relations import BlochElement

WEIGHT_UNIT = "unit"
WEIGHT_K3 = "k3"


@dataclass(frozen=True)
class RegulatorVector:
    embedding_set: EmbeddingSet
    values: tuple
    weight: str

    def __post_init__(self):
        if self.weight not in (WEIGHT_UNIT, WEIGHT_K3):
            raise DomainError(f"unknown weight {self.weight!r}")
        if len(self.values) != self.embedding_set.degree:
            raise DomainError("value vector length does not match embedding count")

    def __add__(self, other: "RegulatorVector") -> "RegulatorVector":
        if self.weight != other.weight or self.embedding_set != other.embedding_set:
            raise DomainError("incompatible regulator vectors")
        return RegulatorVector(self.embedding_set,
                               tuple(a + b for a, b in zip(self.values, other.values)),
                               self.weight)

    def to_record(self, two_pi_basis: bool = False) -> dict:
        """Serialize; two_pi_basis divides the stored coefficients of i by
        2*pi (formatting only, the stored values stay branch-free reals)."""
        digits = self.embedding_set.precision
        values = self.values
        basis = "1"
        if two_pi_basis and self.weight == WEIGHT_K3:
            with mp.workdps(self.embedding_set.working_dps):
                values = tuple(v / (2 * mp.pi) for v in values)
            basis = "2*pi"
        return {
            "weight": self.weight,
            "values": [mp.nstr(v, digits) for v in values],
            "value_basis": basis,
            "embedding_order": "real embeddings ascending, then complex by (re, im)",
        }


def unit_regulator(lam: FieldElement, e: EmbeddingSet) -> RegulatorVector:
    """Vector of log|sigma(lam)| over all embeddings of a unit."""
    if not lam.is_unit():
        raise DomainError("unit regulator requires a unit")
    n = e.degree
    values = [None] * n
    with mp.workdps(e.working_dps):
        for idx in e.real_indices:
            values[idx] = mp.log(abs(evaluate(lam, e, idx)))
        for idx in e.pair_representatives:
            v = mp.log(abs(evaluate(lam, e, idx)))
            values[idx] = v
            values[e.conjugate_index(idx)] = v
    return RegulatorVector(e, tuple(values), WEIGHT_UNIT)


def k3_regulator(x: BlochElement, e: EmbeddingSet,
                 ctx: PrecisionContext | None = None) -> RegulatorVector:
    """Vector sigma -> -sum_i n_i D(sigma(lambda_i)), coefficient of i.

    Exactly zero at real embeddings; values at conjugate embeddings are exact
    negatives. The kernel condition on x is the caller's responsibility (use
    relations.verify_bloch_element when a presentation is available).
    """
    if ctx is None:
        ctx = PrecisionContext(e.precision)
    n = e.degree
    values = [mpf(0)] * n
    with mp.workdps(e.working_dps):
        degenerate_tol = mpf(10) ** (-(e.precision // 2))
        for idx in e.pair_representatives:
            acc = mpf(0)
            for lam, mult in zip(x.support, x.multiplicities):
                z = evaluate(lam, e, idx)
                if abs(z) < degenerate_tol or abs(z - 1) < degenerate_tol:
                    raise PrecisionError(
                        "support element embeds onto 0 or 1; this signals a "
                        "precision failure for a valid support")
                acc += mult * bloch_wigner(z, ctx)
            values[idx] = -acc
            values[e.conjugate_index(idx)] = acc
    return RegulatorVector(e, tuple(values), WEIGHT_K3)


def s_map(v: RegulatorVector) -> mpf:
    """Average of a unit-weight vector over all embeddings."""
    if v.weight != WEIGHT_UNIT:
        raise DomainError("the averaging map is defined on unit-weight vectors")
    with mp.workdps(v.embedding_set.working_dps):
        return mp.fsum(v.values) / v.embedding_set.degree
