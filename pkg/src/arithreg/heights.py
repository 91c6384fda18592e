"""The height on the unit-like part of the differential K-theory of a ring
of integers, and its agreement with the arithmetic degree.

A class here is finite data: a conjugation-invariant real tuple over the
embeddings (an H^(-1)-type class; with a zero-dimensional complex point set
all differential-form data collapses to per-embedding numbers) together with
a positive integer N recording that the N-th power of the underlying class
is 1 + (that tuple). The height is the embedding average divided by N.

c_hat_height computes the height of the class attached to a metrized line
bundle through a caller-supplied trivialization of ideal^N and must equal
arithmetic_degree; the equality is the tested content, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .arakelov import MetrizedLineBundle, FractionalIdeal
from .errors import DomainError, PrincipalityError
from .nf import EmbeddingSet, FieldElement, evaluate


@dataclass(frozen=True)
class DiffK0Class:
    """Unit-like differential K-theory class in concrete form.

    order_hint N: the N-th power of the class equals 1 + a(scaling_vector).
    scaling_vector: conjugation-invariant reals, one per embedding.
    provenance: optional note on the originating bundle.
    """

    order_hint: int
    scaling_vector: tuple
    embedding_set: EmbeddingSet | None = None
    provenance: str | None = None

    def __post_init__(self):
        if self.order_hint < 1:
            raise DomainError("order hint must be a positive integer")
        if self.embedding_set is not None:
            pairing = self.embedding_set.conjugation_pairing
            if len(self.scaling_vector) != len(pairing):
                raise DomainError("scaling vector length does not match embeddings")
            for i, j in enumerate(pairing):
                if self.scaling_vector[i] != self.scaling_vector[j]:
                    raise DomainError("scaling vector is not conjugation invariant")


def height(x: DiffK0Class) -> mpf:
    """Mean of the scaling vector over embeddings, divided by the order."""
    n = len(x.scaling_vector)
    wp = x.embedding_set.working_dps if x.embedding_set is not None else mp.dps
    with mp.workdps(wp):
        return mp.fsum(x.scaling_vector) / n / x.order_hint


def height_scaled_trivial(f_values, e: EmbeddingSet) -> mpf:
    """Height of the trivial bundle rescaled by a positive invariant
    function f: equals -(1/(2n)) sum_sigma log f(sigma)."""
    f = _check_positive_invariant(f_values, e)
    with mp.workdps(e.working_dps):
        return -mp.fsum(mp.log(v) for v in f) / (2 * e.degree)


def scaling_alpha(rank: int, f_values, e: EmbeddingSet) -> tuple:
    """Per-embedding class of the cycle difference under metric rescaling by
    f on a rank-`rank` bundle: sigma -> -(rank/2) log f(sigma)."""
    if rank < 1:
        raise DomainError("rank must be a positive integer")
    f = _check_positive_invariant(f_values, e)
    with mp.workdps(e.working_dps):
        return tuple(-mpf(rank) / 2 * mp.log(v) for v in f)


def _check_positive_invariant(f_values, e: EmbeddingSet):
    f = list(f_values)
    if len(f) != e.degree:
        raise DomainError("need one value per embedding")
    if any(not (v > 0) for v in f):
        raise DomainError("values must be positive")
    for i, j in enumerate(e.conjugation_pairing):
        if f[i] != f[j]:
            raise DomainError("values are not conjugation invariant")
    return f


def c_hat_height(bundle: MetrizedLineBundle, n_power: int,
                 generator: FieldElement, e: EmbeddingSet) -> mpf:
    """Height of the class of a metrized bundle, computed through the N-th
    power trivialized by `generator`.

    The claim that generator generates ideal^N is verified exactly (HNF
    comparison) and never trusted. The result must agree with
    arithmetic_degree(bundle, e); tests enforce that equality.
    """
    if n_power < 1:
        raise DomainError("the power must be a positive integer")
    if generator.is_zero():
        raise DomainError("generator must be nonzero")
    ideal_pow = bundle.ideal.power(n_power)
    principal = FractionalIdeal.principal(generator)
    if ideal_pow.basis_matrix != principal.basis_matrix:
        raise PrincipalityError(
            "generator does not generate the stated power of the ideal")

    s0 = bundle.ideal.reference_section()
    s0_pow = s0 ** n_power
    ratio = generator / s0_pow
    with mp.workdps(e.working_dps):
        f = [None] * e.degree
        for i in e.class_representatives:
            norm_sq = (bundle.metric.values[i] ** n_power
                       * abs(evaluate(ratio, e, i)) ** 2)
            v = -mp.log(norm_sq) / 2
            f[i] = v
            f[e.conjugate_index(i)] = v
        return mp.fsum(f) / e.degree / n_power
