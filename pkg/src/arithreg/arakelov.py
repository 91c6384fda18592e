"""Metrized line bundles on a ring of integers and their arithmetic degree.

A fractional ideal is stored as a canonical (HNF) Z-basis in integral-basis
coordinates. A metric is one positive number per embedding, conjugation
invariant, read as the squared norm of the first HNF basis vector of the
ideal (the reference section s0); the squared norm of any other section s is
metric[sigma] * |sigma(s/s0)|^2. With this convention the degree of the
trivial bundle with metric exp(-2*t_sigma) at each embedding is the mean of
the t_sigma, which pins the normalization of the half in the degree formula.

The degree itself is
    (log #(L / R s) - (1/2) sum_sigma log h_sigma(s)) / degree(K)
for any nonzero section s, and is independent of that choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from mpmath import mp, mpf

from .errors import DomainError, MembershipError
from .intmat import det_fraction, hnf_rational, solve_fraction
from .nf import EmbeddingSet, FieldElement, NumberField, evaluate


@dataclass(frozen=True)
class FractionalIdeal:
    """Nonzero fractional ideal as a canonical HNF Z-basis over the integral
    basis of the ring of integers."""

    field: NumberField
    basis_matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.field.degree
        if len(self.basis_matrix) != n or any(len(r) != n for r in self.basis_matrix):
            raise DomainError("ideal basis must be square of size the field degree")
        if det_fraction([list(r) for r in self.basis_matrix]) == 0:
            raise DomainError("ideal basis is singular")

    @classmethod
    def from_rows(cls, field: NumberField, rows, check: bool = True) -> "FractionalIdeal":
        """Canonicalize arbitrary generating rows (integral-basis coords)."""
        h = hnf_rational([[Fraction(x) for x in row] for row in rows])
        if len(h) != field.degree:
            raise DomainError("rows do not span a full-rank lattice")
        ideal = cls(field, tuple(tuple(r) for r in h))
        if check and not ideal._is_module_closed():
            raise DomainError("lattice is not closed under ring multiplication")
        return ideal

    @classmethod
    def from_elements(cls, field: NumberField, elems) -> "FractionalIdeal":
        """Ideal generated by field elements as a module over the ring."""
        elems = [el for el in elems if not el.is_zero()]
        if not elems:
            raise DomainError("the zero ideal is not supported")
        rows = []
        for el in elems:
            for omega in field.integral_basis_elements():
                rows.append((el * omega).integral_coords())
        return cls.from_rows(field, rows, check=False)

    @classmethod
    def principal(cls, elem: FieldElement) -> "FractionalIdeal":
        return cls.from_elements(elem.field, [elem])

    @classmethod
    def unit_ideal(cls, field: NumberField) -> "FractionalIdeal":
        return cls.principal(field.one())

    def _is_module_closed(self) -> bool:
        for row in self.basis_matrix:
            el = self.element_from_coords(row)
            for omega in self.field.integral_basis_elements():
                if not self.contains(el * omega):
                    return False
        return True

    def element_from_coords(self, coords) -> FieldElement:
        return self.field.element(self.field.integral_coords_to_power(coords))

    def basis_elements(self) -> list[FieldElement]:
        return [self.element_from_coords(row) for row in self.basis_matrix]

    def reference_section(self) -> FieldElement:
        """First HNF basis vector; anchors metrics and default sections."""
        return self.element_from_coords(self.basis_matrix[0])

    def coords_of(self, elem: FieldElement) -> list[Fraction]:
        y = elem.integral_coords()
        return solve_fraction([list(r) for r in self.basis_matrix], y)

    def contains(self, elem: FieldElement) -> bool:
        if elem.is_zero():
            return True
        return all(c.denominator == 1 for c in self.coords_of(elem))

    def multiply(self, other: "FractionalIdeal") -> "FractionalIdeal":
        if self.field != other.field:
            raise DomainError("ideals over different fields")
        rows = []
        for a in self.basis_elements():
            for b in other.basis_elements():
                rows.append((a * b).integral_coords())
        return FractionalIdeal.from_rows(self.field, rows, check=False)

    def power(self, n: int) -> "FractionalIdeal":
        if n < 0:
            raise DomainError("negative ideal powers are not supported")
        out = FractionalIdeal.unit_ideal(self.field)
        for _ in range(n):
            out = out.multiply(self)
        return out

    def scale(self, a: FieldElement) -> "FractionalIdeal":
        if a.is_zero():
            raise DomainError("cannot scale an ideal by zero")
        rows = [(a * el).integral_coords() for el in self.basis_elements()]
        return FractionalIdeal.from_rows(self.field, rows, check=False)

    @cached_property
    def norm(self) -> Fraction:
        return abs(det_fraction([list(r) for r in self.basis_matrix]))

    def to_record(self) -> dict:
        return {"ideal_basis": [[str(x) for x in row] for row in self.basis_matrix]}


def ideal_norm(ideal: FractionalIdeal) -> Fraction:
    return ideal.norm


def index_quotient(ideal: FractionalIdeal, s: FieldElement) -> Fraction:
    """#(L / R s) for a nonzero section s of L; always a positive integer."""
    if s.is_zero():
        raise DomainError("the zero section spans nothing")
    if not ideal.contains(s):
        raise MembershipError("section does not lie in the ideal")
    value = abs(s.norm()) / ideal.norm
    if value.denominator != 1:
        raise DomainError("index is not integral; the ideal basis is inconsistent")
    return value


@dataclass(frozen=True)
class Metric:
    """Positive squared-norm values per embedding, conjugation invariant;
    anchored to the reference section of the accompanying ideal."""

    values: tuple

    def __post_init__(self):
        if any(not (v > 0) for v in self.values):
            raise DomainError("metric values must be positive")

    def check_invariance(self, e: EmbeddingSet):
        for i, j in enumerate(e.conjugation_pairing):
            if self.values[i] != self.values[j]:
                raise DomainError("metric is not conjugation invariant")


@dataclass(frozen=True)
class MetrizedLineBundle:
    ideal: FractionalIdeal
    metric: Metric

    def __post_init__(self):
        if len(self.metric.values) != self.ideal.field.degree:
            raise DomainError("metric must supply one value per embedding")

    @property
    def field(self) -> NumberField:
        return self.ideal.field

    def section_norm_sq(self, s: FieldElement, e: EmbeddingSet, index: int):
        """Squared metric norm of a section at one embedding."""
        s0 = self.ideal.reference_section()
        ratio = evaluate(s / s0, e, index)
        return self.metric.values[index] * abs(ratio) ** 2

    def to_record(self, digits: int = 50) -> dict:
        rec = self.ideal.to_record()
        rec["metric"] = [mp.nstr(v, digits) for v in self.metric.values]
        return rec


def standard_metric(ideal: FractionalIdeal, e: EmbeddingSet) -> Metric:
    """|sigma(s0)|^2 at each embedding: the metric pulled back from K."""
    s0 = ideal.reference_section()
    vals = [None] * e.degree
    with mp.workdps(e.working_dps):
        for idx in e.class_representatives:
            v = abs(evaluate(s0, e, idx)) ** 2
            vals[idx] = v
            vals[e.conjugate_index(idx)] = v
    return Metric(tuple(vals))


def arithmetic_degree(bundle: MetrizedLineBundle, e: EmbeddingSet,
                      s: FieldElement | None = None) -> mpf:
    """Degree of a metrized bundle, via any nonzero section (default: the
    reference section). Independent of the choice of section."""
    bundle.metric.check_invariance(e)
    if s is None:
        s = bundle.ideal.reference_section()
    idx_count = index_quotient(bundle.ideal, s)
    with mp.workdps(e.working_dps):
        log_index = mp.log(mpf(idx_count.numerator)) - mp.log(mpf(idx_count.denominator))
        metric_part = mpf(0)
        for i in e.class_representatives:
            weight = 1 if e.is_real(i) else 2
            metric_part += weight * mp.log(bundle.section_norm_sq(s, e, i))
        return (log_index - metric_part / 2) / e.degree


def tensor(a: MetrizedLineBundle, b: MetrizedLineBundle,
           e: EmbeddingSet) -> MetrizedLineBundle:
    """Tensor product: ideals multiply, metrics multiply per embedding (with
    the reference sections re-anchored to the product ideal's HNF basis)."""
    if a.field != b.field:
        raise DomainError("bundles over different fields")
    ideal = a.ideal.multiply(b.ideal)
    s0a = a.ideal.reference_section()
    s0b = b.ideal.reference_section()
    s0 = ideal.reference_section()
    ratio = s0 / (s0a * s0b)
    vals = [None] * e.degree
    with mp.workdps(e.working_dps):
        for i in e.class_representatives:
            v = (a.metric.values[i] * b.metric.values[i]
                 * abs(evaluate(ratio, e, i)) ** 2)
            vals[i] = v
            vals[e.conjugate_index(i)] = v
    return MetrizedLineBundle(ideal, Metric(tuple(vals)))


def twist_metric(bundle: MetrizedLineBundle, tuple_values,
                 e: EmbeddingSet) -> MetrizedLineBundle:
    """Rescale the metric by exp(-2 * t_sigma); t must be conjugation
    invariant. Twisting by t then -t restores the original bundle."""
    t = list(tuple_values)
    if len(t) != e.degree:
        raise DomainError("twist vector must supply one value per embedding")
    for i, j in enumerate(e.conjugation_pairing):
        if t[i] != t[j]:
            raise DomainError("twist vector is not conjugation invariant")
    with mp.workdps(e.working_dps):
        vals = [None] * e.degree
        for i in e.class_representatives:
            v = bundle.metric.values[i] * mp.exp(-2 * t[i])
            vals[i] = v
            vals[e.conjugate_index(i)] = v
    return MetrizedLineBundle(bundle.ideal, Metric(tuple(vals)))


def transport(bundle: MetrizedLineBundle, a: FieldElement,
              e: EmbeddingSet) -> MetrizedLineBundle:
    """Isomorphic bundle (a L, transported metric); degree-preserving."""
    if a.is_zero():
        raise DomainError("cannot transport along zero")
    ideal = bundle.ideal.scale(a)
    s0_old = bundle.ideal.reference_section()
    s0_new = ideal.reference_section()
    ratio = s0_new / (a * s0_old)
    vals = [None] * e.degree
    with mp.workdps(e.working_dps):
        for i in e.class_representatives:
            v = bundle.metric.values[i] * abs(evaluate(ratio, e, i)) ** 2
            vals[i] = v
            vals[e.conjugate_index(i)] = v
    return MetrizedLineBundle(ideal, Metric(tuple(vals)))
