"""Multiplicative relation lattices among field units, exterior squares of
finitely generated abelian groups, the wedge map lambda -> lambda ^ (1-lambda),
and the kernel of formal sums under that map.

Relations are discovered numerically (LLL on a scaled logarithmic embedding,
one log-modulus column per conjugacy class of embeddings plus argument
columns with auxiliary rows absorbing whole turns) and then every candidate
is verified by exact field multiplication. Floating error can therefore make
the discovered lattice incomplete but never wrong. Exterior squares keep
their torsion: the quotient presentation is reduced to Smith normal form and
wedge coordinates are canonicalized componentwise against the diagonal
invariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from .errors import DomainError, PrecisionError, PresentationIncompleteError
from .intmat import hnf_rows, identity, in_lattice, invert_fraction, left_kernel, lll, snf
from .nf import EmbeddingSet, FieldElement, NumberField, embeddings, evaluate
from .precision import GUARD_DIGITS

DEFAULT_EXPONENT_BOUND = 64


@lru_cache(maxsize=32)
def _cached_embeddings(field: NumberField, precision: int) -> EmbeddingSet:
    return embeddings(field, precision)


@dataclass(frozen=True)
class MultiplicativePresentation:
    """A finitely generated subgroup of the unit group, by generators and a
    canonical (HNF) basis of their exact multiplicative relations."""

    generators: tuple[FieldElement, ...]
    relation_basis: tuple[tuple[int, ...], ...]
    torsion_order: int
    precision: int

    @property
    def rank(self) -> int:
        return len(self.generators)

    def power_product(self, exponents) -> FieldElement:
        if len(exponents) != self.rank:
            raise DomainError("exponent vector has wrong length")
        field = self.generators[0].field
        out = field.one()
        for g, e in zip(self.generators, exponents):
            if e:
                out = out * g ** int(e)
        return out


@dataclass(frozen=True)
class WedgeClass:
    """Canonically reduced element of the exterior square of the presented
    group; coords live in the Smith coordinates of the quotient."""

    presentation: MultiplicativePresentation
    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "WedgeClass") -> "WedgeClass":
        if self.presentation != other.presentation:
            raise DomainError("wedge classes over different presentations")
        sq = exterior_square(self.presentation)
        return WedgeClass(self.presentation, sq.reduce(
            [a + b for a, b in zip(self.coords, other.coords)]))

    def scale(self, n: int) -> "WedgeClass":
        sq = exterior_square(self.presentation)
        return WedgeClass(self.presentation, sq.reduce([n * c for c in self.coords]))


@dataclass(frozen=True)
class BlochElement:
    """Integer combination sum n_i [lambda_i] with support in the elements
    whose complements are also units; valid ones satisfy
    sum n_i (lambda_i ^ (1 - lambda_i)) = 0 including torsion."""

    support: tuple[FieldElement, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if len(self.support) != len(self.multiplicities):
            raise DomainError("support and multiplicities differ in length")

    def to_record(self) -> dict:
        return {
            "support": [el.to_record() for el in self.support],
            "multiplicities": [int(n) for n in self.multiplicities],
        }


# ---------------------------------------------------------------------------
# relation discovery

def _embedding_columns(elems, e: EmbeddingSet):
    """Rows of (log-modulus columns per conjugacy class, then argument/2pi
    columns per conjugacy class) for each element."""
    reps = e.class_representatives
    logs, args = [], []
    for g in elems:
        lrow, arow = [], []
        for idx in reps:
            val = evaluate(g, e, idx)
            if abs(val) == 0:
                raise DomainError("zero element has no logarithmic embedding")
            lrow.append(mp.log(abs(val)))
            arow.append(mp.arg(val) / (2 * mp.pi))
        logs.append(lrow)
        args.append(arow)
    return logs, args


def _relation_candidates(elems, precision: int, head: int = 0):
    """LLL-reduced vectors of the scaled log-embedding lattice.

    Returns (vectors, width) where each vector is (exponents | residuals)
    with len(exponents) == len(elems); `head` extra columns of exponents are
    for prepended elements (used by the coordinate search). Residuals below
    10^((precision - guard)/2) mark candidate relations.
    """
    field = elems[0].field
    e = _cached_embeddings(field, precision)
    with mp.workdps(e.working_dps):
        logs, args = _embedding_columns(elems, e)
        scale = 10 ** (precision - GUARD_DIGITS)
        k = len(elems)
        ncls = len(e.class_representatives)
        rows = []
        for i in range(k):
            rows.append([1 if j == i else 0 for j in range(k)]
                        + [int(mp.nint(scale * v)) for v in logs[i]]
                        + [int(mp.nint(scale * v)) for v in args[i]])
        for j in range(ncls):  # absorb whole turns in the argument columns
            rows.append([0] * (k + ncls + j) + [scale] + [0] * (ncls - 1 - j))
    reduced = lll(rows)
    threshold = 10 ** ((precision - GUARD_DIGITS) // 2)
    out = []
    for v in reduced:
        exps, resid = v[:k], v[k:]
        if all(x == 0 for x in exps):
            continue
        if max(abs(r) for r in resid) <= threshold:
            out.append(exps)
    return out


def relation_lattice(elems, precision: int = 50,
                     bound: int = DEFAULT_EXPONENT_BOUND) -> MultiplicativePresentation:
    """Find the multiplicative relation lattice of a list of units.

    Every numerically discovered relation is verified by exact field
    multiplication before acceptance; a candidate that fails verification
    raises PrecisionError (retry with more digits). The torsion order of the
    presented group is read off the Smith form and certified by exact
    powering of a torsion generator.
    """
    elems = list(elems)
    if not elems:
        return MultiplicativePresentation((), (), 1, precision)
    field = elems[0].field
    for g in elems:
        if g.field != field:
            raise DomainError("generators live in different fields")
        if not g.is_unit():
            raise DomainError(f"generator {g!r} is not a unit")

    k = len(elems)
    candidates = _relation_candidates(elems, precision)
    verified = []
    for exps in candidates:
        if max(abs(x) for x in exps) > bound:
            continue
        if not _power_product(elems, exps).is_one():
            raise PrecisionError(
                "numerically discovered relation failed exact verification; "
                "retry at higher precision")
        verified.append(list(exps))
    basis = hnf_rows(verified) if verified else []

    torsion = _certify_torsion(elems, basis, k)
    pres = MultiplicativePresentation(
        tuple(elems), tuple(tuple(r) for r in basis), torsion, precision)
    # the HNF rows are integer combinations of verified relations, but check
    # them directly anyway: the type invariant is exact
    for row in pres.relation_basis:
        if not _power_product(elems, row).is_one():
            raise PrecisionError("relation basis failed exact re-verification")
    return pres


def _power_product(elems, exponents) -> FieldElement:
    field = elems[0].field
    out = field.one()
    for g, e in zip(elems, exponents):
        if e:
            out = out * g ** int(e)
    return out


def _certify_torsion(elems, basis, k: int) -> int:
    if not basis:
        return 1
    s, _, v = snf([list(r) for r in basis])
    diag = [s[i][i] for i in range(min(len(s), k))]
    nontrivial = [d for d in diag if d > 1]
    if not nontrivial:
        return 1
    if len(nontrivial) > 1:
        raise PrecisionError(
            "presented torsion is not cyclic; the relation lattice is "
            "incomplete, retry at higher precision")
    w = nontrivial[0]
    j = diag.index(w)
    v_inv = invert_fraction([[Fraction(x) for x in row] for row in v])
    gen_exps = [int(v_inv[j][i]) for i in range(k)]
    t = _power_product(elems, gen_exps)
    if not (t ** w).is_one():
        raise PrecisionError("torsion certification failed")
    for q in _prime_divisors(w):
        if (t ** (w // q)).is_one():
            raise PrecisionError("torsion order certification failed")
    return w


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# exterior square

@dataclass(frozen=True)
class ExteriorSquare:
    """Smith-normal-form presentation of the exterior square of a group
    presented as Z^k modulo a relation lattice: basis e_i ^ e_j (i < j)
    modulo rows r ^ e_j for every relation r.

    invariants[c] is the diagonal entry owning Smith coordinate c (0 marks a
    free coordinate); reduce() maps a raw wedge-coordinate vector to the
    canonical representative.
    """

    rank: int
    invariants: tuple[int, ...]
    v_matrix: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.invariants)

    def reduce(self, raw) -> tuple[int, ...]:
        if len(raw) != self.dim:
            raise DomainError("wedge coordinate vector has wrong length")
        y = [sum(raw[c] * self.v_matrix[c][j] for c in range(self.dim))
             for j in range(self.dim)]
        return tuple(y[j] % self.invariants[j] if self.invariants[j] > 0 else y[j]
                     for j in range(self.dim))

    def group_invariants(self) -> tuple[list[int], int]:
        """(torsion invariants > 1, free rank) of the exterior square."""
        torsion = [d for d in self.invariants if d > 1]
        free = sum(1 for d in self.invariants if d == 0)
        return torsion, free


def _pair_basis(k: int):
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    index = {p: c for c, p in enumerate(pairs)}
    return pairs, index


@lru_cache(maxsize=256)
def exterior_square_of_lattice(k: int,
                               relation_rows: tuple[tuple[int, ...], ...]) -> ExteriorSquare:
    """Exterior square over the integers of Z^k modulo a relation lattice,
    torsion included, as Smith normal form data."""
    pairs, index = _pair_basis(k)
    dim = len(pairs)
    relators = []
    for r in relation_rows:
        for j in range(k):
            row = [0] * dim
            nonzero = False
            for i in range(k):
                if i == j or r[i] == 0:
                    continue
                if i < j:
                    row[index[(i, j)]] += r[i]
                else:
                    row[index[(j, i)]] -= r[i]
                nonzero = True
            if nonzero:
                relators.append(row)
    if not relators or dim == 0:
        return ExteriorSquare(k, tuple([0] * dim),
                              tuple(tuple(row) for row in identity(dim)))
    s, _, v = snf(relators)
    rank = sum(1 for i in range(min(len(s), dim)) if s[i][i] != 0)
    invariants = tuple(s[c][c] if c < rank else 0 for c in range(dim))
    return ExteriorSquare(k, invariants, tuple(tuple(row) for row in v))


def exterior_square(p: MultiplicativePresentation) -> ExteriorSquare:
    return exterior_square_of_lattice(p.rank, p.relation_basis)


def wedge_of_vectors(p: MultiplicativePresentation, u, v) -> WedgeClass:
    """Class of (sum u_i g_i) ^ (sum v_j g_j) written additively."""
    k = p.rank
    pairs, index = _pair_basis(k)
    raw = [0] * len(pairs)
    for (i, j), c in index.items():
        raw[c] = u[i] * v[j] - u[j] * v[i]
    sq = exterior_square(p)
    return WedgeClass(p, sq.reduce(raw))


# ---------------------------------------------------------------------------
# coordinates and the wedge map

def coordinates_of(elem: FieldElement, p: MultiplicativePresentation,
                   bound: int = DEFAULT_EXPONENT_BOUND) -> tuple[int, ...]:
    """Exponent coordinates of elem over the presentation generators.

    Coordinates are found by integer-relation search against the generators
    (exact verification, exponents capped by `bound`) and are well defined
    only up to the relation lattice, which is enough for wedge classes.
    """
    if p.rank == 0:
        if elem.is_one():
            return ()
        raise PresentationIncompleteError("empty presentation expresses only 1")
    for i, g in enumerate(p.generators):
        if g == elem:
            return tuple(1 if j == i else 0 for j in range(p.rank))
    if elem.is_one():
        return tuple([0] * p.rank)

    if not elem.is_unit():
        raise DomainError("only units have coordinates in a unit presentation")
    extended = [elem] + list(p.generators)
    candidates = _relation_candidates(extended, p.precision)
    rows = []
    for exps in candidates:
        if _power_product(extended, exps).is_one():
            rows.append(list(exps))
        else:
            raise PrecisionError(
                "coordinate search produced an unverifiable relation; "
                "retry at higher precision")
    if rows:
        h = hnf_rows(rows)
        first = h[0]
        if first[0] == 1:
            coords = tuple(-x for x in first[1:])
            if max(abs(c) for c in coords) <= bound:
                # verified: elem * prod(g^first[1:]) == 1 by exactness above
                return coords
            raise PresentationIncompleteError(
                "coordinates exceed the exponent-height bound")
    raise PresentationIncompleteError(
        f"element {elem!r} is not expressible over the supplied generators")


def steinberg_image(lam: FieldElement, p: MultiplicativePresentation,
                    bound: int = DEFAULT_EXPONENT_BOUND) -> WedgeClass:
    """Class of lambda ^ (1 - lambda) in the exterior square."""
    if not lam.is_in_rcirc():
        raise DomainError("element must be a unit with unit complement")
    u = coordinates_of(lam, p, bound)
    v = coordinates_of(lam.field.one() - lam, p, bound)
    return wedge_of_vectors(p, u, v)


def bloch_kernel(candidates, p: MultiplicativePresentation,
                 bound: int = DEFAULT_EXPONENT_BOUND) -> list[BlochElement]:
    """Basis of the lattice of integer combinations sum n_i [lambda_i] whose
    wedge images cancel exactly (torsion included)."""
    candidates = list(candidates)
    if not candidates:
        return []
    images = [steinberg_image(lam, p, bound) for lam in candidates]
    sq = exterior_square(p)
    m = len(candidates)
    dim = sq.dim

    if dim == 0:
        basis = identity(m)
    else:
        stacked = [list(img.coords) for img in images]
        torsion_rows = []
        for j, d in enumerate(sq.invariants):
            if d > 0:
                torsion_rows.append([d if c == j else 0 for c in range(dim)])
        stacked += torsion_rows
        kernel = left_kernel(stacked)
        projected = [row[:m] for row in kernel]
        basis = hnf_rows([row for row in projected if any(row)])

    out = []
    for row in basis:
        elem = BlochElement(tuple(candidates), tuple(row))
        total = [0] * dim
        for n, img in zip(row, images):
            for c in range(dim):
                total[c] += n * img.coords[c]
        if any(sq.reduce(total)):
            raise PrecisionError("kernel basis failed exact wedge verification")
        out.append(elem)
    return out


def torsion_only_kernel(candidates, p: MultiplicativePresentation,
                        bound: int = DEFAULT_EXPONENT_BOUND) -> list[BlochElement]:
    """Combinations whose wedge images vanish modulo torsion but not exactly;
    these are flagged rather than treated as kernel members."""
    candidates = list(candidates)
    if not candidates:
        return []
    images = [steinberg_image(lam, p, bound) for lam in candidates]
    sq = exterior_square(p)
    m = len(candidates)
    free_cols = [j for j, d in enumerate(sq.invariants) if d == 0]
    if free_cols:
        stacked = [[img.coords[j] for j in free_cols] for img in images]
        free_kernel = hnf_rows([r for r in left_kernel(stacked) if any(r)])
    else:
        free_kernel = identity(m)

    strict = bloch_kernel(candidates, p, bound)
    strict_basis = [list(b.multiplicities) for b in strict]
    out = []
    for row in free_kernel:
        if not in_lattice(row, strict_basis):
            out.append(BlochElement(tuple(candidates), tuple(row)))
    return out


def verify_bloch_element(x: BlochElement, p: MultiplicativePresentation,
                         bound: int = DEFAULT_EXPONENT_BOUND) -> bool:
    """Exact check of the defining kernel condition for a formal sum."""
    sq = exterior_square(p)
    total = [0] * sq.dim
    for lam, n in zip(x.support, x.multiplicities):
        img = steinberg_image(lam, p, bound)
        for c in range(sq.dim):
            total[c] += n * img.coords[c]
    return not any(sq.reduce(total))
