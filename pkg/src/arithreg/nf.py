"""Exact arithmetic in a number field K = Q[x]/(f) plus certified complex
embeddings at configurable precision.

Elements are coefficient vectors over the power basis, stored as exact
Fractions and always reduced mod the defining polynomial. The embedding set
carries the numerical side: certified roots of f, the complex-conjugation
pairing, and the (r1, r2) signature. Exact predicates (integrality,
norm = +-1) never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from mpmath import mp, mpc, mpf

from .errors import DomainError, FormatError, PrecisionError, SquarefreeError
from .intmat import det_fraction, invert_fraction, solve_fraction
from .precision import GUARD_DIGITS

Rational = Fraction


# ---------------------------------------------------------------------------
# polynomial helpers over Fraction (ascending coefficient lists)

def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_add(p, q):
    n = max(len(p), len(q))
    return _poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                       for i in range(n)])


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p, d):
    """Quotient and remainder; d need not be monic."""
    p = list(p)
    q = [Fraction(0)] * max(0, len(p) - len(d) + 1)
    lead = d[-1]
    while len(p) >= len(d) and _poly_trim(list(p)):
        if p[-1] == 0:
            p.pop()
            continue
        shift = len(p) - len(d)
        c = p[-1] / lead
        q[shift] = c
        for i in range(len(d)):
            p[shift + i] -= c * d[i]
        p.pop()
    return _poly_trim(q), _poly_trim(p)


def _poly_gcd(p, q):
    p, q = _poly_trim(list(p)), _poly_trim(list(q))
    while q:
        p, q = q, _poly_divmod(p, q)[1]
    if p:
        lead = p[-1]
        p = [c / lead for c in p]
    return p


def _poly_xgcd(p, q):
    """Extended gcd: returns (g, s, t) with s*p + t*q = g, g monic or []."""
    r0, r1 = _poly_trim(list(p)), _poly_trim(list(q))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        qq, rr = _poly_divmod(r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, _poly_add(s0, [-c for c in _poly_mul(qq, s1)])
        t0, t1 = t1, _poly_add(t0, [-c for c in _poly_mul(qq, t1)])
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return r0, s0, t0


def _resultant(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Res(f, g) via the Sylvester determinant; f monic here."""
    n, m = len(f) - 1, len(g) - 1
    if m < 0:
        return Fraction(0)
    if m == 0:
        return g[0] ** n
    size = n + m
    rows = []
    fd = list(reversed(f))  # descending
    gd = list(reversed(g))
    for i in range(m):
        rows.append([Fraction(0)] * i + fd + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + gd + [Fraction(0)] * (size - m - 1 - i))
    return det_fraction(rows)


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class NumberField:
    """K = Q[x]/(f) with a recorded integral basis for its ring of integers."""

    defining_poly: tuple[int, ...]  # ascending, monic
    integral_basis: tuple[tuple[Fraction, ...], ...]
    maximality_asserted: bool = True

    def __post_init__(self):
        f = self.defining_poly
        if len(f) < 2:
            raise FormatError("defining polynomial must have degree >= 1")
        if f[-1] != 1:
            raise FormatError("defining polynomial must be monic")
        if any(not isinstance(c, int) for c in f):
            raise FormatError("defining polynomial must have integer coefficients")
        n = self.degree
        if len(self.integral_basis) != n or any(len(r) != n for r in self.integral_basis):
            raise FormatError("integral basis must be a square matrix of size degree")
        if det_fraction([list(r) for r in self.integral_basis]) == 0:
            raise FormatError("integral basis is singular")

    @property
    def degree(self) -> int:
        return len(self.defining_poly) - 1

    @cached_property
    def _basis_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        inv = invert_fraction([list(r) for r in self.integral_basis])
        return tuple(tuple(row) for row in inv)

    @cached_property
    def _poly_fractions(self) -> list[Fraction]:
        return [Fraction(c) for c in self.defining_poly]

    def element(self, coeffs) -> "FieldElement":
        cs = [Fraction(c) for c in coeffs]
        _, rem = _poly_divmod(cs, self._poly_fractions)
        rem += [Fraction(0)] * (self.degree - len(rem))
        return FieldElement(self, tuple(rem))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([-self.defining_poly[0]])
        return self.element([0, 1])

    def integral_basis_elements(self) -> list["FieldElement"]:
        return [self.element(row) for row in self.integral_basis]

    def power_coords_to_integral(self, coeffs) -> list[Fraction]:
        """Coordinates of a power-basis vector over the integral basis."""
        return solve_fraction([list(r) for r in self.integral_basis],
                              [Fraction(c) for c in coeffs])

    def integral_coords_to_power(self, coords) -> list[Fraction]:
        out = [Fraction(0)] * self.degree
        for c, row in zip(coords, self.integral_basis):
            if c:
                for j in range(self.degree):
                    out[j] += Fraction(c) * row[j]
        return out


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coeffs: tuple[Fraction, ...]

    def _check_same(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise DomainError(f"cannot combine field element with {type(other).__name__}")
        if self.field is not other.field and self.field != other.field:
            raise DomainError("elements live in different fields")

    def __add__(self, other):
        other = self._coerce(other)
        self._check_same(other)
        return self.field.element([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._coerce(other)
        self._check_same(other)
        return self.field.element([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return self.field.element([-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        self._check_same(other)
        return self.field.element(_poly_mul(list(self.coeffs), list(other.coeffs)))

    def __truediv__(self, other):
        other = self._coerce(other)
        self._check_same(other)
        return self * other.inverse()

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __radd__(self, other):
        return self._coerce(other) + self

    def __rsub__(self, other):
        return self._coerce(other) - self

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([Fraction(other)])
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise DomainError("exponents must be integers")
        base = self if exponent >= 0 else self.inverse()
        e = abs(exponent)
        result = self.field.one()
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DomainError("division by zero")
        g, _, t = _poly_xgcd(self.field._poly_fractions, list(self.coeffs))
        if len(g) != 1:
            raise DomainError("element not invertible; defining polynomial is reducible")
        return self.field.element(t)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def norm(self) -> Fraction:
        rep = _poly_trim(list(self.coeffs))
        return _resultant(self.field._poly_fractions, rep)

    def integral_coords(self) -> list[Fraction]:
        return self.field.power_coords_to_integral(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.integral_coords())

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def is_in_rcirc(self) -> bool:
        one_minus = self.field.one() - self
        return self.is_unit() and one_minus.is_unit()

    def to_record(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        return f"FieldElement({list(map(str, self.coeffs))})"


# ---------------------------------------------------------------------------
# parsing

def _parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise FormatError(f"cannot parse rational value {s!r}")


def parse_field(record: dict) -> NumberField:
    """Build a NumberField from a field-description record.

    Record keys: "poly" (ascending integer coefficients, monic),
    "integral_basis" (optional n x n rational strings), "maximal" (bool,
    default True; echoes the caller's claim that the basis spans the full
    ring of integers).
    """
    if not isinstance(record, dict) or "poly" not in record:
        raise FormatError("field record must be a dict with a 'poly' key")
    poly = record["poly"]
    if not isinstance(poly, (list, tuple)) or len(poly) < 2:
        raise FormatError("'poly' must be a coefficient list of degree >= 1")
    coeffs = []
    for c in poly:
        if isinstance(c, bool) or not isinstance(c, int):
            raise FormatError(f"polynomial coefficient {c!r} is not an integer")
        coeffs.append(c)
    if coeffs[-1] != 1:
        raise FormatError("defining polynomial must be monic")
    n = len(coeffs) - 1

    _screen_irreducible(coeffs)

    basis = record.get("integral_basis")
    if basis is None:
        rows = tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))
    else:
        if len(basis) != n or any(len(r) != n for r in basis):
            raise FormatError("integral_basis must be an n x n matrix")
        rows = tuple(tuple(_parse_rational(x) for x in r) for r in basis)
    return NumberField(tuple(coeffs), rows, bool(record.get("maximal", True)))


def _screen_irreducible(coeffs: list[int]):
    """Cheap sanity screen; rejects only on a positive proof of reducibility.

    Checks: squarefreeness (exact gcd with derivative), rational roots
    (degree > 1 only), and hunts for a mod-p irreducibility certificate over
    small primes. An inconclusive hunt is accepted; irreducibility is the
    caller's assertion.
    """
    n = len(coeffs) - 1
    f = [Fraction(c) for c in coeffs]
    df = [Fraction(i * coeffs[i]) for i in range(1, n + 1)]
    if len(_poly_gcd(f, df)) > 1:
        raise SquarefreeError("defining polynomial has a repeated factor")
    if n > 1:
        c0 = coeffs[0]
        if c0 == 0:
            raise FormatError("defining polynomial is divisible by x")
        for d in _divisors(abs(c0)):
            for root in (d, -d):
                if _eval_int_poly(coeffs, root) == 0:
                    raise FormatError(f"defining polynomial has rational root {root}")
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            if _irreducible_mod_p(coeffs, p):
                return


def _divisors(n: int):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _eval_int_poly(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _irreducible_mod_p(coeffs: list[int], p: int) -> bool:
    """Distinct-degree irreducibility test for a monic polynomial mod p."""
    f = [c % p for c in coeffs]
    n = len(f) - 1

    def mulmod(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        # reduce mod f (monic)
        while len(out) > n:
            lead = out[-1]
            if lead:
                shift = len(out) - 1 - n
                for i in range(n + 1):
                    out[shift + i] = (out[shift + i] - lead * f[i]) % p
            out.pop()
        while out and out[-1] == 0:
            out.pop()
        return out or [0]

    def powmod_x(e):
        result = [1]
        base = [0, 1] if n > 1 else [(-f[0]) % p]
        while e:
            if e & 1:
                result = mulmod(result, base)
            base = mulmod(base, base)
            e >>= 1
        return result

    def gcd_mod(a, b):
        a, b = [c % p for c in a], [c % p for c in b]
        while any(b):
            while b and b[-1] == 0:
                b.pop()
            if not b:
                break
            inv = pow(b[-1], p - 2, p)
            bm = [c * inv % p for c in b]
            while len(a) >= len(bm) and any(a):
                while a and a[-1] == 0:
                    a.pop()
                if len(a) < len(bm):
                    break
                lead = a[-1]
                shift = len(a) - len(bm)
                for i in range(len(bm)):
                    a[shift + i] = (a[shift + i] - lead * bm[i]) % p
            a, b = b, a
        while a and a[-1] == 0:
            a.pop()
        return a

    # x^(p^n) == x mod f, and gcd(x^(p^(n/q)) - x, f) == 1 for prime q | n
    xpn = powmod_x(p ** n)
    if _poly_sub_mod(xpn, [0, 1], p):
        return False
    for q in _prime_divisors(n):
        d = n // q
        xpd = powmod_x(p ** d)
        g = gcd_mod(list(f), _poly_sub_mod(xpd, [0, 1], p) or [0])
        if len(g) != 1:
            return False
    return True


def _poly_sub_mod(a, b, p):
    m = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(m)]
    while out and out[-1] == 0:
        out.pop()
    return out


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


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatcher form of the four ring operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError(f"unknown operation {op!r}")


def norm(a: FieldElement) -> Fraction:
    return a.norm()


def is_unit(a: FieldElement) -> bool:
    return a.is_unit()


def is_in_rcirc(a: FieldElement) -> bool:
    return a.is_in_rcirc()


# ---------------------------------------------------------------------------
# embeddings

@dataclass(frozen=True)
class EmbeddingSet:
    """Certified roots of the defining polynomial with conjugation pairing.

    Ordering is deterministic: real roots first sorted by value, then complex
    roots sorted by (real part, imaginary part). Each complex pair stores
    exactly conjugate values; the representative of a pair is its member with
    positive imaginary part.
    """

    field: NumberField
    precision: int
    roots: tuple
    conjugation_pairing: tuple[int, ...]
    signature: tuple[int, int]

    @property
    def degree(self) -> int:
        return len(self.roots)

    @cached_property
    def real_indices(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.conjugation_pairing) if i == j)

    @cached_property
    def pair_representatives(self) -> tuple[int, ...]:
        reps = []
        for i, j in enumerate(self.conjugation_pairing):
            if i != j and mp.im(self.roots[i]) > 0 and i not in reps:
                reps.append(i)
        return tuple(sorted(reps))

    @cached_property
    def class_representatives(self) -> tuple[int, ...]:
        """One index per conjugacy class: all real, then one per pair."""
        return self.real_indices + self.pair_representatives

    def is_real(self, index: int) -> bool:
        return self.conjugation_pairing[index] == index

    def conjugate_index(self, index: int) -> int:
        return self.conjugation_pairing[index]

    @property
    def working_dps(self) -> int:
        return self.precision + GUARD_DIGITS


def embeddings(field: NumberField, precision: int) -> EmbeddingSet:
    """Compute all complex embeddings of the field at the given precision.

    Roots come from simultaneous (Aberth) iteration started at perturbed
    points on a circle of Cauchy-bound radius; every root is certified by a
    residual bound of 10^(-precision) (tighter than the documented
    10^(-precision + guard) contract).
    """
    if precision < 16:
        raise DomainError("precision must be at least 16 digits")
    n = field.degree
    coeffs = field.defining_poly
    wp = precision + GUARD_DIGITS

    f_frac = [Fraction(c) for c in coeffs]
    df_frac = [Fraction(i * coeffs[i]) for i in range(1, n + 1)]
    if len(_poly_gcd(f_frac, df_frac)) > 1:
        raise SquarefreeError("defining polynomial has fewer than degree-many distinct roots")

    with mp.workdps(wp):
        if n == 1:
            roots = [mpc(-coeffs[0], 0)]
        else:
            roots = _aberth(coeffs, wp)

        tol_resid = mpf(10) ** (-precision)
        fcoeffs = [mpf(c) for c in coeffs]
        dcoeffs = [mpf(i * coeffs[i]) for i in range(1, n + 1)]
        for z in roots:
            if abs(_horner(fcoeffs, z)) >= tol_resid:
                raise PrecisionError(
                    "root residual exceeds certification bound; retry at higher precision")

        # separation check
        if n > 1:
            min_sep = min(abs(roots[i] - roots[j])
                          for i in range(n) for j in range(i + 1, n))
            if min_sep < mpf(10) ** (-precision) * 1000:
                raise PrecisionError(
                    "root separation below tolerance at requested precision")
        else:
            min_sep = mpf(1)

        # conjugation pairing by nearest-conjugate matching
        pairing = [None] * n
        for i in range(n):
            dists = [abs(mp.conj(roots[i]) - roots[j]) for j in range(n)]
            j = min(range(n), key=lambda k: dists[k])
            if dists[j] > min_sep / 4:
                raise PrecisionError("conjugation matching failed; retry at higher precision")
            pairing[i] = j
        if any(pairing[pairing[i]] != i for i in range(n)):
            raise PrecisionError("conjugation pairing is not an involution")

        # canonicalize: real roots polished on the real line, pairs mirrored
        canon = [None] * n
        for i in range(n):
            if pairing[i] == i:
                canon[i] = mpc(_newton_real(fcoeffs, dcoeffs, mp.re(roots[i])), 0)
            elif canon[i] is None:
                j = pairing[i]
                rep = roots[i] if mp.im(roots[i]) > 0 else roots[j]
                rep = _newton_complex(fcoeffs, dcoeffs, rep)
                if mp.im(rep) < 0:
                    rep = mp.conj(rep)
                canon[i] = rep if mp.im(roots[i]) > 0 else mp.conj(rep)
                canon[j] = mp.conj(canon[i])

        for z in canon:
            if abs(_horner(fcoeffs, z)) >= tol_resid:
                raise PrecisionError("polished root failed certification")

        # deterministic ordering: real roots first by value, then by (re, im)
        order = sorted(range(n),
                       key=lambda i: (0 if pairing[i] == i else 1,
                                      mp.re(canon[i]), mp.im(canon[i])))
        inv_order = {old: new for new, old in enumerate(order)}
        sorted_roots = tuple(canon[i] for i in order)
        sorted_pairing = tuple(inv_order[pairing[i]] for i in order)

        r1 = sum(1 for i in range(n) if sorted_pairing[i] == i)
        r2 = (n - r1) // 2

    return EmbeddingSet(field, precision, sorted_roots, sorted_pairing, (r1, r2))


def _horner(coeffs, z):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _newton_real(fcoeffs, dcoeffs, x):
    for _ in range(8):
        fx = _horner(fcoeffs, x)
        dx = _horner(dcoeffs, x)
        if dx == 0:
            break
        x = x - fx / dx
    return x


def _newton_complex(fcoeffs, dcoeffs, z):
    for _ in range(8):
        fz = _horner(fcoeffs, z)
        dz = _horner(dcoeffs, z)
        if dz == 0:
            break
        z = z - fz / dz
    return z


def _aberth(coeffs: tuple[int, ...], wp: int) -> list:
    """Simultaneous root iteration for a monic squarefree integer polynomial."""
    n = len(coeffs) - 1
    fcoeffs = [mpf(c) for c in coeffs]
    dcoeffs = [mpf(i * coeffs[i]) for i in range(1, n + 1)]
    radius = 1 + max(abs(mpf(c)) for c in coeffs[:-1])
    # perturbed roots-of-unity start; the fixed offset breaks symmetry
    z = [radius * mp.exp(mpc(0, 2 * mp.pi * (k + mpf("0.397")) / n + mpf("0.7")))
         for k in range(n)]
    target = mpf(10) ** (-(wp - 3))
    for _ in range(1000):
        max_step = mpf(0)
        for i in range(n):
            zi = z[i]
            fz = _horner(fcoeffs, zi)
            dz = _horner(dcoeffs, zi)
            s = mpc(0)
            for j in range(n):
                if j != i:
                    s += 1 / (zi - z[j])
            denom = dz - fz * s
            if denom == 0:
                z[i] = zi + mpf("0.5") * radius / n
                max_step = radius
                continue
            step = fz / denom
            z[i] = zi - step
            scale = 1 + abs(zi)
            rel = abs(step) / scale
            if rel > max_step:
                max_step = rel
        if max_step < target:
            return z
    raise PrecisionError("root iteration failed to converge")


def evaluate(a: FieldElement, e: EmbeddingSet, index: int):
    """Numerical value of a at the indexed embedding (Horner).

    Returns an exactly-real mpf-backed value at real embeddings.
    """
    if index < 0 or index >= e.degree:
        raise DomainError(f"embedding index {index} out of range")
    if a.field != e.field:
        raise DomainError("element and embedding set belong to different fields")
    with mp.workdps(e.working_dps):
        if e.is_real(index):
            x = mp.re(e.roots[index])
            acc = mpf(0)
            for c in reversed(a.coeffs):
                acc = acc * x + mpf(c.numerator) / mpf(c.denominator)
            return mpc(acc, 0)
        zroot = e.roots[index]
        acc = mpc(0)
        for c in reversed(a.coeffs):
            acc = acc * zroot + mpf(c.numerator) / mpf(c.denominator)
        return acc
