import random

import pytest

from arithreg.errors import DomainError, PresentationIncompleteError
from arithreg.intmat import in_lattice, invariant_factors_by_minors
from arithreg.relations import (BlochElement, bloch_kernel, coordinates_of,
                                exterior_square, exterior_square_of_lattice,
                                relation_lattice, steinberg_image,
                                torsion_only_kernel, verify_bloch_element,
                                wedge_of_vectors)


@pytest.fixture(scope="module")
def cubic_setup(fields):
    K = fields["cubic"]
    lam = K.gen()
    gens = [K.element([-1]), lam, K.one() - lam]
    return K, lam, relation_lattice(gens, 50)


class TestRelationLattice:
    def test_minus_one(self, fields):
        p = relation_lattice([fields["Q"].element([-1])], 50)
        assert p.relation_basis == ((2,),)
        assert p.torsion_order == 2

    def test_inverse_pair_sqrt2(self, fields):
        K = fields["Qsqrt2"]
        s = K.gen()
        p = relation_lattice([K.one() + s, s - K.one()], 50)
        assert p.relation_basis == ((1, 1),)
        assert p.torsion_order == 1

    def test_phi_family(self, fields):
        # 1 - phi = -1/phi, so (1, 1, .) relations appear
        K = fields["Qphi"]
        phi = K.gen()
        p = relation_lattice([phi, K.one() - phi, K.element([-1])], 50)
        assert any(r[0] == 1 and r[1] == 1 for r in p.relation_basis)
        assert p.torsion_order == 2

    def test_rows_verify_exactly(self, cubic_setup):
        _, _, p = cubic_setup
        for row in p.relation_basis:
            assert p.power_product(row).is_one()

    def test_empty(self):
        p = relation_lattice([], 50)
        assert p.relation_basis == ()
        assert p.torsion_order == 1

    def test_dependent_generator_stress(self, fields):
        # four generators spanning a rank-1-plus-torsion group: the relation
        # lattice has rank 3 and every row passes exact verification
        K = fields["Qsqrt2"]
        u = K.one() + K.gen()
        gens = [K.element([-1]), u, u ** 2, -(u ** 3)]
        p = relation_lattice(gens, 50)
        assert len(p.relation_basis) == 3
        assert p.torsion_order == 2
        for row in p.relation_basis:
            assert p.power_product(row).is_one()
        # the presented group is Z/2 x Z: exterior square is Z/2
        assert exterior_square(p).group_invariants() == ([2], 0)

    def test_non_unit_rejected(self, fields):
        with pytest.raises(DomainError):
            relation_lattice([fields["Q"].element([2])], 50)


class TestExteriorSquare:
    def test_rank_one_vanishes(self, fields):
        K = fields["Qphi"]
        p = relation_lattice([K.one() + K.gen()], 50)  # infinite-order unit
        assert exterior_square(p).group_invariants() == ([], 0)

    def test_free_rank_two(self):
        sq = exterior_square_of_lattice(2, ())
        assert sq.group_invariants() == ([], 1)

    def test_z2_cross_z(self, fields):
        # presentation <-1, phi>: Lambda^2 = Z/2, SNF vs brute-force minors
        K = fields["Qphi"]
        p = relation_lattice([K.element([-1]), K.gen()], 50)
        sq = exterior_square(p)
        assert sq.group_invariants() == ([2], 0)

    def test_matches_minors_oracle_on_random_lattices(self):
        rng = random.Random(31)
        for _ in range(40):
            k = rng.randint(1, 3)
            m = rng.randint(0, 3)
            rows = tuple(tuple(rng.randint(-6, 6) for _ in range(k)) for _ in range(m))
            sq = exterior_square_of_lattice(k, rows)
            # independent expansion + minors-gcd invariant factors
            pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
            relators = []
            for r in rows:
                for j in range(k):
                    row = [0] * len(pairs)
                    for i in range(k):
                        if i == j or r[i] == 0:
                            continue
                        if i < j:
                            row[pairs.index((i, j))] += r[i]
                        else:
                            row[pairs.index((j, i))] -= r[i]
                    if any(row):
                        relators.append(row)
            mine = sorted(d for d in sq.invariants if d > 0)
            oracle = sorted(invariant_factors_by_minors(relators)) if relators else []
            assert mine == oracle

    def test_wedge_bilinearity_and_antisymmetry(self, cubic_setup):
        _, _, p = cubic_setup
        rng = random.Random(32)
        k = p.rank
        for _ in range(50):
            u = [rng.randint(-5, 5) for _ in range(k)]
            u2 = [rng.randint(-5, 5) for _ in range(k)]
            v = [rng.randint(-5, 5) for _ in range(k)]
            left = wedge_of_vectors(p, [a + b for a, b in zip(u, u2)], v)
            right = wedge_of_vectors(p, u, v) + wedge_of_vectors(p, u2, v)
            assert left.coords == right.coords
            assert (wedge_of_vectors(p, u, v) + wedge_of_vectors(p, v, u)).is_zero()
            assert wedge_of_vectors(p, u, u).is_zero()


class TestSteinberg:
    def test_collinear_coordinates_give_zero(self, fields):
        # 1 - phi^-2 = phi^-1, so lam and 1-lam are powers of one generator
        # and their wedge vanishes even in a presentation with extra room
        K = fields["Qphi"]
        phi = K.gen()
        lam = phi ** -2
        assert (K.one() - lam) == phi ** -1
        p = relation_lattice([K.element([-1]), phi], 50)
        img = steinberg_image(lam, p)
        assert img.is_zero()

    def test_phi_hits_torsion(self, fields):
        K = fields["Qphi"]
        p = relation_lattice([K.element([-1]), K.gen()], 50)
        img = steinberg_image(K.gen(), p)
        assert not img.is_zero()
        assert img.scale(2).is_zero()

    def test_cubic_nonzero_without_full_relations(self, cubic_setup):
        K, lam, p = cubic_setup
        img = steinberg_image(lam, p)
        # with the full relation lattice the Steinberg class of lam generates
        # the Z/2 part
        assert exterior_square(p).group_invariants()[0] == [2]

    def test_cubic_infinite_order_absent_relations(self, fields):
        # a hand-built presentation with no relations: the class of
        # lam ^ (1-lam) is free of infinite order
        from arithreg.relations import MultiplicativePresentation
        K = fields["cubic"]
        lam = K.gen()
        p0 = MultiplicativePresentation(
            (K.element([-1]), lam, K.one() - lam), (), 1, 50)
        img = steinberg_image(lam, p0)
        assert not img.is_zero()
        assert exterior_square(p0).group_invariants() == ([], 3)
        for n in (2, 3, 7):
            assert not img.scale(n).is_zero()

    def test_presentation_incomplete(self, fields):
        K = fields["Qphi"]
        phi = K.gen()
        p = relation_lattice([K.element([-1])], 50)  # phi not in the span
        with pytest.raises(PresentationIncompleteError):
            coordinates_of(phi, p)

    def test_non_rcirc_rejected(self, fields, cubic_setup):
        _, _, p = cubic_setup
        K = fields["cubic"]
        with pytest.raises(DomainError):
            steinberg_image(K.element([2]), p)


class TestBlochKernel:
    def test_empty(self, cubic_setup):
        _, _, p = cubic_setup
        assert bloch_kernel([], p) == []

    def test_shifted_root_family_contains_n_1(self, fields):
        from arithreg.nf import parse_field
        for n in (2, 3, 4, 5):
            K = parse_field({"poly": [1, -1] + [0] * (n - 1) + [1]})
            lam = K.gen()
            gens = [K.element([-1]), lam, K.one() - lam]
            p = relation_lattice(gens, 50)
            cands = [lam, (K.one() - lam).inverse()]
            basis = [list(b.multiplicities) for b in bloch_kernel(cands, p)]
            assert in_lattice([n, 1], basis)

    def test_phi_kernel_is_even_multiples(self, fields):
        K = fields["Qphi"]
        p = relation_lattice([K.element([-1]), K.gen()], 50)
        basis = bloch_kernel([K.gen()], p)
        assert [list(b.multiplicities) for b in basis] == [[2]]

    def test_kernel_pushes_to_zero(self, cubic_setup):
        K, lam, p = cubic_setup
        cands = [lam, (K.one() - lam).inverse()]
        for b in bloch_kernel(cands, p):
            assert verify_bloch_element(b, p)

    def test_torsion_only_flagged(self, fields):
        K = fields["Qphi"]
        p = relation_lattice([K.element([-1]), K.gen()], 50)
        flagged = torsion_only_kernel([K.gen()], p)
        assert [list(b.multiplicities) for b in flagged] == [[1]]

    def test_record_roundtrip(self, cubic_setup):
        K, lam, p = cubic_setup
        x = BlochElement((lam,), (2,))
        rec = x.to_record()
        assert rec["multiplicities"] == [2]
        assert rec["support"][0]["coeffs"] == ["0", "1", "0"]
