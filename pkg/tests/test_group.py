# coding: utf-8

import pytest
from assertpy import assert_that

from zslab.errors import NotPrime, BadRank, CoordOutOfRange, DimensionMismatch, SingularBasis, RankUnsupported
from zslab.group import (
    GroupSpec, SubgroupLine, make_group, make_basis, change_basis, standard_basis, projections, recombine,
    add, sub, neg, scalar_mul, element_op, order_p_subgroups, characters, character_value, character_level,
    automorphisms, apply_matrix, CharacterId,
)
from zslab.sequence import Sequence


class GroupSpecTestCase:

    @pytest.mark.parametrize("p, r, error", [
        (4, 2, NotPrime),
        (1, 1, NotPrime),
        (3, 0, BadRank),
    ])
    def test_make_group_rejects(self, p, r, error):
        with pytest.raises(error):
            make_group(p, r)

    def test_elements_in_index_order(self):
        spec = make_group(2, 2)
        assert_that(list(spec.elements())).is_equal_to([(0, 0), (0, 1), (1, 0), (1, 1)])
        assert_that(list(spec.nonzero_elements())).does_not_contain((0, 0))

    def test_index_and_element_at_are_inverse(self):
        spec = make_group(3, 2)
        for i, g in enumerate(spec.elements()):
            assert_that(spec.index(g), str(g)).is_equal_to(i)
            assert_that(spec.element_at(i)).is_equal_to(g)

    def test_check(self):
        spec = make_group(3, 2)
        assert_that(spec.check([2, 1])).is_equal_to((2, 1))
        with pytest.raises(CoordOutOfRange):
            spec.check((3, 0))
        with pytest.raises(DimensionMismatch):
            spec.check((1,))


class ElementOpsTestCase:

    def setup_class(self):
        self.spec = make_group(3, 2)

    def test_add_sub_neg(self):
        assert_that(add(self.spec, (2, 1), (2, 2))).is_equal_to((1, 0))
        assert_that(sub(self.spec, (0, 0), (1, 2))).is_equal_to((2, 1))
        assert_that(neg(self.spec, (1, 2))).is_equal_to((2, 1))

    def test_scalar_mul_reduces_negative_factor(self):
        assert_that(scalar_mul(self.spec, -1, (1, 2))).is_equal_to((2, 1))
        assert_that(scalar_mul(self.spec, 3, (1, 2))).is_equal_to((0, 0))

    def test_element_op_dispatch(self):
        assert_that(element_op(self.spec, "add", (1, 1), (1, 1))).is_equal_to((2, 2))
        assert_that(element_op(self.spec, "neg", (1, 0))).is_equal_to((2, 0))
        with pytest.raises(ValueError):
            element_op(self.spec, "mul", (1, 0), (1, 0))

    def test_operand_dimension(self):
        with pytest.raises(DimensionMismatch):
            add(self.spec, (1, 0), (1,))


class BasisTestCase:

    def test_singular_basis(self):
        spec = make_group(3, 2)
        with pytest.raises(SingularBasis):
            make_basis(spec, [(1, 1), (2, 2)])

    def test_projections_and_recombine_are_inverse(self):
        spec = make_group(5, 2)
        basis = make_basis(spec, [(1, 1), (0, 1)])
        for g in spec.elements():
            coeffs = projections(basis, g)
            assert_that(recombine(basis, coeffs), str(g)).is_equal_to(g)

    def test_projection_of_basis_vectors(self):
        spec = make_group(7, 2)
        basis = change_basis(spec, (2, 3), (1, 4))
        assert_that(projections(basis, (2, 3))).is_equal_to((1, 0))
        assert_that(projections(basis, (1, 4))).is_equal_to((0, 1))

    def test_standard_basis(self):
        spec = make_group(5, 3)
        basis = standard_basis(spec)
        assert_that(basis.is_standard()).is_true()
        assert_that(projections(basis, (1, 2, 3))).is_equal_to((1, 2, 3))

    def test_change_basis_needs_rank_2(self):
        with pytest.raises(RankUnsupported):
            change_basis(make_group(3, 3), (1, 0, 0), (0, 1, 0))


class SubgroupLineTestCase:

    def setup_class(self):
        self.spec = make_group(5, 2)

    def test_direction_normalized(self):
        assert_that(SubgroupLine(self.spec, (2, 4)).direction).is_equal_to((1, 2))
        assert_that(SubgroupLine(self.spec, (0, 3)).direction).is_equal_to((0, 1))
        with pytest.raises(ValueError):
            SubgroupLine(self.spec, (0, 0))

    def test_contains_multiples_only(self):
        line = SubgroupLine(self.spec, (1, 2))
        for n in range(5):
            assert_that(line.contains((n, 2 * n % 5))).is_true()
        assert_that(line.contains((0, 1))).is_false()
        assert_that(line.elements()).is_length(5)

    def test_coset_index_agrees_on_cosets(self):
        line = SubgroupLine(self.spec, (1, 3))
        g = (2, 4)
        for h in line.elements():
            assert_that(line.coset_index(add(self.spec, g, h))).is_equal_to(line.coset_index(g))
        assert_that(line.coset_index(line.coset_representative(3))).is_equal_to(3)

    def test_complement_completes_basis(self):
        for line in order_p_subgroups(self.spec):
            basis = make_basis(self.spec, [line.complement(), line.direction])
            assert_that(basis.vectors[1]).is_equal_to(line.direction)

    def test_order_p_subgroups(self):
        lines = order_p_subgroups(self.spec)
        assert_that(lines).is_length(6)
        assert_that(set(lines)).is_length(6)


class CharacterTestCase:

    def test_character_count(self):
        assert_that(list(characters(make_group(3, 2)))).is_length(9)

    def test_values(self):
        spec = make_group(2, 2)
        assert_that(character_value(spec, CharacterId((0, 0)), (1, 1))).is_equal_to(1)
        assert_that(character_value(spec, CharacterId((1, 0)), (1, 1))).is_equal_to(-1)
        spec = make_group(5, 2)
        chi = CharacterId((1, 2))
        assert_that(character_level(spec, chi, (3, 4))).is_equal_to(1)
        assert_that(abs(character_value(spec, chi, (3, 4)))).is_close_to(1.0, 1e-12)


class AutomorphismTestCase:

    @pytest.mark.parametrize("p, count", [(2, 6), (3, 48)])
    def test_gl2_order(self, p, count):
        assert_that(automorphisms(make_group(p, 2))).is_length(count)

    def test_commutes_with_sum(self):
        spec = make_group(3, 2)
        seq = Sequence.from_elements(spec, [(1, 0), (1, 0), (0, 1), (2, 2)])
        for m in automorphisms(spec):
            image = seq.map(lambda g: apply_matrix(spec, m, g))
            assert_that(image.sigma).is_equal_to(apply_matrix(spec, m, seq.sigma))

    def test_needs_rank_2(self):
        with pytest.raises(RankUnsupported):
            automorphisms(GroupSpec(3, 1))
