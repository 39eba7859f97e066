"""
Test named groups, matrix actions, the fixed-point-free search and the example families
"""

import numpy as np
import pytest

from cn_groups.constructors import (
    MatrixAction,
    VectorSpace,
    build_example1,
    build_semidirect,
    certify_fpf,
    cyclic_group,
    example1,
    example2,
    example3,
    example4_a5,
    exclude_two_elements,
    fixes_only_zero,
    fpf_search,
    group_from_name,
    heisenberg_fpf_instance,
    hurwitz_unit_matrices,
    negative_frobenius_sl23,
    symmetric_group,
)
from cn_groups.errors import ConstructionError, DegreeBoundError, InputError, SearchExhaustedError
from cn_groups.recognition import is_sl23
from cn_groups.structure import is_nilpotent


@pytest.mark.unit
class TestNamedGroups:
    """Test group names and their orders"""

    @pytest.mark.parametrize("name, order", [
        ("trivial", 1),
        ("C7", 7),
        ("S4", 24),
        ("A5", 60),
        ("D10", 10),
        ("Dic3", 12),
        ("Q16", 16),
        ("C3xQ8", 24),
        ("SL(2,3)", 24),
        ("GL23", 48),
    ])
    def test_group_from_name(self, name, order):
        """Test each name resolves to a group of the right order"""
        assert group_from_name(name).order() == order

    @pytest.mark.parametrize("name", ["D7", "X5", "", "Q12"])
    def test_bad_names(self, name):
        """Test unknown or malformed names are input errors"""
        with pytest.raises(InputError):
            group_from_name(name)


@pytest.mark.unit
class TestMatrices:
    """Test vector numbering and matrix helpers"""

    def test_little_endian_index(self):
        """Test (1, 2) in (Z/3)^2 is point 1 + 2*3"""
        space = VectorSpace(2, 3)
        assert space.index([1, 2]) == 7
        assert space.vectors[7].tolist() == [1, 2]

    def test_degree_bound(self, bounds):
        """Test spaces beyond max_degree are refused"""
        bounds(max_degree=100)
        with pytest.raises(DegreeBoundError) as info:
            VectorSpace(3, 5)
        assert info.value.parameter == "max_degree"

    def test_linear_map_fixes_zero(self):
        """Test every linear map fixes point 0"""
        space = VectorSpace(2, 5)
        g = space.linear(np.array([[2, 1], [1, 1]], dtype=np.int64))
        assert g(0) == 0

    def test_fixes_only_zero(self):
        """Test -I on (Z/5)^2 fixes only zero and I does not"""
        assert fixes_only_zero(np.array([[4, 0], [0, 4]], dtype=np.int64), 5)
        assert not fixes_only_zero(np.eye(2, dtype=np.int64), 5)

    def test_singular_matrix_rejected(self):
        """Test a singular matrix cannot define an action"""
        with pytest.raises(InputError):
            MatrixAction(2, 5, (np.array([[1, 2], [2, 4]], dtype=np.int64),))


@pytest.mark.unit
class TestFpfSearch:
    """Test the fixed-point-free action search"""

    def test_inversion_on_z3(self):
        """Test C2 acts on Z/3 by inversion"""
        action = fpf_search(cyclic_group(2), 1, 3)
        assert action is not None
        assert [M.tolist() for M in action.matrices] == [[[2]]]

    def test_c3_on_klein_four(self):
        """Test C3 acts fixed-point-freely on (Z/2)^2"""
        C3 = cyclic_group(3)
        action = fpf_search(C3, 2, 2)
        assert action is not None
        assert certify_fpf(action, C3)

    def test_s3_has_no_fpf_action(self):
        """Test S3 has no fixed-point-free action on (Z/5)^2"""
        assert fpf_search(symmetric_group(3), 2, 5) is None

    def test_excluded_involutions(self):
        """Test S3 acts on (Z/2)^2 with fixed-point-free 3-elements"""
        S3 = symmetric_group(3)
        action = fpf_search(S3, 2, 2, exclude=exclude_two_elements)
        assert action is not None
        assert certify_fpf(action, S3, exclude_two_elements)
        assert not certify_fpf(action, S3)

    def test_budget_exhausted(self):
        """Test a tiny budget raises instead of returning None"""
        with pytest.raises(SearchExhaustedError) as info:
            fpf_search(cyclic_group(3), 2, 2, budget=5)
        assert info.value.parameter == "search_budget"


@pytest.mark.unit
class TestSemidirect:
    """Test semidirect products and their point sets"""

    def test_faithful_product(self):
        """Test Z/5 x| C4 lives on the 5 points of Z/5"""
        action = MatrixAction(1, 5, (np.array([[2]], dtype=np.int64),))
        sd = build_semidirect(action, cyclic_group(4))
        assert sd.faithful
        assert sd.group.degree == 5
        assert sd.group.order() == sd.order() == 20

    def test_unfaithful_product_appends_points(self):
        """Test a trivial action adds K's own points"""
        action = MatrixAction(1, 5, (np.array([[1]], dtype=np.int64),))
        sd = build_semidirect(action, cyclic_group(2))
        assert not sd.faithful
        assert sd.group.degree == 7
        assert sd.group.order() == 10

    def test_translations_normal(self):
        """Test the translation subgroup has order |V|"""
        action = MatrixAction(1, 7, (np.array([[6]], dtype=np.int64),))
        sd = build_semidirect(action, cyclic_group(2))
        assert sd.translations.order() == 7
        assert sd.complement.order() == 2

    def test_generator_count_mismatch(self):
        """Test one matrix per acting generator is required"""
        action = MatrixAction(1, 5, (np.array([[2]], dtype=np.int64),) * 2)
        with pytest.raises(InputError):
            build_semidirect(action, cyclic_group(4))


@pytest.mark.unit
class TestExampleInputs:
    """Test the example families reject bad parameters"""

    def test_example1_p_divides_order(self):
        """Test p dividing |K| is refused"""
        with pytest.raises(InputError):
            example1(cyclic_group(4), 2)

    def test_example1_non_prime(self):
        """Test a composite modulus is refused"""
        with pytest.raises(InputError):
            example1(cyclic_group(4), 9)

    def test_example1_wrong_shape(self):
        """Test K must be cyclic or odd cyclic times quaternion"""
        with pytest.raises(InputError):
            example1(symmetric_group(3), 5)

    def test_example2_even_m(self):
        """Test even m is refused"""
        with pytest.raises(InputError):
            example2(4, 2)

    def test_negative_frobenius_small_p(self):
        """Test p = 3 divides |SL(2,3)|"""
        with pytest.raises(InputError):
            negative_frobenius_sl23(3)

    @pytest.mark.parametrize("p, n", [(3, 1), (2, 1), (9, 1), (5, 0)])
    def test_example3_parameters(self, p, n):
        """Test example3 parameter checks"""
        with pytest.raises(InputError):
            example3(p, n)

    def test_example3_zero_vector(self):
        """Test v must be nonzero in V_2"""
        with pytest.raises(InputError):
            example3(5, 1, v=[2, 0, 0, 0])

    def test_example2_impossible(self):
        """Test D6 has no action on (Z/2)^1 with fixed-point-free 3-elements"""
        with pytest.raises(ConstructionError):
            example2(3, 1)


@pytest.mark.unit
class TestSmallFamilies:
    """Test family members small enough for the fast suite"""

    def test_example1_least_dimension(self):
        """Test C4 over Z/5 needs one dimension and C3 over Z/2 needs two"""
        assert build_example1(cyclic_group(4), 5).action.dim == 1
        assert build_example1(cyclic_group(3), 2).action.dim == 2

    def test_example1_name(self):
        """Test generated names record K and p"""
        assert example1(cyclic_group(4), 5).name == "example1(C4,5)"

    def test_example2_order(self):
        """Test example2(3, 2) has order 4 * 6"""
        assert example2(3, 2).order() == 24

    def test_hurwitz_units(self):
        """Test the 24 unit matrices are distinct and a, d have orders 4 and 3"""
        units = hurwitz_unit_matrices()
        assert len(units.matrices) == 24
        assert len({M.tobytes() for M in units.matrices}) == 24
        identity = np.eye(4, dtype=np.int64)
        assert np.array_equal(np.linalg.matrix_power(units.a, 4), identity)
        assert not np.array_equal(np.linalg.matrix_power(units.a, 2), identity)
        assert np.array_equal(np.linalg.matrix_power(units.d, 3), identity)
        assert all(round(np.linalg.det(M)) == 1 for M in units.matrices)

    def test_heisenberg_instance(self):
        """Test the Heisenberg instance orders and nilpotency"""
        ambient, target, actors = heisenberg_fpf_instance(7)
        assert ambient.order() == 1029
        assert target.order() == 343
        assert actors.order() == 3
        assert is_nilpotent(target)

    def test_heisenberg_needs_cube_roots(self):
        """Test Z/5 has no element of order 3"""
        with pytest.raises(InputError):
            heisenberg_fpf_instance(5)


@pytest.mark.slow
class TestLargerFamilies:
    """Test family orders that need bigger stabilizer chains"""

    def test_example4_a5(self):
        """Test |(Z/2)^4 x| A5| = 960"""
        assert example4_a5().order() == 960

    def test_negative_frobenius(self):
        """Test |(Z/7)^2 x| SL(2,3)| = 1176"""
        assert negative_frobenius_sl23(7).order() == 1176

    def test_example1_c3_times_q8(self):
        """Test C3 x Q8 over Z/13 uses dimension 2

        This order-4056 member is the one the catalog classifies as
        CyclicOddTimesQuaternion.
        """
        sd = build_example1(group_from_name("C3xQ8"), 13)
        assert sd.action.dim == 2
        assert sd.group.order() == 4056

    def test_example1_two_copies(self):
        """Test the doubled module has order 13^4 * 24

        Only the order is checked. Classifying this 685,464-element group needs
        element enumeration beyond what the suite can afford, so the case split
        for C3 x Q8 over Z/13 is asserted on the dimension-2 member instead.
        """
        sd = build_example1(group_from_name("C3xQ8"), 13, copies=2)
        assert sd.order() == 13 ** 4 * 24
        assert sd.space.size == 13 ** 4

    def test_example3(self):
        """Test example3(5, 1) has G/N = SL(2,3) with N built on V_5"""
        result = example3(5, 1)
        assert result.quotient_is_sl23
        assert is_sl23(result.quotient)
        assert 5 in result.normal_primes
        assert set(result.normal_primes) <= {2, 5}
        assert result.group.order() == result.normal.order() * 24
        assert result.is_cn is None
