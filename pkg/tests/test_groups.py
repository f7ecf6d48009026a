import pytest

from src.engine.errors import InadmissibleInputError, NotASubgroupError, ResourceLimitError
from src.engine.groups import (
    SUITES, CosetSpace, FixtureBuilder, Permutation, closure, covering_condition, power_orbit_law, product_orbit_law,
    projective_line_map, subdirect_orbit_law, subgroup_orbits_on_cosets
)
from src.engine.models.fixture import profile_from_json
from src.engine.models.profile import OrbitProfile

PRODUCT_SUITES = ("a5xa5", "a6xa6")

PRODUCT_FIXTURES = [
    pytest.param(record.name, marks=pytest.mark.slow) if record.suite == "a6xa6" else record.name
    for record in FixtureBuilder().records
    if record.suite in PRODUCT_SUITES
]


class TestPermutation:
    """Parsing and arithmetic of permutations"""

    def test_parse_cycles(self):
        assert Permutation.from_cycles("(0 1 2)", 3).images == (1, 2, 0)
        assert Permutation.from_cycles("()", 4).is_identity
        assert Permutation.parse([1, 0, 2], 3) == Permutation.from_cycles("(0 1)", 3)

    def test_product_applies_left_factor_first(self):
        p = Permutation.from_cycles("(0 1)", 3)
        q = Permutation.from_cycles("(1 2)", 3)
        assert str(p * q) == "(0 2 1)"
        assert (p * q)(0) == q(p(0))

    def test_inverse(self):
        g = Permutation.from_cycles("(0 1 2 3 4)", 5)
        assert (g * g.inverse()).is_identity
        assert str(Permutation.from_cycles("(0 1 2)", 3).inverse()) == "(0 2 1)"

    def test_direct_sum(self):
        g = Permutation.from_cycles("(0 1)", 2).direct_sum(Permutation.from_cycles("(0 1 2)", 3))
        assert str(g) == "(0 1)(2 3 4)"

    @pytest.mark.parametrize("text, degree", [("(0 1", 3), ("(0 5)", 3), ("0 1", 3)])
    def test_rejects_bad_cycles(self, text, degree):
        with pytest.raises(InadmissibleInputError):
            Permutation.from_cycles(text, degree)

    def test_rejects_non_permutation(self):
        with pytest.raises(InadmissibleInputError):
            Permutation((0, 0, 1))
        with pytest.raises(InadmissibleInputError):
            Permutation.parse([1, 0], 3)


class TestGroups:
    """Closure, cosets and catalog construction"""

    @pytest.mark.parametrize("name, order", [
        ("A5", 60), ("A6", 360), ("A5^2", 3600), ("diag_A5", 60), ("half_S3xD10", 30),
        ("A8", 20160), ("AGL(3,2)", 1344), ("C15_in_A8", 15), ("L2(7)", 168), ("L2(31)", 14880),
    ])
    def test_catalog_orders(self, fixture_builder, name, order):
        assert fixture_builder.group(name).order == order

    def test_closure_cap(self):
        gens = [Permutation.from_cycles("(0 1 2)", 5), Permutation.from_cycles("(0 1 2 3 4)", 5)]
        with pytest.raises(ResourceLimitError):
            closure(gens, cap=10)

    def test_closure_rejects_mixed_degrees(self):
        with pytest.raises(InadmissibleInputError):
            closure([Permutation.identity(3), Permutation.identity(4)])

    def test_trivial_group(self):
        assert closure([], degree=5).order == 1

    def test_transitivity(self, fixture_builder):
        assert fixture_builder.group("A5").is_transitive
        assert not fixture_builder.group("A3_in_A5").is_transitive

    def test_coset_space(self, fixture_builder):
        space = CosetSpace(fixture_builder.group("A5"), fixture_builder.group("D10_in_A5"))
        assert len(space) == 6
        assert space.cosets[0] == space.canonical(Permutation.identity(5))

    def test_non_subgroup(self, fixture_builder):
        a5 = fixture_builder.group("A5")
        with pytest.raises(NotASubgroupError):
            CosetSpace(a5, fixture_builder.group("D10_in_A6"))
        with pytest.raises(NotASubgroupError):
            subgroup_orbits_on_cosets(a5, fixture_builder.group("A4_in_A5"), fixture_builder.group("A6"))

    def test_projective_line_inversion(self):
        invert = projective_line_map(7, {"type": "invert"})
        assert invert(0) == 7
        assert invert(7) == 0
        assert invert(1) == 6

    def test_unknown_projective_map(self):
        with pytest.raises(InadmissibleInputError):
            projective_line_map(7, {"type": "frobenius"})


class TestOrbitLaws:
    """Orbit profiles of products and subdirect subgroups"""

    def test_product_law(self):
        law = product_orbit_law([OrbitProfile.from_counts({3: 1, 93: 1}), OrbitProfile.from_counts({5: 1, 155: 1})])
        assert law == OrbitProfile.from_counts({15: 1, 465: 2, 14415: 1})

    def test_product_law_matches_row_28(self, profile_engine):
        """The degree-15 * 32^2 profile of the L2(31) row is the product of the r = 3 and r = 5 laws"""
        law = product_orbit_law([OrbitProfile.from_counts({3: 1, 93: 1}), OrbitProfile.from_counts({5: 1, 155: 1})])
        _, profile = next(profile_engine.enumerate_profiles(profile_engine.row(28), 15 * 32 ** 2))
        assert profile == law

    def test_power_law(self):
        assert power_orbit_law(OrbitProfile.from_counts({1: 1, 5: 1}), 2) == OrbitProfile.from_counts(
            {1: 1, 5: 2, 25: 1}
        )

    def test_subdirect_law(self):
        base = product_orbit_law([OrbitProfile.from_counts({5: 2}), OrbitProfile.from_counts({1: 1, 5: 1})])
        assert subdirect_orbit_law(base, 2) == OrbitProfile.from_counts({10: 2, 50: 2})

    def test_guards(self):
        with pytest.raises(InadmissibleInputError):
            product_orbit_law([])
        with pytest.raises(InadmissibleInputError):
            power_orbit_law(OrbitProfile.from_counts({1: 1}), 0)
        with pytest.raises(InadmissibleInputError):
            subdirect_orbit_law(OrbitProfile.from_counts({1: 1}), 0)


class TestProductFixtures:
    """Brute force on G x G against the product of the factor profiles"""

    def test_every_pair_of_base_fixtures_is_present(self, fixture_builder):
        products = [record for record in fixture_builder.records if record.suite in PRODUCT_SUITES]
        assert len(products) == 30
        assert all(record.law is not None and record.law.index == 1 for record in products)
        assert "A6^2" in fixture_builder.catalog.groups

    def test_expected_profile_is_the_product_law(self, fixture_builder):
        record = fixture_builder.record("a5xa5_a3-s3")
        assert record.subgroup == "A3_in_A5 x S3_in_A5"
        assert record.group == "A5^2"
        assert record.expected == {"50": 4}
        assert fixture_builder.record("a5xa5_c5-c5").expected == {"4": 1, "20": 2, "100": 1}

    @pytest.mark.parametrize("name", PRODUCT_FIXTURES)
    def test_brute_force_matches_product_law(self, fixture_builder, name):
        record = fixture_builder.record(name)
        group, subgroup, acting = fixture_builder.build_fixture(name)
        observed = subgroup_orbits_on_cosets(group, subgroup, acting)
        assert observed == product_orbit_law(record.law.profiles())
        assert observed.degree == group.order // subgroup.order

    def test_evaluate_reports_the_law(self, fixture_builder):
        outcome = fixture_builder.evaluate("a5xa5_d10-d10")
        assert outcome.passed
        assert outcome.law == outcome.observed == {"1": 1, "5": 2, "25": 1}

class TestFixtureSuites:
    """Brute force against the catalog"""

    @pytest.mark.slow
    @pytest.mark.parametrize("suite", SUITES)
    def test_every_fixture_matches(self, fixture_builder, suite):
        outcomes = fixture_builder.run_suite(suite)
        assert outcomes
        for outcome in outcomes:
            assert outcome.passed, f"{outcome.name}: expected {outcome.expected}, observed {outcome.observed}"

    def test_c5_printed_profile_is_flagged(self, fixture_builder):
        outcome = fixture_builder.evaluate("a5_c5")
        assert outcome.passed
        assert outcome.observed == {"2": 1, "10": 1}
        assert len(outcome.notes) == 1
        assert "disagrees" in outcome.notes[0]

    def test_subdirect_law_agrees_with_brute_force(self, fixture_builder):
        outcome = fixture_builder.evaluate("a5sq_subdirect_half_s3xd10")
        assert outcome.law_matched is True
        assert outcome.law == {"10": 2, "50": 2}
        assert outcome.notes

    def test_singer_cycle_orbits(self, fixture_builder):
        assert profile_from_json(fixture_builder.evaluate("a8_singer_a7").observed) == OrbitProfile.from_counts(
            {3: 1, 5: 1}
        )
        assert fixture_builder.evaluate("a8_singer_agl_3_2").observed == {"15": 1}

    def test_tabulated_a8_kernel(self, fixture_builder):
        assert fixture_builder.evaluate("a8_agl_3_2").observed == {"1": 1, "7": 2}

    def test_unknown_names(self, fixture_builder):
        with pytest.raises(InadmissibleInputError):
            fixture_builder.run_suite("a9")
        with pytest.raises(InadmissibleInputError):
            fixture_builder.evaluate("missing")
        with pytest.raises(InadmissibleInputError):
            fixture_builder.group("missing")


class TestCoveringCondition:
    """(S n P^x)[P^x, P^x] = P^x over all conjugates"""

    def test_parabolic_covers_itself(self, fixture_builder):
        group = fixture_builder.group("L2(7)")
        parabolic = fixture_builder.group("L2(7)_parabolic")
        assert covering_condition(group, parabolic, parabolic)

    @pytest.mark.parametrize("subgroup", ["S3_in_A5", "D10_in_A5"])
    def test_d10_covers_subgroups_of_a5(self, fixture_builder, subgroup):
        """Every conjugate meets D10 in an involution outside its derived subgroup"""
        group = fixture_builder.group("A5")
        assert covering_condition(group, fixture_builder.group(subgroup), fixture_builder.group("D10_in_A5"))

    def test_trivial_group_does_not_cover_d10(self, fixture_builder):
        group = fixture_builder.group("A5")
        trivial = closure([], degree=5)
        assert not covering_condition(group, fixture_builder.group("D10_in_A5"), trivial)
