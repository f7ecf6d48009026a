import logging
from fractions import Fraction

import pytest

from src.engine.calculus.threshold import threshold
from src.engine.errors import InadmissibleInputError, MissingQuotientBoundError
from src.engine.models.certificate import BoundMode, Provenance, QuotientBound, SeedConstant, Verdict
from src.engine.models.profile import OrbitProfile
from src.engine.processors.bound_engine import (
    PUBLISHED_TOTALS, closed_form, combine, esol_sum, family_degrees, family_position
)

FIRST_FAMILY_5 = 2 ** 17 * 5

# (e2, a, p) grid for the tower rows
TOWER_GRID = [(e2, a, p) for e2 in range(1, 5) for a in range(1, 5) for p in (3, 7, 31)]


class TestCombine:
    """Partial sums plus a quotient bound"""

    def test_four_orbits(self):
        assert combine(OrbitProfile.from_counts({2 ** 14 * 5: 4}), 65538) == 126313

    def test_stays_exact(self):
        value = combine(OrbitProfile.from_counts({2 ** 15 * 5: 1, 2 ** 14 * 5: 2}), 65538)
        assert value == Fraction(998349, 8)
        assert value.numerator // value.denominator == 124793

    def test_esol_sum(self):
        assert esol_sum(OrbitProfile.from_counts({5: 2048, 155: 2048})) == 4096

    def test_guards(self):
        with pytest.raises(InadmissibleInputError):
            combine(OrbitProfile(), 10)
        with pytest.raises(InadmissibleInputError):
            combine(OrbitProfile.from_counts({5: 1}), -1)


class TestClosedForm:
    """Closed-form 2-part bounds"""

    @pytest.mark.parametrize("row_id, params, expected", [
        (12, {"a": 4, "b": 0, "e2": 1}, 16),
        (22, {"a": 1, "b": 1, "e2": 2}, 32),
        (24, {"a": 2, "e2": 1}, 216),
        (25, {"a": 1, "e2": 0}, 10),
        (26, {"a": 2 ** 14, "e2": 0}, 3 * 2 ** 14),
        (26, {"a": 2 ** 14, "e2": 0, "kernel": "singer"}, 2 ** 14),
        (27, {"a": 1, "b": 1, "e2": 0}, 8),
        (28, {"a": 1, "e2": 0}, 4),
        (29, {"a": 2 ** 11, "e2": 1}, 4096),
        (30, {"a": 1}, 2),
    ])
    def test_values(self, row_id, params, expected):
        assert closed_form(row_id, params) == expected

    def test_adds_the_quotient_bound(self):
        assert closed_form(28, {"a": 1, "e2": 0}, 10) == 14

    def test_rejects_rows_without_a_closed_form(self):
        with pytest.raises(InadmissibleInputError):
            closed_form(7, {"a": 1})

    def test_missing_parameter(self):
        with pytest.raises(InadmissibleInputError):
            closed_form(29, {"a": 1})


class TestFamilies:
    """Exceptional degree families"""

    def test_positions(self):
        assert family_position(2 ** 17 * 5) == (5, 17)
        assert family_position(2 ** 35 * 15) == (15, 35)

    @pytest.mark.parametrize("n", [2 ** 16 * 5, 2 ** 27 * 5, 2 ** 14 * 15, 2 ** 17 * 3, 2 ** 20])
    def test_outside_the_families(self, n):
        with pytest.raises(InadmissibleInputError):
            family_position(n)

    def test_degrees(self):
        assert len(family_degrees(5)) == 10
        assert len(family_degrees(15)) == 21
        with pytest.raises(InadmissibleInputError):
            family_degrees(3)


class TestFirstFamily5Step:
    """2^17 * 5 with the quoted bound for 2^16 * 5"""

    @pytest.fixture(scope="class")
    def certificate(self, bound_engine, seeds):
        return bound_engine.pipeline(FIRST_FAMILY_5, seeds)

    def test_total(self, certificate):
        assert certificate.total == 126313
        assert certificate.threshold == 129117
        assert certificate.verdict == Verdict.PASS
        assert certificate.margin == 129117 - 126313

    def test_quotient_is_the_seed(self, certificate):
        assert certificate.quotient.provenance == Provenance.SEED
        assert certificate.quotient.bound == 65538
        assert certificate.quotient_degree == 2 ** 16 * 5

    def test_rows_and_witness(self, certificate):
        assert [r.row_id for r in certificate.row_maxima] == [7, 18, 19, 29]
        assert certificate.row(18).value.to_fraction() == 60775
        assert certificate.row(19).value.to_fraction() == 60775
        assert certificate.row(7).value.to_fraction() == Fraction(230945, 4)
        assert certificate.row(29).value.to_fraction() == 4096
        assert certificate.witness.row_id == 18
        assert certificate.witness.profile == {str(2 ** 14 * 5): 4}

    def test_matches_the_published_total(self, certificate):
        assert certificate.total == PUBLISHED_TOTALS[FIRST_FAMILY_5]
        assert "total matches the published value 126313" in certificate.notes

    def test_summary_line(self, certificate):
        line = certificate.summary_line()
        assert "total=126313" in line
        assert line.endswith("PASS")

    def test_explicit_quotient(self, bound_engine):
        quotient = QuotientBound(degree=2 ** 16 * 5, bound=100000, provenance=Provenance.SEED)
        certificate = bound_engine.certify(FIRST_FAMILY_5, quotient)
        assert certificate.total == 160775
        assert certificate.verdict == Verdict.FAIL
        assert certificate.margin < 0


class TestFamily15:
    """The first three steps of the 2^x * 15 family"""

    @pytest.mark.parametrize("x, total, quotient, provenance", [
        (15, 97412, 49150, Provenance.SEED),
        (16, 189057, 97895, Provenance.THRESHOLD),
        (17, 371382, 189057, Provenance.PIPELINE),
    ])
    def test_totals(self, family_15_certificates, x, total, quotient, provenance):
        certificate = family_15_certificates[2 ** x * 15]
        assert certificate.total == total
        assert certificate.quotient.bound == quotient
        assert certificate.quotient.provenance == provenance
        assert certificate.witness.row_id == 16
        assert certificate.passed

    def test_close_to_the_published_totals(self, family_15_certificates):
        """Recomputed totals stay within 0.05% of the threshold of the published ones"""
        for degree in (2 ** 15 * 15, 2 ** 16 * 15, 2 ** 17 * 15):
            certificate = family_15_certificates[degree]
            diff = certificate.total - PUBLISHED_TOTALS[degree]
            assert 0 < diff <= 0.0005 * certificate.threshold
            assert any(f"{diff:+d}" in note for note in certificate.notes)

    def test_row_16_partial(self, family_15_certificates):
        certificate = family_15_certificates[2 ** 15 * 15]
        assert certificate.partial.to_fraction() == Fraction(96525, 2)
        assert certificate.witness.assignment["X"] == [1] * 12
        assert certificate.row(20).value.to_fraction() == 46475

    def test_singer_row_note(self, family_15_certificates):
        certificate = family_15_certificates[2 ** 15 * 15]
        assert certificate.row(26).value.to_fraction() == 16384
        note = next(note for note in certificate.notes if "Singer" in note)
        assert "49152" in note
        assert "98302 (FAIL against 97895)" in note

    def test_tabulated_kernel_value(self, bound_engine, profile_engine):
        record = profile_engine.row(26)
        m = 2 ** 14 * 15
        assert bound_engine.tabulated_kernel_value(record, m) == 49152
        assert bound_engine.tabulated_kernel_value(record, m, BoundMode.SHARP) == 49152

    def test_misquoted_threshold_note(self, family_15_certificates):
        notes = family_15_certificates[2 ** 17 * 15].notes
        assert any("98547" in note and "97895" in note for note in notes)
        assert not any("98547" in note for note in family_15_certificates[2 ** 16 * 15].notes)

    def test_pipeline_quotient_needs_reuse(self, bound_engine, seeds, family_15_certificates):
        prior = {degree: c for degree, c in family_15_certificates.items() if degree < 2 ** 17 * 15}
        plain = bound_engine.quotient_bound(2 ** 17 * 15, seeds, prior, reuse_prior=False)
        assert plain.provenance == Provenance.THRESHOLD
        assert plain.bound == threshold(2 ** 16 * 15)
        reused = bound_engine.quotient_bound(2 ** 17 * 15, seeds, prior, reuse_prior=True)
        assert reused.provenance == Provenance.PIPELINE
        assert reused.bound == 189057


class TestRowMaxima:
    """Witnesses and evaluation modes"""

    def test_witnesses_reevaluate(self, bound_engine, family_15_certificates):
        for certificate in family_15_certificates.values():
            for row_max in certificate.row_maxima:
                assert bound_engine.reevaluate(row_max) == row_max.value.to_fraction()

    def test_closed_form_dominates_esol(self, bound_engine, profile_engine):
        m = 2 ** 14 * 15
        for record, _ in profile_engine.rows_for_degree(m):
            if not record.uses_closed_form:
                continue
            fidelity = bound_engine.row_maximum(record, m, BoundMode.FIDELITY).value.to_fraction()
            sharp = bound_engine.row_maximum(record, m, BoundMode.SHARP).value.to_fraction()
            assert sharp <= fidelity, f"row {record.row_id}"

    @pytest.mark.parametrize("row_id", [12, 22])
    def test_closed_form_dominates_every_tower_skeleton(self, bound_engine, profile_engine, row_id):
        for variant in profile_engine.row(row_id).variants:
            for e2, a, p in TOWER_GRID:
                skeleton = {"X": variant["X"], "a": a, "b": variant["b"], "e2": e2, "p": p}
                sharp, _ = bound_engine.tower_maximum(profile_engine.tower_profile(skeleton))
                assert closed_form(row_id, skeleton) >= sharp, f"row {row_id} at {skeleton}"

    @pytest.mark.parametrize("row_id", [12, 22])
    @pytest.mark.parametrize("p", [7, 31])
    def test_tower_fidelity_dominates_sharp(self, bound_engine, profile_engine, row_id, p):
        record = profile_engine.row(row_id)
        for variant in record.variants:
            for e2 in range(1, 5):
                for a in (1, 2, 4):
                    m = 2 ** variant["b"] * variant["X"] * 15 * (p + 1) ** e2 * a
                    fidelity = bound_engine.row_maximum(record, m, BoundMode.FIDELITY).value.to_fraction()
                    sharp = bound_engine.row_maximum(record, m, BoundMode.SHARP).value.to_fraction()
                    assert sharp <= fidelity, f"row {row_id} at {m}"

    @pytest.mark.parametrize("row_id", [12, 22])
    def test_tower_closed_form_is_the_two_part_maximum(self, profile_engine, row_id):
        """Equal for X = 2 on row 12 and X = 4 on row 22; the row 22 form over-counts X = 2"""
        record = profile_engine.row(row_id)
        skeletons = profile_engine.skeletons(record, 2 ** 14 * 15)
        assert skeletons
        for skeleton in skeletons:
            tower = profile_engine.tower_profile(skeleton)
            two_part = tower.uniform([level.choices[-1] for level in tower.levels]).two_part_sum()
            value = closed_form(row_id, skeleton)
            if row_id == 22 and skeleton["X"] == 2:
                assert value == 2 * two_part
            else:
                assert value == two_part

    def test_enumeration_is_logged(self, bound_engine, profile_engine, caplog):
        with caplog.at_level(logging.DEBUG, logger="src.engine.processors"):
            bound_engine.row_maximum(profile_engine.row(18), 2 ** 16 * 5, BoundMode.SHARP)
        assert "row 18 at 327680: E_sol over" in caplog.text
        assert "distinct profiles" in caplog.text

    def test_partition_rows_agree_across_modes(self, bound_engine, profile_engine):
        record = profile_engine.row(16)
        m = 2 ** 14 * 15
        assert bound_engine.row_maximum(record, m, BoundMode.FIDELITY) == bound_engine.row_maximum(
            record, m, BoundMode.SHARP
        )

    def test_sharp_never_exceeds_fidelity(self, bound_engine, seeds, family_15_certificates):
        for sharp in bound_engine.chain(2 ** 17 * 15, seeds, BoundMode.SHARP):
            assert sharp.total <= family_15_certificates[sharp.degree].total
            assert sharp.passed

    def test_deterministic(self, bound_engine, seeds):
        first = bound_engine.pipeline(FIRST_FAMILY_5, seeds).model_dump_json()
        second = bound_engine.pipeline(FIRST_FAMILY_5, seeds).model_dump_json()
        assert first == second


class TestQuotientBounds:
    """Selecting the quotient bound"""

    def test_missing_family_5_seed(self, bound_engine):
        with pytest.raises(MissingQuotientBoundError) as excinfo:
            bound_engine.pipeline(FIRST_FAMILY_5, [])
        assert excinfo.value.degree == 327680

    def test_missing_family_15_seed(self, bound_engine):
        with pytest.raises(MissingQuotientBoundError) as excinfo:
            bound_engine.chain(2 ** 16 * 15, [])
        assert excinfo.value.degree == 245760

    def test_smallest_seed_wins(self, bound_engine):
        seeds = [
            SeedConstant(degree=327680, bound=70000),
            SeedConstant(degree=327680, bound=65538, citation="quoted"),
        ]
        quotient = bound_engine.quotient_bound(FIRST_FAMILY_5, seeds)
        assert quotient.bound == 65538
        assert quotient.source == "quoted"

    def test_choice_is_logged(self, bound_engine, seeds, caplog):
        with caplog.at_level(logging.DEBUG, logger="src.engine.processors.bound_engine"):
            bound_engine.quotient_bound(FIRST_FAMILY_5, seeds)
        assert "quotient bound for 327680: 65538 from seed (1 candidates)" in caplog.text

    @pytest.mark.parametrize("n, base", [(FIRST_FAMILY_5, 65538), (2 ** 15 * 15, 48000)])
    def test_total_moves_with_the_quotient_bound(self, bound_engine, n, base):
        def certify(bound):
            return bound_engine.certify(n, QuotientBound(degree=n // 2, bound=bound, provenance=Provenance.SEED))

        reference = certify(base)
        for delta in (1, 7, 1000):
            raised = certify(base + delta)
            assert raised.total - reference.total == delta
            assert raised.partial == reference.partial
            assert raised.threshold == reference.threshold

    def test_failed_certificate_is_not_reused(self, bound_engine, seeds):
        quotient = QuotientBound(degree=2 ** 16 * 5, bound=100000, provenance=Provenance.SEED)
        failed = bound_engine.certify(FIRST_FAMILY_5, quotient)
        with pytest.raises(MissingQuotientBoundError):
            bound_engine.quotient_bound(2 ** 18 * 5, seeds, {FIRST_FAMILY_5: failed})


@pytest.mark.slow
@pytest.mark.integration
class TestFullSweep:
    """Every degree of both families"""

    def test_every_degree_passes(self, bound_engine, seeds):
        certificates = bound_engine.verify_families(seeds)
        assert len(certificates) == 31
        assert all(certificate.passed for certificate in certificates)
        assert [c.degree for c in certificates] == family_degrees(5) + family_degrees(15)

    def test_row_16_leads_family_15(self, bound_engine, seeds):
        for certificate in bound_engine.verify_families(seeds, families=(15,)):
            assert certificate.witness.row_id == 16
