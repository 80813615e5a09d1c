"""Tests for relation matrices, PPM rendering and the census recount"""

import numpy as np
import pytest

from becorder.errors import CapacityError, DegreeError, ParseError
from becorder.matrix import EQUAL, GREATER, INCOMPARABLE, LESS, census, relation_matrix
from becorder.render import DEFAULT_PALETTE, RenderSpec, census_from_ppm, read_ppm, render_matrix
from becorder.utils.reports import Reports


class TestRelationMatrix:
    def test_one_bit_std(self):
        matrix = relation_matrix(1, "std")
        assert matrix.codes.tolist() == [[EQUAL, LESS], [GREATER, EQUAL]]
        assert matrix.outcome("1", "0") == "Greater"

    @pytest.mark.parametrize("method", ["std", "fst", "avg", "hlf", "beta:1.5", "ber:8", "rules:ABF"])
    def test_antisymmetric(self, method):
        assert relation_matrix(3, method).is_antisymmetric()

    def test_rules_are_sound(self):
        rules = relation_matrix(3, "rules:ABCEF")
        std = relation_matrix(3, "std")
        assert np.all(std.codes[rules.codes == GREATER] == GREATER)

    def test_std_implies_fst(self):
        fst = relation_matrix(3, "fst")
        std = relation_matrix(3, "std")
        assert np.all(np.isin(fst.codes[std.codes == GREATER], [GREATER, EQUAL]))

    def test_more_rules_fewer_incomparable(self):
        ab = relation_matrix(4, "rules:AB")
        abc = relation_matrix(4, "rules:ABC")
        assert abc.count(INCOMPARABLE) <= ab.count(INCOMPARABLE)

    def test_total_orders_have_no_incomparable(self):
        assert relation_matrix(3, "avg").count(INCOMPARABLE) == 0

    def test_workers_agree(self):
        serial = relation_matrix(3, "std", workers=1)
        parallel = relation_matrix(3, "std", workers=2)
        assert np.array_equal(serial.codes, parallel.codes)

    def test_degree_too_small(self):
        with pytest.raises(DegreeError):
            relation_matrix(3, "ber:4")

    def test_cap(self):
        with pytest.raises(CapacityError):
            relation_matrix(9, "std")
        with pytest.raises(CapacityError):
            relation_matrix(3, "std", max_len=2)

    def test_census(self):
        matrix = relation_matrix(2, "std")
        counts = census(matrix)
        assert counts.greater == counts.less
        assert counts.greater + counts.less + counts.equal + counts.incomparable == 16
        assert counts.equal == 4
        assert counts.non_dimmed is None

    def test_census_against_itself(self):
        matrix = relation_matrix(2, "std")
        counts = census(matrix, matrix)
        assert counts.non_dimmed == 0
        assert counts.dim_against == "std"


class TestRenderSpec:
    def test_defaults(self):
        spec = RenderSpec()
        assert spec.greater == DEFAULT_PALETTE["greater"]
        assert spec.color_table()[EQUAL].tolist() == list(DEFAULT_PALETTE["greater"])

    def test_dim(self):
        assert RenderSpec().dim((0, 0, 0)) == (178, 178, 178)
        assert RenderSpec().dim((255, 255, 255)) == (255, 255, 255)

    def test_palette_override(self):
        spec = RenderSpec.from_palette("greater=1,2,3; less=200,0,0")
        assert spec.greater == (1, 2, 3)
        assert spec.less == (200, 0, 0)
        assert spec.incomparable == DEFAULT_PALETTE["incomparable"]

    @pytest.mark.parametrize(
        "palette",
        ["purple=1,2,3", "greater=1,2", "greater=a,b,c", "greater=17,102,0", "less=300,0,0"],
    )
    def test_bad_palettes(self, palette):
        with pytest.raises(ParseError):
            RenderSpec.from_palette(palette)

    def test_render_needs_a_path(self):
        with pytest.raises(ParseError):
            render_matrix(relation_matrix(1, "std"), RenderSpec())


class TestRender:
    def test_pixels(self, tmp_path):
        out = str(tmp_path / "std1.ppm")
        render_matrix(relation_matrix(1, "std"), RenderSpec(out=out))
        pixels = read_ppm(out)
        assert pixels.shape == (2, 2, 3)
        assert tuple(pixels[0, 1]) == DEFAULT_PALETTE["less"]
        assert tuple(pixels[1, 0]) == DEFAULT_PALETTE["greater"]
        assert tuple(pixels[0, 0]) == DEFAULT_PALETTE["greater"]

    def test_header(self, tmp_path):
        out = tmp_path / "std2.ppm"
        render_matrix(relation_matrix(2, "std"), RenderSpec(out=str(out)))
        data = out.read_bytes()
        assert data.startswith(b"P6\n4 4\n255\n")
        assert len(data) == len(b"P6\n4 4\n255\n") + 4 * 4 * 3

    def test_recount_matches(self, tmp_path):
        matrix = relation_matrix(3, "fst")
        reference = relation_matrix(3, "std")
        spec = RenderSpec(out=str(tmp_path / "fst3.ppm"), dim_against="std")
        recounted = render_matrix(matrix, spec, reference)
        expected = census(matrix, reference)
        assert recounted.model_dump() == expected.model_dump()

    def test_recount_with_equivalent_pairs(self, tmp_path):
        # beta at 1 ties every pair with the same number of ones
        matrix = relation_matrix(3, "beta:1")
        spec = RenderSpec(out=str(tmp_path / "beta1.ppm"))
        recounted = render_matrix(matrix, spec)
        assert recounted.equal == matrix.count(EQUAL)
        assert recounted.greater == matrix.count(GREATER)

    def test_separate_equal_color(self, tmp_path):
        out = str(tmp_path / "eq.ppm")
        spec = RenderSpec(out=out, equal=(255, 255, 0))
        recounted = render_matrix(relation_matrix(2, "std"), spec)
        assert recounted.equal == 4
        assert tuple(read_ppm(out)[0, 0]) == (255, 255, 0)

    def test_byte_identical(self, tmp_path):
        matrix = relation_matrix(3, "hlf")
        first, second = tmp_path / "a.ppm", tmp_path / "b.ppm"
        render_matrix(matrix, RenderSpec(out=str(first)))
        render_matrix(matrix, RenderSpec(out=str(second)))
        assert first.read_bytes() == second.read_bytes()

    def test_foreign_pixels(self, tmp_path):
        out = tmp_path / "junk.ppm"
        out.write_bytes(b"P6\n1 1\n255\n" + bytes([1, 2, 3]))
        with pytest.raises(ParseError):
            census_from_ppm(str(out), RenderSpec())


@pytest.mark.slow
class TestDeskScale:
    def test_ber_sixteen_pixels(self):
        ber = relation_matrix(8, "ber:256", workers=4)
        std = relation_matrix(8, "std", workers=4)
        hidden = (ber.codes == INCOMPARABLE) & (std.codes != INCOMPARABLE)
        assert int(np.count_nonzero(hidden)) == 16
        assert ber.count(INCOMPARABLE) == 4314
        assert std.count(INCOMPARABLE) == 4298

    def test_rule_census_is_monotone(self):
        counts = [
            relation_matrix(8, f"rules:{rules}", enable_rsd=True).count(INCOMPARABLE)
            for rules in ("AB", "ABC", "ABCD", "ABCDF")
        ]
        assert counts == [17172, 14038, 10046, 6972]

    def test_kendall_distances(self):
        report = Reports.kendall(8)
        distances = {(e.first, e.second): e.distance for e in report.distances}
        awgn, bec = report.methods[0], report.methods[1]
        assert distances[(awgn, bec)] == 313
        assert distances[(awgn, "avg")] == 492
        assert distances[(awgn, "hlf")] == 582
        assert distances[(bec, "avg")] == 195
        assert distances[(bec, "hlf")] == 285
        assert distances[("avg", "hlf")] == 110
