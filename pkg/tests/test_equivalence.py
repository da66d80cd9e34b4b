import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as ref
from holex.errors import DimensionError, InconclusiveError
from holex.equivalence import (
    EquivalenceReport,
    brute_force_ratio,
    complex_to_hole_vec,
    convert_model,
    lift,
    random_probes,
    spectral_as_complex,
    theoretical_ratio,
    verify_equivalence,
)
from holex.scoring import ModelParams, score_complex, score_hole_time, score_objects, score_triples
from holex.spectral import dft, is_conjugate_symmetric
from holex.trainer import init_model


def names(k, prefix="e"):
    return [f"{prefix}{i}" for i in range(k)]


class TestLift:
    def test_example(self):
        np.testing.assert_array_equal(lift([1 + 2j]), [0, 1 + 2j, 1 - 2j])

    def test_layout_and_symmetry(self, rng):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        z = lift(x)
        assert len(z) == 9 and z[0] == 0
        np.testing.assert_array_equal(z[1:5], x)
        np.testing.assert_array_equal(z[5:], np.conj(x[::-1]))
        assert is_conjugate_symmetric(z, 0.0)

    def test_empty(self):
        with pytest.raises(DimensionError):
            lift(np.zeros(0, dtype=complex))


class TestToHole:
    def test_example(self):
        want = [v.real for v in ref.idft([0, 1 + 2j, 1 - 2j])]
        np.testing.assert_allclose(complex_to_hole_vec([1 + 2j]), want, atol=1e-15)
        np.testing.assert_allclose(complex_to_hole_vec([1 + 2j]), [0.6667, -1.4880, 0.8214], atol=1e-4)

    def test_zero(self):
        np.testing.assert_array_equal(complex_to_hole_vec(np.zeros(3, dtype=complex)), np.zeros(7))

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_roundtrip(self, rng, n):
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        h = complex_to_hole_vec(x)
        assert h.dtype == np.float64 and len(h) == 2 * n + 1
        np.testing.assert_allclose(dft(h), lift(x), atol=1e-12)


class TestRatio:
    @pytest.mark.parametrize("n, value", [(1, 2 / 3), (2, 0.4), (3, 2 / 7)])
    def test_brute_force_confirms_constant(self, rng, n, value):
        assert theoretical_ratio(n) == pytest.approx(value, rel=1e-15)
        for _ in range(10):
            w, e_s, e_o = (rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(3))
            assert brute_force_ratio(w, e_s, e_o) == pytest.approx(value, abs=1e-12)

    def test_worked_example(self):
        w, e_s, e_o = [1j], [1 + 1j], [1 - 1j]
        assert score_complex(w, e_s, e_o) == pytest.approx(-2)
        f_hole = score_hole_time(*(complex_to_hole_vec(v) for v in (w, e_s, e_o)))
        assert f_hole == pytest.approx(-4 / 3, abs=1e-14)


class TestConvert:
    def test_structure(self, rng):
        m = init_model("complex", 3, names(5), names(2, "r"), rng)
        h = convert_model(m)
        assert h.kind == "hole-time" and h.dim == 7
        assert h.entity_names == m.entity_names and h.relation_names == m.relation_names

    def test_zero_model(self):
        m = ModelParams("complex", np.zeros((2, 3), complex), np.zeros((1, 3), complex), ["a", "b"], ["r"])
        h = convert_model(m)
        assert not np.any(h.entities) and not np.any(h.relations)

    def test_kind_mismatch(self, rng):
        with pytest.raises(ValueError):
            convert_model(init_model("hole-time", 3, ["a"], ["r"], rng))

    def test_spectral_retag(self, rng):
        m = init_model("hole-spectral", 6, names(4), ["r"], rng)
        c = spectral_as_complex(m)
        assert c.kind == "complex"
        ids = np.arange(4)
        np.testing.assert_allclose(
            score_triples(c, np.zeros(4, int), ids, ids[::-1]),
            6 * score_triples(m, np.zeros(4, int), ids, ids[::-1]),
            rtol=1e-14,
        )
        with pytest.raises(ValueError):
            spectral_as_complex(c)


class TestVerify:
    @pytest.mark.parametrize("n", [1, 2, 3, 8, 16, 64])
    def test_passes_on_random_models(self, n):
        m = init_model("complex", n, names(20), names(3, "r"), n, scale=1.0)
        rep = verify_equivalence(m, convert_model(m), random_probes(m, 1000, n))
        assert rep.passed
        assert rep.dim_complex == n and rep.dim_hole == 2 * n + 1
        assert rep.triples_checked == 1000
        assert rep.ratio_mean == pytest.approx(2 / (2 * n + 1), abs=1e-12)

    def test_sign_preserved(self, rng):
        m = init_model("complex", 5, names(10), names(2, "r"), rng)
        h = convert_model(m)
        p = random_probes(m, 500, 1)
        fc = score_triples(m, *p.T)
        fh = score_triples(h, *p.T)
        big = np.abs(fc) > 1e-9
        np.testing.assert_array_equal(np.sign(fc[big]), np.sign(fh[big]))

    def test_ranking_order_preserved(self, rng):
        m = init_model("complex", 4, names(20), names(2, "r"), rng, scale=1.0)
        h = convert_model(m)
        for r in range(2):
            for s in range(20):
                np.testing.assert_array_equal(
                    np.argsort(score_objects(m, r, s), kind="stable"),
                    np.argsort(score_objects(h, r, s), kind="stable"),
                )

    def test_fails_on_unrelated_model(self, rng):
        m = init_model("complex", 3, names(6), ["r"], rng)
        other = init_model("hole-time", 7, names(6), ["r"], rng)
        assert not verify_equivalence(m, other, random_probes(m, 100, 0)).passed

    def test_zero_relation_is_inconclusive(self, rng):
        m = init_model("complex", 3, names(4), ["r"], rng)
        m.relations[:] = 0
        with pytest.raises(InconclusiveError):
            verify_equivalence(m, convert_model(m), random_probes(m, 50, 0))

    def test_bad_inputs(self, rng):
        m = init_model("complex", 3, names(4), ["r"], rng)
        h = convert_model(m)
        with pytest.raises(ValueError):
            verify_equivalence(m, h, np.zeros((0, 3), int))
        with pytest.raises(DimensionError):
            verify_equivalence(m, init_model("hole-time", 5, names(4), ["r"], rng), [[0, 0, 1]])
        with pytest.raises(ValueError):
            verify_equivalence(h, m, [[0, 0, 1]])

    def test_report_rendering(self, rng):
        m = init_model("complex", 2, names(4), ["r"], rng)
        rep = verify_equivalence(m, convert_model(m), random_probes(m, 20, 0))
        assert isinstance(rep, EquivalenceReport)
        assert "PASSED" in rep.to_text()
        assert "passed=true" in rep.to_records()

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_ratio_property(self, n, seed):
        m = init_model("complex", n, names(5), ["r"], seed, scale=1.0)
        assert verify_equivalence(m, convert_model(m), random_probes(m, 50, seed)).passed
