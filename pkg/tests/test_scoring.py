import math

import numpy as np
import pytest

import _oracles as ref
from holex.errors import DimensionError, SymmetryError
from holex.scoring import (
    ModelParams,
    grad_complex,
    grad_hole_time,
    grad_spectral,
    score_complex,
    score_complex_trilinear,
    score_hole_spectral,
    score_hole_time,
    score_objects,
    score_subjects,
    score_to_probability,
    score_triples,
)
from holex.spectral import (
    circular_convolve_naive,
    circular_correlate_naive,
    complex_dot,
    dft,
    is_conjugate_symmetric,
)
from holex.trainer import init_model, init_spectral


def cvec(rng, n, size=None):
    shape = (n,) if size is None else (size, n)
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def fd_gradient(score, vecs, h=1e-5):
    """Central differences over the real and imaginary part of every component."""
    out = []
    for i, v in enumerate(vecs):
        g = np.zeros(len(v), dtype=complex)
        for j in range(len(v)):
            for unit in (1.0, 1j):
                plus = [u.copy() for u in vecs]
                minus = [u.copy() for u in vecs]
                plus[i][j] += h * unit
                minus[i][j] -= h * unit
                d = (score(*plus) - score(*minus)) / (2 * h)
                g[j] += d if unit == 1.0 else 1j * d
        out.append(g)
    return out


def rel_err(got, want):
    got = np.concatenate([np.ravel(g) for g in got])
    want = np.concatenate([np.ravel(w) for w in want])
    return np.linalg.norm(got - want) / max(np.linalg.norm(want), 1e-300)


class TestHolETime:
    def test_example(self):
        assert score_hole_time([1, 0, 0], [1, 2, 3], [4, 5, 6]) == pytest.approx(32, abs=1e-12)
        assert ref.dot([1, 0, 0], ref.corr([1, 2, 3], [4, 5, 6])) == 32

    def test_zero_relation(self, rng):
        e_s, e_o = rng.normal(size=(2, 7))
        assert score_hole_time(np.zeros(7), e_s, e_o) == 0

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_rotation_identity(self, rng, n):
        w, e_s, e_o = rng.normal(size=(3, n))
        f = score_hole_time(w, e_s, e_o)
        assert np.dot(e_s, circular_correlate_naive(w, e_o)) == pytest.approx(f, abs=1e-10)
        assert np.dot(e_o, circular_convolve_naive(w, e_s)) == pytest.approx(f, abs=1e-10)

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            score_hole_time([1.0, 2.0], [1.0, 2.0], [1.0])


class TestHolESpectral:
    def test_example(self):
        f = score_hole_spectral(dft([1, 1, 1, 1]), dft([1, 0, 0, 0]), dft([0, 1, 0, 0]))
        assert f == pytest.approx(1.0, abs=1e-15)
        assert ref.dot([1, 1, 1, 1], ref.corr([1, 0, 0, 0], [0, 1, 0, 0])) == 1

    def test_zero(self):
        z = np.zeros(4, dtype=complex)
        assert score_hole_spectral(z, z, z) == 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 127, 128])
    def test_equals_time_domain(self, rng, n):
        w, e_s, e_o = rng.normal(size=(3, 50, n))
        t = score_hole_time(w, e_s, e_o)
        f = score_hole_spectral(dft(w), dft(e_s), dft(e_o))
        assert np.all(np.abs(f - t) <= 1e-10 * (1 + np.abs(t)))

    @pytest.mark.parametrize("n", [1, 2, 3, 8, 33])
    def test_dot_product_is_real(self, rng, n):
        om, e_s, e_o = (init_spectral(n, rng) for _ in range(3))
        raw = complex_dot(om, np.conj(e_s) * e_o)
        assert abs(raw.imag) <= 1e-10 * (1 + abs(raw.real))

    def test_is_complex_over_n(self, rng):
        n = 12
        om, e_s, e_o = (cvec(rng, n, 40) for _ in range(3))
        gap = score_hole_spectral(om, e_s, e_o) - score_complex(om, e_s, e_o) / n
        assert np.max(np.abs(gap)) <= 1e-15

    def test_frequency_rotation_identity(self, rng):
        n = 9
        om, e_s, e_o = (init_spectral(n, rng) for _ in range(3))
        a = complex_dot(om, np.conj(e_s) * e_o)
        b = complex_dot(e_s, np.conj(om) * e_o)
        c = complex_dot(e_o, om * e_s)
        assert abs(a - b) <= 1e-10 and abs(a - c) <= 1e-10

    def test_strict_mode(self, rng):
        n = 6
        good = [init_spectral(n, rng) for _ in range(3)]
        score_hole_spectral(*good, strict=True)
        bad = [cvec(rng, n)] + good[1:]
        with pytest.raises(SymmetryError):
            score_hole_spectral(*bad, strict=True)
        score_hole_spectral(*bad)


class TestComplEx:
    def test_examples(self):
        assert score_complex([1j], [1 + 1j], [1 - 1j]) == pytest.approx(-2)
        assert score_complex([1], [1], [1]) == 1

    def test_trilinear_form_agrees(self, rng):
        w, e_s, e_o = (cvec(rng, 10, 1000) for _ in range(3))
        np.testing.assert_allclose(
            score_complex(w, e_s, e_o), score_complex_trilinear(w, e_s, e_o), rtol=0, atol=1e-12
        )

    def test_trilinear_by_hand(self, rng):
        w, e_s, e_o = (cvec(rng, 4) for _ in range(3))
        want = sum(a * b * complex(c).conjugate() for a, b, c in zip(w, e_s, e_o)).real
        assert score_complex(w, e_s, e_o) == pytest.approx(want, abs=1e-12)


class TestProbability:
    def test_values(self):
        assert score_to_probability(0.0) == 0.5
        assert score_to_probability(100.0) == pytest.approx(1.0)
        assert score_to_probability(-700.0) >= 0.0
        assert math.isfinite(score_to_probability(700.0))

    def test_symmetry(self):
        f = np.linspace(-50, 50, 1001)
        np.testing.assert_allclose(score_to_probability(f), 1 - score_to_probability(-f), atol=1e-15)


class TestGradients:
    def test_spectral_examples(self):
        g_w, _, _ = grad_spectral([3 + 1j], [0], [2 - 1j])
        np.testing.assert_array_equal(g_w, [0])
        g_w, _, _ = grad_spectral([0.5], [1 + 1j], [2j])
        np.testing.assert_allclose(g_w, [2 + 2j])

    def test_complex_examples(self):
        g_w, _, _ = grad_complex([1 + 1j, 2], [0, 0], [1, 1j])
        np.testing.assert_array_equal(g_w, [0, 0])
        grads = grad_complex([1], [1], [1])
        for g in grads:
            np.testing.assert_array_equal(g, [1])

    @pytest.mark.parametrize("n", [1, 2, 7, 16])
    def test_complex_matches_finite_differences(self, rng, n):
        for _ in range(25):
            vecs = [cvec(rng, n) for _ in range(3)]
            assert rel_err(grad_complex(*vecs), fd_gradient(score_complex, vecs)) <= 1e-6

    @pytest.mark.parametrize("n", [1, 2, 7, 16])
    def test_spectral_matches_finite_differences(self, rng, n):
        for _ in range(25):
            vecs = [cvec(rng, n) for _ in range(3)]
            assert rel_err(grad_spectral(*vecs), fd_gradient(score_hole_spectral, vecs)) <= 1e-6

    @pytest.mark.parametrize("n", [1, 2, 3, 8])
    def test_time_matches_finite_differences(self, rng, n):
        w, e_s, e_o = rng.normal(size=(3, n))
        h = 1e-5
        fd = []
        for i in range(3):
            for j in range(n):
                vp = [w.copy(), e_s.copy(), e_o.copy()]
                vm = [w.copy(), e_s.copy(), e_o.copy()]
                vp[i][j] += h
                vm[i][j] -= h
                fd.append((score_hole_time(*vp) - score_hole_time(*vm)) / (2 * h))
        got = np.concatenate(grad_hole_time(w, e_s, e_o))
        assert np.linalg.norm(got - fd) <= 1e-6 * np.linalg.norm(got)

    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_spectral_preserves_symmetry(self, rng, n):
        vecs = [init_spectral(n, rng) for _ in range(3)]
        for g in grad_spectral(*vecs):
            assert is_conjugate_symmetric(g, 1e-13)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams("transe", np.zeros((1, 2)), np.zeros((1, 2)), ["a"], ["r"])
        with pytest.raises(DimensionError):
            ModelParams("complex", np.zeros((1, 2)), np.zeros((1, 3)), ["a"], ["r"])
        with pytest.raises(DimensionError):
            ModelParams("complex", np.zeros((2, 2)), np.zeros((1, 2)), ["a"], ["r"])

    def test_equality_and_copy(self, rng):
        m = init_model("complex", 4, ["a", "b"], ["r"], rng)
        c = m.copy()
        assert c == m
        c.entities[0, 0] += 1
        assert c != m

    @pytest.mark.parametrize("kind", ["hole-time", "hole-spectral", "complex"])
    def test_candidate_scores_match_triple_scores(self, rng, kind):
        m = init_model(kind, 6, [str(i) for i in range(9)], ["r0", "r1"], rng, scale=1.0)
        ents = np.arange(9)
        for r in range(2):
            for e in range(9):
                fixed = np.full(9, e)
                np.testing.assert_allclose(
                    score_objects(m, r, e), score_triples(m, np.full(9, r), fixed, ents), atol=1e-12
                )
                np.testing.assert_allclose(
                    score_subjects(m, r, e), score_triples(m, np.full(9, r), ents, fixed), atol=1e-12
                )
