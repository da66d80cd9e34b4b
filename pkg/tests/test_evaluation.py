import numpy as np
import pytest

from holex.data import TripleSet, Vocab
from holex.equivalence import convert_model
from holex.evaluation import FilterIndex, evaluate, rank_entity, rank_from_scores, summarize_ranks
from holex.io import gen_synthetic
from holex.scoring import ModelParams
from holex.trainer import init_model


def fixed_object_model(scores):
    """Complex n=1 model where f(r, 0, o) = scores[o] exactly."""
    # with w = e0 = 1, f(r, 0, o) = Re(e_o); e0 itself scores 1
    if scores[0] != 1.0:
        raise ValueError("candidate 0 is the subject and always scores 1")
    ents = np.array([[complex(s)] for s in scores])
    k = len(scores)
    return ModelParams("complex", ents, np.array([[1.0 + 0j]]), [f"e{i}" for i in range(k)], ["r"])


class TestRankFromScores:
    def test_highest(self):
        assert rank_from_scores(np.array([0.1, 0.9, 0.3]), 1) == 1

    def test_second(self):
        assert rank_from_scores(np.array([0.2, 0.9, 0.5]), 2) == 2

    @pytest.mark.parametrize("k", [1, 2, 3, 10, 11])
    def test_all_tied(self, k):
        assert rank_from_scores(np.zeros(k), 0) == (k + 2) // 2  # ceil((k+1)/2)

    def test_exclude(self):
        s = np.array([5.0, 4.0, 3.0, 2.0])
        assert rank_from_scores(s, 3) == 4
        assert rank_from_scores(s, 3, exclude=[0, 1]) == 2
        assert rank_from_scores(s, 3, exclude=[3]) == 4


class TestRankEntity:
    def test_hand_set_model(self):
        # subject 0 fixed: object scores are [1, 3, 2] for e0, e1, e2
        m = fixed_object_model([1.0, 3.0, 2.0])
        assert rank_entity(m, (0, 0, None), 2) == 2
        assert rank_entity(m, (0, 0, None), 1) == 1
        assert rank_entity(m, (0, 0, None), 0) == 3

    def test_filter(self):
        m = fixed_object_model([1.0, 3.0, 2.0])
        known = TripleSet.from_names([("e0", "r", "e1")])
        known.entities.add("e2")
        assert rank_entity(m, (0, 0, None), 2, known) == 1
        assert rank_entity(m, (0, 0, None), 1, known) == 1

    def test_errors(self, rng):
        m = init_model("complex", 2, ["a", "b"], ["r"], rng)
        with pytest.raises(ValueError):
            rank_entity(m, (0, 0, 1), 1)
        with pytest.raises(ValueError):
            rank_entity(m, (0, None, None), 1)
        with pytest.raises(KeyError):
            rank_entity(m, (0, 0, None), 5)
        with pytest.raises(KeyError):
            rank_entity(m, (3, 0, None), 1)


class TestSummaries:
    def test_mrr_example(self):
        res = summarize_ranks([1, 2, 4], (1, 3), "raw", "both")
        assert res.mrr == pytest.approx((1 + 0.5 + 0.25) / 3)
        assert res.mrr == pytest.approx(0.5833, abs=1e-4)
        assert res.hits_at == {1: pytest.approx(1 / 3), 3: pytest.approx(2 / 3)}

    def test_rendering(self):
        res = summarize_ranks([1, 1], (1, 10), "filtered", "object")
        assert "MRR" in res.to_text() and "Hits@10" in res.to_text()
        assert "mrr=1.0" in res.to_records() and "setting=filtered" in res.to_records()


class TestEvaluate:
    def test_perfect_model(self):
        m = fixed_object_model([1.0, 0.0, 5.0])
        test = TripleSet(Vocab(m.entity_names), Vocab(["r"]), np.array([[0, 0, 2, 1]]))
        res = evaluate(m, test, side="object")
        assert res.mrr == 1.0 and res.hits_at[1] == 1.0
        assert res.num_queries == 1 and res.setting == "raw"

    def test_two_queries_per_triple(self):
        train, _, test = gen_synthetic(20, 0)
        m = init_model("complex", 4, train.entities.names, train.relations.names, 0)
        res = evaluate(m, test)
        assert res.num_queries == 2 * len(test)
        obj = evaluate(m, test, side="object")
        sub = evaluate(m, test, side="subject")
        np.testing.assert_array_equal(res.ranks[0::2], obj.ranks)
        np.testing.assert_array_equal(res.ranks[1::2], sub.ranks)

    def test_random_model_expectation(self):
        # rank of the truth is uniform on 1..N under random scores
        n_e = 30
        want = sum(1 / i for i in range(1, n_e + 1)) / n_e
        ents = [f"e{i}" for i in range(n_e)]
        rng = np.random.default_rng(0)
        test = TripleSet(
            Vocab(ents),
            Vocab(["r"]),
            np.stack([np.zeros(200, int), rng.integers(n_e, size=200), rng.integers(n_e, size=200), np.ones(200, int)], 1),
        )
        mrrs = [
            evaluate(init_model("complex", 8, ents, ["r"], seed), test).mrr for seed in range(40)
        ]
        assert np.mean(mrrs) == pytest.approx(want, abs=0.01)

    def test_filtered_not_worse_than_raw(self):
        train, valid, test = gen_synthetic(30, 1)
        for seed in range(5):
            m = init_model("hole-spectral", 6, train.entities.names, train.relations.names, seed)
            raw = evaluate(m, test)
            filt = evaluate(m, test, [train, valid, test])
            assert filt.mrr >= raw.mrr
            assert np.all(filt.ranks <= raw.ranks)

    def test_transport_through_conversion(self):
        train, valid, test = gen_synthetic(30, 2)
        m = init_model("complex", 5, train.entities.names, train.relations.names, 3, scale=1.0)
        a = evaluate(m, test, FilterIndex(train, valid))
        b = evaluate(convert_model(m), test, FilterIndex(train, valid))
        np.testing.assert_array_equal(a.ranks, b.ranks)
        assert a.mrr == b.mrr and a.hits_at == b.hits_at

    def test_rejects(self):
        train, _, _ = gen_synthetic(10, 0)
        m = init_model("complex", 2, train.entities.names, train.relations.names, 0)
        neg = TripleSet(train.entities, train.relations, np.array([[0, 0, 1, -1]]))
        with pytest.raises(ValueError):
            evaluate(m, neg)
        with pytest.raises(ValueError):
            evaluate(m, TripleSet(train.entities, train.relations, np.zeros((0, 4), int)))
        with pytest.raises(ValueError):
            evaluate(m, train, side="left")
