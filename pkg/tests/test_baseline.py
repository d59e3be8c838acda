import numpy as np
import pytest

from rashomon import (
    Dataset,
    FeatureDataset,
    RashomonQuery,
    assign_folds,
    estimate_bayes_probs,
    fit_logistic,
    in_rashomon,
    load_feature_csv,
    sample_linear_models,
)
from rashomon.baseline import _loss_grad, cross_val_probs


def make_separable(n=200, seed=0, margin=1.0):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, n)
    x = rng.normal(0.0, 0.3, size=(n, 2))
    x[:, 0] += margin * (2 * y - 1)
    group = rng.integers(0, 2, n)
    return FeatureDataset(x, y, group)


class TestFitLogistic:
    def test_strong_penalty_shrinks_to_coin_flip(self):
        X = np.array([[-1.0], [1.0], [-1.0], [1.0]])
        y = np.array([0, 1, 0, 1])
        model = fit_logistic(X, y, l2_strength=0.001, seed=1)
        assert abs(model.coef[0]) < 0.05
        assert np.all(np.abs(model.predict_proba(X) - 0.5) < 0.05)

    def test_symmetric_data_zero_intercept(self):
        X = np.array([[-2.0], [-1.0], [1.0], [2.0], [-1.5], [1.5]])
        y = np.array([0, 0, 1, 1, 0, 1])
        model = fit_logistic(X, y, l2_strength=1.0, seed=3, optimizer_budget=2000)
        assert model.intercept == pytest.approx(0.0, abs=1e-3)

    def test_fit_beats_zero_model(self):
        rng = np.random.default_rng(7)
        for seed in range(5):
            fds = make_separable(seed=seed)
            strength = float(rng.choice([0.01, 0.1, 1.0, 10.0]))
            model = fit_logistic(fds.X, fds.y, strength, seed=seed)
            fitted, _, _ = _loss_grad(fds.X, fds.y.astype(float), model.coef,
                                      model.intercept, strength)
            zero, _, _ = _loss_grad(fds.X, fds.y.astype(float),
                                    np.zeros(fds.X.shape[1]), 0.0, strength)
            assert fitted <= zero + 1e-12

    def test_deterministic_given_inputs(self):
        fds = make_separable(seed=2)
        a = fit_logistic(fds.X, fds.y, 0.1, seed=9)
        b = fit_logistic(fds.X, fds.y, 0.1, seed=9)
        assert np.array_equal(a.coef, b.coef) and a.intercept == b.intercept

    def test_single_class_fold_rejected(self):
        X = np.ones((4, 1))
        with pytest.raises(ValueError):
            fit_logistic(X, np.array([1, 1, 1, 1]), 1.0)


class TestEstimateBayesProbs:
    def test_wide_margin_gives_confident_estimates(self):
        fds = make_separable(n=300, seed=4, margin=3.0)
        p_hat = estimate_bayes_probs(fds, folds=5, seed=0)
        confident = np.abs(p_hat - 0.5) > 0.45
        assert confident.mean() > 0.95
        assert np.mean((p_hat > 0.5) == fds.y) > 0.95

    def test_coin_flip_labels_concentrate_at_base_rate(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(5000, 3))
        y = rng.integers(0, 2, 5000)
        fds = FeatureDataset(X, y, rng.integers(0, 2, 5000))
        p_hat = estimate_bayes_probs(fds, folds=5, seed=1)
        assert np.mean(np.abs(p_hat - 0.5)) < 0.1

    def test_fold_labels_key_estimates_to_rows(self):
        fds = make_separable(n=120, seed=6)
        labels = assign_folds(fds.n, 5, seed=11)
        base = estimate_bayes_probs(fds, fold_labels=labels)
        perm = np.random.default_rng(12).permutation(fds.n)
        shuffled = FeatureDataset(fds.X[perm], fds.y[perm], fds.group[perm])
        again = estimate_bayes_probs(shuffled, fold_labels=labels[perm])
        assert np.allclose(base[perm], again)

    def test_no_leakage_per_fold(self):
        # refitting by hand on the complement of each fold reproduces the output
        fds = make_separable(n=100, seed=8)
        labels = assign_folds(fds.n, 4, seed=3)
        p_hat = cross_val_probs(fds, labels, l2_strength=1.0, seed=5)
        for f in range(4):
            held = labels == f
            model = fit_logistic(fds.X[~held], fds.y[~held], 1.0, seed=5, folds_used=4)
            assert np.allclose(p_hat[held], model.predict_proba(fds.X[held]))

    def test_fold_count_validation(self):
        with pytest.raises(ValueError):
            assign_folds(10, 1, seed=0)
        with pytest.raises(ValueError):
            assign_folds(3, 5, seed=0)


class TestSampleLinearModels:
    def test_well_specified_generous_tolerance(self):
        fds = make_separable(n=250, seed=10, margin=2.0)
        p_hat = estimate_bayes_probs(fds, folds=5, seed=2)
        query = RashomonQuery(Dataset(p_hat, fds.group, fds.y), 0.1)
        run = sample_linear_models(fds, query, n_models=40, seed=3)
        assert run.in_set_fraction > 0.9

    def test_zero_tolerance_near_zero_fraction(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(150, 3))
        y = (X @ np.array([1.0, -0.5, 0.2]) + rng.normal(0, 1.0, 150) > 0).astype(int)
        fds = FeatureDataset(X, y, rng.integers(0, 2, 150))
        p_hat = estimate_bayes_probs(fds, folds=5, seed=4)
        query = RashomonQuery(Dataset(p_hat, fds.group, fds.y), 0.0)
        run = sample_linear_models(fds, query, n_models=25, seed=5)
        # membership at eps=0 demands reproducing every Bayes prediction exactly
        assert run.in_set_fraction == 0.0

    def test_flags_match_membership_predicate(self):
        fds = make_separable(n=120, seed=14)
        p_hat = estimate_bayes_probs(fds, folds=5, seed=6)
        query = RashomonQuery(Dataset(p_hat, fds.group, fds.y), 0.02)
        run = sample_linear_models(fds, query, n_models=30, seed=7)
        assert len(run.draws) + run.n_skipped == 30
        for draw in run.draws:
            assert draw.in_rashomon == in_rashomon(query, draw.flip)

    def test_deterministic(self):
        fds = make_separable(n=80, seed=15)
        p_hat = estimate_bayes_probs(fds, folds=4, seed=8)
        query = RashomonQuery(Dataset(p_hat, fds.group, fds.y), 0.05)
        a = sample_linear_models(fds, query, n_models=12, seed=9)
        b = sample_linear_models(fds, query, n_models=12, seed=9)
        assert [d.flip for d in a.draws] == [d.flip for d in b.draws]
        assert [d.in_rashomon for d in a.draws] == [d.in_rashomon for d in b.draws]

    def test_row_count_mismatch_rejected(self):
        fds = make_separable(n=50, seed=16)
        other = Dataset(np.full(49, 0.7), [1] * 25 + [0] * 24)
        with pytest.raises(ValueError):
            sample_linear_models(fds, RashomonQuery(other, 0.1), n_models=2, seed=0)


class TestFeatureCSV:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "feat.csv"
        path.write_text("x1,x2,y,group\n0.5,1.0,1,0\n-0.25,2.0,0,1\n")
        fds = load_feature_csv(path)
        assert fds.column_names == ("x1", "x2")
        assert np.allclose(fds.X, [[0.5, 1.0], [-0.25, 2.0]])
        assert fds.y.tolist() == [1, 0]
        assert fds.group.tolist() == [0, 1]

    def test_missing_column(self, tmp_path):
        path = tmp_path / "feat.csv"
        path.write_text("x1,y\n0.5,1\n")
        with pytest.raises(ValueError, match="group"):
            load_feature_csv(path)

    def test_bad_value_names_line(self, tmp_path):
        path = tmp_path / "feat.csv"
        path.write_text("x1,y,group\n0.5,1,0\nnope,0,1\n")
        with pytest.raises(ValueError, match="line 3"):
            load_feature_csv(path)
