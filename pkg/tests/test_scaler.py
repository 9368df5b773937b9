import numpy as np
import pytest

from neurox.dsp.features import N_FEATURES, AcousticFeatureVector
from neurox.providers.scaler import Scaler, apply_scaler, fit_scaler


def vec(values, mask=None):
    full = np.zeros(N_FEATURES)
    full[: len(values)] = values
    m = np.zeros(N_FEATURES, dtype=bool)
    if mask:
        for i in mask:
            m[i] = True
            full[i] = np.nan
    return AcousticFeatureVector(values=full, mask=m)


def test_mean_and_population_std():
    scaler = fit_scaler([vec([1.0]), vec([3.0])])
    assert scaler.means[0] == 2.0
    assert scaler.stds[0] == 1.0  # population std of {1, 3}


def test_zero_variance_dims_get_unit_std():
    scaler = fit_scaler([vec([5.0]), vec([5.0])])
    assert scaler.means[0] == 5.0
    assert scaler.stds[0] == 1.0


def test_masked_entries_excluded():
    scaler = fit_scaler([vec([2.0]), vec([], mask=[0])])
    assert scaler.means[0] == 2.0


def test_all_masked_dim_imputes_zero(caplog):
    with caplog.at_level("WARNING"):
        scaler = fit_scaler([vec([], mask=[0]), vec([], mask=[0])])
    assert scaler.means[0] == 0.0
    assert scaler.impute_values[0] == 0.0
    assert any("masked in every training sample" in r.message for r in caplog.records)


def test_training_mean_standardizes_to_zero():
    rng = np.random.default_rng(3)
    data = [
        AcousticFeatureVector(rng.normal(5, 2, N_FEATURES), np.zeros(N_FEATURES, bool))
        for _ in range(10)
    ]
    scaler = fit_scaler(data)
    mean_vec = AcousticFeatureVector(
        np.stack([d.values for d in data]).mean(axis=0), np.zeros(N_FEATURES, bool)
    )
    np.testing.assert_allclose(apply_scaler(scaler, mean_vec), 0.0, atol=1e-9)

    standardized = np.stack([apply_scaler(scaler, d) for d in data])
    np.testing.assert_allclose(standardized.mean(axis=0), 0.0, atol=1e-9)
    np.testing.assert_allclose(standardized.std(axis=0), 1.0, atol=1e-6)


def test_fully_masked_vector_standardizes_to_zero():
    scaler = fit_scaler([vec([1.0]), vec([3.0])])
    all_masked = AcousticFeatureVector(
        np.full(N_FEATURES, np.nan), np.ones(N_FEATURES, bool)
    )
    np.testing.assert_allclose(apply_scaler(scaler, all_masked), 0.0, atol=1e-12)


def test_one_std_above_mean_maps_to_one():
    scaler = fit_scaler([vec([1.0]), vec([3.0])])
    out = apply_scaler(scaler, vec([3.0]))  # mean 2 + std 1
    assert out[0] == pytest.approx(1.0)


def test_json_round_trip(tmp_path):
    scaler = fit_scaler([vec([1.0]), vec([3.0])])
    path = tmp_path / "scaler.json"
    scaler.save(path)
    back = Scaler.load(path)
    np.testing.assert_array_equal(back.means, scaler.means)
    np.testing.assert_array_equal(back.stds, scaler.stds)
    np.testing.assert_array_equal(back.impute_values, scaler.impute_values)


def test_empty_training_set_rejected():
    with pytest.raises(ValueError):
        fit_scaler([])
