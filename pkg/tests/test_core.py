import numpy as np
import pytest

from agnostic import (
    ConfigError,
    Dataset,
    EstimatorConfig,
    GroundTruth,
    InsufficientSamples,
    LabeledDataset,
    MomentProfile,
    OpNormConfig,
    split_dataset,
    validate_config,
)
from agnostic.core import Mode, derive_seed, rng, window_count


def test_validate_ok():
    validate_config(EstimatorConfig(eta=0.1, eps=0.1))


@pytest.mark.parametrize("kwargs, field", [
    (dict(eta=0.5), "eta"),
    (dict(eta=-0.01), "eta"),
    (dict(eps=0.0), "eps"),
    (dict(eps=1.0), "eps"),
    (dict(eta=0.4, eps=0.6), "eps"),
    (dict(eps1=0.0), "eps1"),
    (dict(opnorm=OpNormConfig(c2=0.0)), "opnorm.c2"),
    (dict(profile=MomentProfile(Mode.GAUSSIAN, c4=5.0)), "profile"),
    (dict(profile=MomentProfile.bounded(c4=0.5)), "profile.c4"),
    (dict(profile=MomentProfile.bounded(gamma=0.0)), "profile.gamma"),
    (dict(seed=-1), "seed"),
])
def test_validate_names_field(kwargs, field):
    with pytest.raises(ConfigError) as exc:
        validate_config(EstimatorConfig(**kwargs))
    assert exc.value.field == field


def test_eta_cap_boundary():
    validate_config(EstimatorConfig(eta=0.476, eps=0.1))
    with pytest.raises(ConfigError):
        validate_config(EstimatorConfig(eta=1 / 2.1, eps=0.1))


def test_gaussian_profile_constants():
    p = MomentProfile.gaussian()
    assert (p.c4, p.gamma) == (3.0, 2.0)


def test_replace_mode_switches_profile():
    cfg = EstimatorConfig().replace(mode="bounded")
    assert cfg.mode is Mode.BOUNDED
    assert cfg.replace(mode=Mode.GAUSSIAN).profile == MomentProfile.gaussian()


@pytest.mark.parametrize("m, levels, sizes", [(10, 2, (5, 5)), (10, 3, (4, 3, 3)), (7, 7, (1,) * 7)])
def test_split_sizes(m, levels, sizes):
    d = Dataset(np.arange(m * 2, dtype=float).reshape(m, 2))
    chunks = split_dataset(d, levels)
    assert tuple(c.m for c in chunks) == sizes
    assert np.array_equal(np.concatenate([c.rows for c in chunks]), d.rows)


def test_split_insufficient():
    with pytest.raises(InsufficientSamples):
        split_dataset(Dataset(np.zeros((2, 1))), 3)


def test_dataset_invariants():
    with pytest.raises(ValueError):
        Dataset(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        Dataset(np.zeros((0, 3)))
    d = Dataset([1.0, 2.0, 3.0])
    assert (d.m, d.n) == (3, 1)
    with pytest.raises(ValueError):
        d.rows[0, 0] = 5.0
    assert Dataset([[1.0, 2.0]]) == Dataset(np.array([[1.0, 2.0]]))


def test_dataset_copies_input():
    a = np.ones((3, 2))
    d = Dataset(a)
    a[0, 0] = 7
    assert d.rows[0, 0] == 1


def test_ground_truth_checks():
    GroundTruth(np.zeros(2), np.eye(2))
    with pytest.raises(ValueError):
        GroundTruth(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        GroundTruth(np.zeros(2), -np.eye(2))


def test_labeled_dataset_counts():
    d = Dataset(np.zeros((4, 1)))
    t = GroundTruth([0.0], [[1.0]])
    ld = LabeledDataset(d, [True, False, False, True], t, requested_corrupt=2)
    assert ld.n_corrupt == 2
    with pytest.raises(ValueError):
        LabeledDataset(d, [True, False], t)
    with pytest.raises(ValueError):
        LabeledDataset(d, [True, False, False, False], t, requested_corrupt=2)


def test_window_count_rounding():
    assert window_count(100, 0.1, 0.1) == 72
    assert window_count(3, 0.0, 0.0) == 3
    assert window_count(10, 0.2, 0.3) == 4


def test_rng_streams_reproducible_and_distinct():
    a = rng(5, 1).random(4)
    assert np.array_equal(a, rng(5, 1).random(4))
    assert not np.array_equal(a, rng(5, 2).random(4))
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3) != derive_seed(1, 3, 2)
