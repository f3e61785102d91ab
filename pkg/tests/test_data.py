import numpy as np
import pytest
from numpy.testing import assert_array_equal

from poincare_linear.classifiers import LabeledDataset, check_margin_assumption
from poincare_linear.data import (
    DatasetFormatError,
    SynthConfig,
    UnsatisfiableConfig,
    format_dataset,
    generate_synthetic,
    load_dataset,
    parse_dataset,
    sample_ball,
    save_dataset,
    train_test_split,
)


def test_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(N=10, d=2, eps=0.0)
    with pytest.raises(ValueError):
        SynthConfig(N=10, d=2, eps=0.1, R=1.0)
    with pytest.raises(ValueError):
        SynthConfig(N=0, d=2, eps=0.1)


def test_sample_ball_radius():
    x = sample_ball(np.random.default_rng(0), 20000, 3, 0.95)
    r = np.linalg.norm(x, axis=1)
    assert r.max() <= 0.95
    # Euclidean-uniform: P(r <= R/2) = 1/8 in three dimensions
    assert abs(np.mean(r <= 0.475) - 0.125) < 0.01


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("d,eps,pf", [(2, 0.01, 0.2), (10, 1.0, 0.6), (5, 0.1, 0.4)])
def test_generated_data_satisfies_margin(seed, d, eps, pf):
    cfg = SynthConfig(N=500, d=d, eps=eps, p_frac=pf, seed=seed)
    ds, h = generate_synthetic(cfg)
    assert len(ds) == 500 and ds.dim == d
    assert check_margin_assumption(ds, h, eps, 0.95)
    assert np.linalg.norm(ds.points, axis=1).max() <= 0.95
    np.testing.assert_allclose(np.linalg.norm(h.w), 1.0)
    np.testing.assert_allclose(np.linalg.norm(h.p), pf * 0.95)


def test_generation_is_deterministic():
    cfg = SynthConfig(N=300, d=4, eps=0.1, seed=9)
    a, ha = generate_synthetic(cfg)
    b, hb = generate_synthetic(cfg)
    assert a == b
    assert_array_equal(ha.w, hb.w)
    c, _ = generate_synthetic(SynthConfig(N=300, d=4, eps=0.1, seed=10))
    assert not a == c


def test_unbalanced_classes_at_large_margin():
    minority = []
    for seed in range(20):
        ds, _ = generate_synthetic(SynthConfig(N=2000, d=10, eps=1.0, p_frac=0.6, seed=seed))
        minority.append(min(np.mean(ds.labels == 1), np.mean(ds.labels == -1)))
    assert np.mean(minority) < 0.3


def test_balance_near_half_at_origin():
    fracs = [np.mean(generate_synthetic(SynthConfig(N=100_000, d=3, eps=1e-6, p_frac=0.0, seed=s))[0].labels == 1)
             for s in range(3)]
    assert abs(np.mean(fracs) - 0.5) < 0.05


def test_unsatisfiable_config():
    with pytest.raises(UnsatisfiableConfig):
        generate_synthetic(SynthConfig(N=10, d=2, eps=20.0))


# --- file format -----------------------------------------------------------


def test_round_trip(tmp_path):
    ds, _ = generate_synthetic(SynthConfig(N=100, d=3, eps=0.1, seed=1))
    path = tmp_path / "d.csv"
    save_dataset(ds, path)
    back = load_dataset(path)
    assert back == ds
    assert_array_equal(back.points, ds.points)
    assert path.read_text().startswith("# d=3 n=100\n")


def test_multiclass_round_trip():
    ds = LabeledDataset(np.array([[0.1, 0.2], [0.3, 1 / 3]]), np.array([0, 7]))
    assert parse_dataset(format_dataset(ds)) == ds


def test_parse_errors_carry_line_numbers():
    with pytest.raises(DatasetFormatError) as e:
        parse_dataset("# d=2 n=2\n1,0.1,0.2\n-1,1.0,0.0\n")
    assert e.value.line == 3 and "line 3" in str(e.value)
    with pytest.raises(DatasetFormatError) as e:
        parse_dataset("# d=2 n=2\n1,0.1,0.2\n-1,0.1\n")
    assert e.value.line == 3
    with pytest.raises(DatasetFormatError) as e:
        parse_dataset("# d=2 n=1\nx,0.1,0.2\n")
    assert e.value.line == 2
    with pytest.raises(DatasetFormatError):
        parse_dataset("# d=2 n=3\n1,0.1,0.2\n")
    with pytest.raises(DatasetFormatError):
        parse_dataset("")


# --- splitting -------------------------------------------------------------


def test_split_is_stratified_and_complete():
    ds, _ = generate_synthetic(SynthConfig(N=1000, d=2, eps=0.05, p_frac=0.6, seed=2))
    tr, te = train_test_split(ds, 0.7, seed=5)
    assert len(tr) + len(te) == len(ds)
    for c in ds.classes:
        n = np.sum(ds.labels == c)
        assert abs(np.sum(tr.labels == c) - 0.7 * n) <= 1
    merged = np.vstack([tr.points, te.points])
    assert sorted(map(tuple, merged.tolist())) == sorted(map(tuple, ds.points.tolist()))
    tr2, _ = train_test_split(ds, 0.7, seed=5)
    assert tr2 == tr


def test_split_singleton_class_goes_to_training():
    ds = LabeledDataset(np.array([[0.1, 0.0], [0.2, 0.0], [0.3, 0.0], [0.0, 0.5]]), np.array([0, 0, 0, 1]))
    tr, te = train_test_split(ds, 0.5, seed=0)
    assert 1 in tr.labels and 1 not in te.labels


def test_split_rejects_bad_fraction():
    ds = LabeledDataset(np.array([[0.1, 0.0], [0.2, 0.0]]), np.array([1, -1]))
    with pytest.raises(ValueError):
        train_test_split(ds, 1.0)
