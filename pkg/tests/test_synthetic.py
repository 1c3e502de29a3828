import itertools

import numpy as np
import pytest

from latentiv.benchmark import load_pair
from latentiv.core import InvalidCpt, RngStream
from latentiv.synthetic import (
    ChainCpts,
    ConfoundedCpts,
    ScmParams,
    Scenario,
    Setting,
    generate,
    generate_chain_continuous,
    generate_chain_discrete,
    generate_confounded_continuous,
    generate_confounded_discrete,
    write_sample,
)


def chain_marginal_p_y1(cpts: ChainCpts) -> float:
    """Exact marginalization over the 16 joint states of (ix, iy, x, y)."""
    total = 0.0
    for ix, iy, x, y in itertools.product((0, 1), repeat=4):
        p = (cpts.p_ix if ix else 1 - cpts.p_ix) * (cpts.p_iy if iy else 1 - cpts.p_iy)
        px1 = cpts.x_given_ix[ix]
        p *= px1 if x else 1 - px1
        py1 = cpts.y_given_x_iy[x][iy]
        p *= py1 if y else 1 - py1
        if y == 1:
            total += p
    return total


def confounded_marginal_p_y1(cpts: ConfoundedCpts) -> float:
    """Exact marginalization over the joint states of (u, iy, y)."""
    total = 0.0
    for u, iy, y in itertools.product((0, 1), repeat=3):
        p = (cpts.p_u if u else 1 - cpts.p_u) * (cpts.p_iy if iy else 1 - cpts.p_iy)
        py1 = cpts.y_given_u_iy[u][iy]
        p *= py1 if y else 1 - py1
        if y == 1:
            total += p
    return total


class TestChainContinuous:
    def test_noiseless_chain_y_equals_ix(self):
        params = ScmParams(sigma_x=0.0, sigma_y=0.0)
        s = generate_chain_continuous(50, params, RngStream(1))
        np.testing.assert_array_equal(s.y, s.i_x)
        np.testing.assert_array_equal(s.x, s.i_x)

    def test_correlation_matches_moment_identity(self):
        s = generate_chain_continuous(10_000, ScmParams(), RngStream(2))
        observed = np.corrcoef(s.x, s.y)[0, 1]
        expected = 1.0 * s.x.std() / s.y.std()
        assert observed == pytest.approx(expected, abs=0.05)

    def test_seeded_determinism(self):
        a = generate_chain_continuous(500, ScmParams(), RngStream(3))
        b = generate_chain_continuous(500, ScmParams(), RngStream(3))
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.i_x, b.i_x)
        np.testing.assert_array_equal(a.i_y, b.i_y)

    def test_chain_carries_no_confounder(self):
        s = generate_chain_continuous(10, ScmParams(), RngStream(4))
        assert s.u is None
        assert s.scenario is Scenario.CHAIN
        assert s.setting is Setting.CONTINUOUS_GAUSSIAN

    def test_binary_latent_law_default(self):
        s = generate_chain_continuous(200, ScmParams(), RngStream(5))
        assert set(np.unique(s.i_x)) == {-3.0, 3.0}

    def test_gaussian_latent_law_option(self):
        s = generate_chain_continuous(200, ScmParams(latent_law="gaussian"), RngStream(5))
        assert len(np.unique(s.i_x)) == 200

    def test_invalid_latent_law(self):
        with pytest.raises(ValueError):
            ScmParams(latent_law="cauchy")

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            generate_chain_continuous(0, ScmParams(), RngStream(0))


class TestConfoundedContinuous:
    def test_severed_confounder_decorrelates(self):
        n = 10_000
        params = ScmParams(delta=0.0, gamma=0.0)
        s = generate_confounded_continuous(n, params, RngStream(6))
        assert abs(np.corrcoef(s.x, s.y)[0, 1]) < 3.0 / np.sqrt(n)

    def test_correlation_matches_moment_identity(self):
        s = generate_confounded_continuous(10_000, ScmParams(), RngStream(7))
        observed = np.corrcoef(s.x, s.y)[0, 1]
        expected = 1.0 * 1.0 * 9.0 / (s.x.std() * s.y.std())
        assert observed == pytest.approx(expected, abs=0.05)

    def test_confounder_present_and_seeded(self):
        a = generate_confounded_continuous(300, ScmParams(), RngStream(8))
        b = generate_confounded_continuous(300, ScmParams(), RngStream(8))
        assert a.u is not None
        np.testing.assert_array_equal(a.u, b.u)
        assert set(np.unique(a.u)) == {-3.0, 3.0}


class TestChainDiscrete:
    def test_deterministic_cpts_collapse(self):
        cpts = ChainCpts(x_given_ix=(0.0, 1.0), y_given_x_iy=((0.0, 0.0), (1.0, 1.0)))
        s = generate_chain_discrete(100, ScmParams(cpts=cpts), RngStream(9))
        np.testing.assert_array_equal(s.x, s.i_x)
        np.testing.assert_array_equal(s.y, s.x)

    def test_marginal_matches_exact_enumeration(self):
        cpts = ChainCpts()
        s = generate_chain_discrete(10_000, ScmParams(), RngStream(10))
        assert chain_marginal_p_y1(cpts) == pytest.approx(0.5, abs=1e-12)
        assert s.y.mean() == pytest.approx(chain_marginal_p_y1(cpts), abs=0.02)

    def test_default_cpt_marginalizes_to_stated_table(self):
        cpts = ChainCpts()
        for x in (0, 1):
            marginal = 0.5 * cpts.y_given_x_iy[x][0] + 0.5 * cpts.y_given_x_iy[x][1]
            assert marginal == pytest.approx(0.2 if x == 0 else 0.8, abs=1e-12)

    def test_seeded_determinism(self):
        a = generate_chain_discrete(400, ScmParams(), RngStream(11))
        b = generate_chain_discrete(400, ScmParams(), RngStream(11))
        np.testing.assert_array_equal(a.y, b.y)

    def test_values_are_binary(self):
        s = generate_chain_discrete(200, ScmParams(), RngStream(12))
        for vec in (s.x, s.y, s.i_x, s.i_y):
            assert set(np.unique(vec)) <= {0.0, 1.0}

    def test_invalid_cpt_entry(self):
        with pytest.raises(InvalidCpt):
            ChainCpts(p_ix=1.5)
        with pytest.raises(InvalidCpt):
            ChainCpts(y_given_x_iy=((0.1, 0.3), (0.7, 1.9)))

    def test_wrong_cpt_type_rejected(self):
        with pytest.raises(InvalidCpt):
            generate_chain_discrete(10, ScmParams(cpts=ConfoundedCpts()), RngStream(0))


class TestConfoundedDiscrete:
    def test_deterministic_cpts_collapse(self):
        cpts = ConfoundedCpts(
            x_given_u_ix=((0.0, 0.0), (1.0, 1.0)), y_given_u_iy=((0.0, 0.0), (1.0, 1.0))
        )
        s = generate_confounded_discrete(100, ScmParams(cpts=cpts), RngStream(13))
        np.testing.assert_array_equal(s.x, s.u)
        np.testing.assert_array_equal(s.y, s.u)

    def test_marginal_matches_exact_enumeration(self):
        s = generate_confounded_discrete(10_000, ScmParams(), RngStream(14))
        expected = confounded_marginal_p_y1(ConfoundedCpts())
        assert expected == pytest.approx(0.5, abs=1e-12)
        assert s.y.mean() == pytest.approx(expected, abs=0.02)

    def test_seeded_determinism(self):
        a = generate_confounded_discrete(400, ScmParams(), RngStream(15))
        b = generate_confounded_discrete(400, ScmParams(), RngStream(15))
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.u, b.u)

    def test_wrong_cpt_type_rejected(self):
        with pytest.raises(InvalidCpt):
            generate_confounded_discrete(10, ScmParams(cpts=ChainCpts()), RngStream(0))


class TestGenerateDispatchAndExport:
    def test_dispatch_covers_all_combinations(self):
        for scenario in Scenario:
            for setting in Setting:
                s = generate(scenario, setting, 40, ScmParams(), RngStream(16))
                assert s.scenario is scenario
                assert s.setting is setting
                assert len(s.x) == len(s.y) == len(s.i_x) == len(s.i_y) == 40

    def test_write_sample_roundtrips_through_loader(self, tmp_path):
        s = generate_chain_continuous(120, ScmParams(), RngStream(17))
        paths = write_sample(s, tmp_path)
        names = [p.name for p in paths]
        assert names == ["data.txt", "i_x.txt", "i_y.txt"]
        loaded = load_pair(tmp_path / "data.txt")
        np.testing.assert_allclose(loaded.x, s.x, rtol=1e-11)
        np.testing.assert_allclose(loaded.y, s.y, rtol=1e-11)

    def test_confounded_export_includes_u(self, tmp_path):
        s = generate_confounded_discrete(30, ScmParams(), RngStream(18))
        paths = write_sample(s, tmp_path)
        assert [p.name for p in paths] == ["data.txt", "i_x.txt", "i_y.txt", "u.txt"]
        assert (tmp_path / "u.txt").read_text().count("\n") == 30

    def test_write_sample_deterministic(self, tmp_path):
        s = generate_chain_continuous(60, ScmParams(), RngStream(19))
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        write_sample(s, d1)
        write_sample(s, d2)
        assert (d1 / "data.txt").read_bytes() == (d2 / "data.txt").read_bytes()
