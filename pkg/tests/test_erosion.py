import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_acyclic_codes, walk_routing
from riparian_accounts.classes import ClassParameterRow, ClassTable
from riparian_accounts.errors import AccountError, AlignmentError, HydrologyError, ParameterError
from riparian_accounts.erosion import RusleInputs, filtration_service, route_sediment, soil_loss
from riparian_accounts.grid import Grid, LandCoverGrid
from riparian_accounts.hydrology import FlowDirGrid


def chain(n=3, gen=(10.0, 0.0, 0.0), classes=(1, 2, 3)):
    """A row draining east to an outlet at its last cell."""
    codes = FlowDirGrid(Grid.from_array([[1.0] * (n - 1) + [0.0]], cellsize=100, nodata=255.0))
    loss = Grid.from_array([list(gen)], cellsize=100)
    lc = LandCoverGrid.from_grid(Grid.from_array([list(classes)], cellsize=100))
    return loss, codes, lc


def random_catchment(seed, nrows, ncols, nclasses=4):
    rng = np.random.default_rng(seed)
    codes, valid = random_acyclic_codes(rng, nrows, ncols, p_nodata=0.1)
    ids = np.where(valid, rng.integers(1, nclasses + 1, (nrows, ncols)), -9999).astype(float)
    gen = np.where(valid, rng.exponential(5.0, (nrows, ncols)), -9999.0)
    eff = {c: float(rng.random()) for c in range(1, nclasses + 1)}
    return (
        Grid.from_array(gen),
        FlowDirGrid(Grid.from_array(codes, nodata=255.0)),
        LandCoverGrid.from_grid(Grid.from_array(ids)),
        eff,
        codes,
        valid,
    )


class TestSoilLoss:
    def _inputs(self, r=1500.0, k=0.04, ls=1.2, c=0.1, p=1.0, cellsize=100.0):
        g = Grid.from_array(np.ones((2, 2)), cellsize=cellsize)
        lc = LandCoverGrid.from_grid(g)
        return RusleInputs(g.with_values(np.full((2, 2), r)), g.with_values(np.full((2, 2), k)), g.with_values(np.full((2, 2), ls)), {1: c}, {1: p}), lc

    def test_scalar_product(self):
        inputs, lc = self._inputs()
        np.testing.assert_allclose(soil_loss(inputs, lc).values, 1500 * 0.04 * 1.2 * 0.1 * 1.0, rtol=1e-14)
        assert soil_loss(inputs, lc).values[0, 0] == pytest.approx(7.2)

    def test_cell_area_scaling(self):
        inputs, lc = self._inputs(cellsize=10.0)
        assert soil_loss(inputs, lc).values[0, 0] == pytest.approx(0.072)

    def test_zero_cover(self):
        inputs, lc = self._inputs(c=0.0)
        assert np.all(soil_loss(inputs, lc).values == 0)

    def test_linear_in_r(self):
        a, lc = self._inputs(r=700.0)
        b, _ = self._inputs(r=1400.0)
        np.testing.assert_allclose(soil_loss(b, lc).values, 2 * soil_loss(a, lc).values, rtol=1e-15)

    def test_missing_class(self):
        inputs, _ = self._inputs()
        lc = LandCoverGrid.from_grid(Grid.from_array([[1, 2], [1, 1]], cellsize=100))
        with pytest.raises(ParameterError, match="class 2"):
            soil_loss(inputs, lc)

    def test_nodata_propagates(self):
        g = Grid.from_array([[1.0, -9999.0]], cellsize=100)
        inputs = RusleInputs(g.with_values([[100.0, 100.0]]), g.with_values([[0.1, 0.1]]), g.with_values([[1.0, 1.0]]), {1: 0.5}, {1: 1.0})
        out = soil_loss(inputs, LandCoverGrid.from_grid(g))
        assert out.valid.tolist() == [[True, False]]

    def test_from_table(self):
        t = ClassTable([ClassParameterRow(1, "a", True, 0.2, 0.5, 0.1, 0, 0, 0)])
        g = Grid.from_array(np.ones((1, 1)), cellsize=100)
        inputs = RusleInputs.from_table(g, g, g, t)
        assert soil_loss(inputs, LandCoverGrid.from_grid(g)).values[0, 0] == pytest.approx(0.1)

    def test_misaligned(self):
        with pytest.raises(AlignmentError):
            RusleInputs(Grid.from_array([[1.0]]), Grid.from_array([[1.0]], cellsize=2), Grid.from_array([[1.0]]), {}, {})


class TestRouteSediment:
    def test_full_trap(self):
        loss, d, lc = chain(2, gen=(10.0, 0.0), classes=(1, 2))
        res = route_sediment(loss, d, {1: 0.0, 2: 1.0}, lc)
        assert res.trapped.values.tolist() == [[0.0, 10.0]]
        assert res.exported_at_outlets == 0.0

    def test_two_half_traps(self):
        loss, d, lc = chain()
        res = route_sediment(loss, d, {1: 0.0, 2: 0.5, 3: 0.5}, lc)
        assert res.trapped.values.tolist() == [[0.0, 5.0, 2.5]]
        assert res.exported_at_outlets == 2.5
        assert res.per_class_trapped == {1: 0.0, 2: 5.0, 3: 2.5}

    def test_own_load_not_trapped(self):
        loss, d, lc = chain(1, gen=(4.0,), classes=(1,))
        res = route_sediment(loss, d, {1: 1.0}, lc)
        assert res.total_trapped == 0.0 and res.exported_at_outlets == 4.0

    def test_zero_efficiency_passes_everything(self):
        loss, d, lc, eff, *_ = random_catchment(1, 8, 8)
        res = route_sediment(loss, d, dict.fromkeys(eff, 0.0), lc)
        assert res.total_trapped == 0.0
        assert res.exported_at_outlets == pytest.approx(res.total_generated, rel=1e-12)

    def test_efficiency_out_of_range(self):
        loss, d, lc = chain()
        with pytest.raises(ParameterError, match="trap_eff"):
            route_sediment(loss, d, {1: 0.1, 2: 1.2, 3: 0.0}, lc)

    def test_negative_loss(self):
        loss, d, lc = chain(gen=(-1.0, 0.0, 0.0))
        with pytest.raises(ParameterError, match="non-negative"):
            route_sediment(loss, d, {1: 0.1, 2: 0.1, 3: 0.1}, lc)

    def test_cycle(self):
        loss = Grid.from_array([[1.0, 1.0]])
        d = FlowDirGrid(Grid.from_array([[1.0, 16.0]], nodata=255.0))
        lc = LandCoverGrid.from_grid(Grid.from_array([[1, 1]]))
        with pytest.raises(HydrologyError, match="cycle"):
            route_sediment(loss, d, {1: 0.5}, lc)

    def test_unclassified_cell_passes_load(self):
        loss, d, _ = chain()
        lc = LandCoverGrid.from_grid(Grid.from_array([[1, -9999, 3]], cellsize=100))
        res = route_sediment(loss, d, {1: 0.0, 3: 0.5}, lc)
        assert res.trapped.values.tolist() == [[0.0, 0.0, 5.0]]

    def test_matches_path_walking_oracle(self, backend):
        for seed in range(40):
            loss, d, lc, eff, codes, valid = random_catchment(seed, 12, 12)
            res = route_sediment(loss, d, eff, lc)
            gen = np.where(valid, loss.values, 0.0)
            cell_eff = np.vectorize(lambda c: eff.get(int(c), 0.0))(np.where(valid, lc.grid.values, 0))
            trapped, exported = walk_routing(codes, valid, gen, cell_eff)
            np.testing.assert_allclose(np.where(valid, res.trapped.values, 0.0), trapped, rtol=1e-9, atol=1e-12)
            assert res.exported_at_outlets == pytest.approx(exported, rel=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.integers(1, 12))
    def test_mass_conservation(self, seed, nrows, ncols):
        loss, d, lc, eff, *_ = random_catchment(seed, nrows, ncols)
        res = route_sediment(loss, d, eff, lc)
        assert res.total_trapped + res.exported_at_outlets == pytest.approx(res.total_generated, rel=1e-6, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.floats(0, 1))
    def test_monotone_in_efficiency(self, seed, cls, new):
        loss, d, lc, eff, *_ = random_catchment(seed, 8, 8)
        before = route_sediment(loss, d, eff, lc)
        raised = {**eff, cls: max(eff[cls], new)}
        after = route_sediment(loss, d, raised, lc)
        assert after.total_trapped >= before.total_trapped - 1e-9
        assert after.exported_at_outlets <= before.exported_at_outlets + 1e-9

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
    def test_scale_equivariance(self, seed, s):
        loss, d, lc, eff, *_ = random_catchment(seed, 7, 9)
        base = route_sediment(loss, d, eff, lc)
        scaled_loss = loss.with_values(np.where(loss.valid, loss.values * s, loss.nodata))
        scaled = route_sediment(scaled_loss, d, eff, lc)
        np.testing.assert_allclose(scaled.trapped.values[scaled.trapped.valid], s * base.trapped.values[base.trapped.valid], rtol=1e-12, atol=1e-300)
        assert scaled.exported_at_outlets == pytest.approx(s * base.exported_at_outlets, rel=1e-12)


class TestFiltrationService:
    def test_per_class_quantities(self):
        loss, d, lc = chain()
        res = route_sediment(loss, d, {1: 0.0, 2: 0.5, 3: 0.5}, lc)
        fs = filtration_service(res, lc.masked([2, 3]))
        assert fs[2].quantity == 5.0 and fs[3].quantity == 2.5
        assert fs[2].area_ha == 1.0 and fs[2].per_ha == 5.0
        assert 1 not in fs

    def test_mask_without_trapping_cells(self):
        loss, d, lc = chain()
        res = route_sediment(loss, d, {1: 0.0, 2: 0.5, 3: 0.5}, lc)
        assert filtration_service(res, lc.masked([1]))[1].quantity == 0.0

    def test_empty_mask(self):
        loss, d, lc = chain()
        res = route_sediment(loss, d, {1: 0.0, 2: 0.5, 3: 0.5}, lc)
        with pytest.raises(AccountError, match="empty"):
            filtration_service(res, lc.masked([42]))

    def test_per_ha_times_area(self):
        loss, d, lc, eff, *_ = random_catchment(3, 10, 10)
        fs = filtration_service(route_sediment(loss, d, eff, lc), lc)
        for q in fs.values():
            assert q.per_ha * q.area_ha == pytest.approx(q.quantity, rel=1e-12)
