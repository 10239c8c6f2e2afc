"""
Tests for forward-model domain types.
"""

import numpy as np
import pytest

from apps.forward.models import Dataset, GenerativeModel, ModelParams
from apps.lattice.models import BinaryMask, LabelMap, LatticeDims


class TestModelParams:
    """Tests for ModelParams validation and serialisation."""

    def test_valid(self):
        """Test a valid parameter set."""
        params = ModelParams(pi=[0.2, 0.8], epsilon=0.01, beta_x=0.3, beta_h=0.0)
        assert params.K == 2
        assert params.pi.tolist() == [0.2, 0.8]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"pi": [0.5, 0.6]},
            {"pi": [-0.1, 1.1]},
            {"pi": [1.0]},
            {"epsilon": 1.0},
            {"epsilon": -0.01},
            {"beta_x": -1.0},
            {"beta_h": -0.5},
        ],
    )
    def test_invalid(self, kwargs):
        """Test simplex, epsilon range and non-negative temperatures."""
        params = {"pi": [0.5, 0.5], "epsilon": 0.1, "beta_x": 0.5, "beta_h": 0.5} | kwargs
        with pytest.raises(ValueError):
            ModelParams(**params)

    def test_dict_round_trip(self, binary_params):
        """Test to_dict / from_dict."""
        assert ModelParams.from_dict(binary_params.to_dict()) == binary_params

    def test_from_dict_renormalises(self):
        """Test rounded pi values are put back on the simplex."""
        params = ModelParams.from_dict({"pi": [0.333333, 0.333333, 0.333333], "epsilon": 0.0, "beta_x": 1, "beta_h": 1})
        assert params.pi.sum() == pytest.approx(1.0, abs=1e-12)

    def test_initial(self):
        """Test the estimation starting point."""
        params = ModelParams.initial(4)
        assert params.pi.tolist() == [0.25] * 4
        assert (params.epsilon, params.beta_x, params.beta_h) == (0.05, 0.5, 0.5)


class TestGenerativeModel:
    """Tests for GenerativeModel parsing."""

    @pytest.mark.parametrize(
        "value,expected",
        [
            ("I", GenerativeModel.MODEL_I),
            (1, GenerativeModel.MODEL_I),
            ("ModelII", GenerativeModel.MODEL_II),
            ("2", GenerativeModel.MODEL_II),
            ("model_ii", GenerativeModel.MODEL_II),
        ],
    )
    def test_parse(self, value, expected):
        """Test accepted spellings."""
        assert GenerativeModel.parse(value) == expected

    def test_parse_unknown(self):
        """Test an unknown model name."""
        with pytest.raises(ValueError):
            GenerativeModel.parse("III")


class TestDataset:
    """Tests for Dataset invariants."""

    def test_mismatched_lengths(self, binary_params):
        """Test masks and subjects must pair up."""
        dims = LatticeDims(2, 2)
        X = LabelMap.constant(dims, 0, 2)
        with pytest.raises(ValueError):
            Dataset(X=X, masks=[], subjects=[X], params=binary_params, model=GenerativeModel.MODEL_I, seed=0)

    def test_mismatched_dims(self, binary_params):
        """Test all maps share the lattice."""
        X = LabelMap.constant(LatticeDims(2, 2), 0, 2)
        Y = LabelMap.constant(LatticeDims(2, 3), 0, 2)
        with pytest.raises(ValueError):
            Dataset(
                X=X,
                masks=[BinaryMask.zeros(LatticeDims(2, 3))],
                subjects=[Y],
                params=binary_params,
                model=GenerativeModel.MODEL_I,
                seed=0,
            )

    def test_properties(self, binary_params):
        """Test M, K and dims."""
        dims = LatticeDims(3, 2)
        X = LabelMap(np.zeros(dims.shape), 2)
        dataset = Dataset(
            X=X,
            masks=[BinaryMask.zeros(dims)] * 3,
            subjects=[X] * 3,
            params=binary_params,
            model=GenerativeModel.MODEL_II,
            seed=5,
        )
        assert (dataset.M, dataset.K, dataset.dims) == (3, 2, dims)
