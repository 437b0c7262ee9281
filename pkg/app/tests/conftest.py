"""
Shared fixtures: the reference two-tier network and a few variants.
"""

import pytest

from app.config.settings import get_reference_network
from app.services.params_service import params_from_config


@pytest.fixture
def reference_params():
    """Reference network: lambda_2 / lambda_1 = 10, D = 400 m."""
    return params_from_config(get_reference_network())


@pytest.fixture
def uniform_params():
    return params_from_config(get_reference_network(inner_radius_m=0.0))


@pytest.fixture
def dense_femto_params():
    """lambda_2 / lambda_1 = 40."""
    return params_from_config(get_reference_network(femto_density_per_km2=40.0))
