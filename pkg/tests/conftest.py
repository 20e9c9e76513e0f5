import pytest

from teahouse.core import DifficultyParams, validate_profile


@pytest.fixture
def profile():
    return validate_profile("p001", 67, "female", "10-12y", 27)


@pytest.fixture
def params():
    return DifficultyParams()


@pytest.fixture
def fast_params():
    """Short, grid-aligned durations so timeout-heavy tests stay quick."""
    return DifficultyParams(
        dimsum_item_count=3,
        memorize_duration_s=1.0,
        dimsum_time_limit_s=8.0,
        steamer_item_count=2,
        cook_time_s=2.0,
        overcook_time_s=4.0,
        steamer_time_limit_s=12.0,
        cashier_trial_count=2,
        cashier_time_limit_s=5.0,
        max_change_amount=100,
    )
