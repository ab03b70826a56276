import dataclasses

import pytest

from slidevar import ValidationError, property_names, run_all, run_property
from slidevar.checks import NORM_GRID_BETAS, NORM_GRID_GAMMAS


class TestRunner:
    def test_names_are_ordered(self):
        assert property_names() == tuple(f"P{i}" for i in range(1, 13))

    def test_unknown_property_rejected(self):
        with pytest.raises(ValidationError):
            run_property("P99")

    def test_case_count_respected(self):
        outcome = run_property("P1", cases=17, seed=3)
        assert outcome.cases == 17
        assert outcome.name == "P1"
        assert outcome.description

    def test_zero_cases_rejected(self):
        with pytest.raises(ValidationError):
            run_property("P2", cases=0)

    def test_same_seed_same_outcome(self):
        a = run_property("P6", cases=25, seed=42)
        b = run_property("P6", cases=25, seed=42)
        assert dataclasses.asdict(a) == dataclasses.asdict(b)

    def test_norm_grid_covers_all_families_and_enough_combos(self):
        outcome = run_property("P11")
        per_beta = 3 * len(NORM_GRID_GAMMAS) + 2  # three shaped families + flat + step
        assert outcome.cases == len(NORM_GRID_BETAS) * per_beta
        assert outcome.cases >= 150

    def test_run_all_covers_the_suite(self):
        outcomes = run_all(cases=5, seed=0)
        assert tuple(o.name for o in outcomes) == property_names()

    def test_subset_selection(self):
        outcomes = run_all(cases=5, seed=0, names=("P3", "P7"))
        assert tuple(o.name for o in outcomes) == ("P3", "P7")


class TestPropertiesHold:
    """A light pass over every property; the acceptance suite runs the full
    1000-case load."""

    @pytest.mark.parametrize("name", [f"P{i}" for i in range(1, 13)])
    def test_no_failures_at_modest_load(self, name):
        outcome = run_property(name, cases=120, seed=8)
        assert outcome.passed, outcome.counterexample
        assert outcome.failures == 0
        assert outcome.counterexample is None
