"""Acceptance gate: the ten pinned experiments, one test each.

Each test runs the corresponding experiment from cnslab.experiments at its
stated tolerances and budget, prints the scored lines, and fails with the
full report if any line is out of bounds.  `cnslab accept full` runs the
same experiments from the command line.
"""

from cnslab import experiments


def run_experiment(index):
    result = experiments.CHECKS[index]()
    print()
    print(result.render())
    assert result.passed, "experiment %d failed:\n%s" % (index, result.render())


def test_01_rational_round_trip_is_exact():
    run_experiment(1)


def test_02_group_action_preserves_invariants():
    run_experiment(2)


def test_03_low_rank_systems_reach_canonical_form():
    run_experiment(3)


def test_04_flat_reduction_conserves_kernel_quadratics():
    run_experiment(4)


def test_05_split_step_order_and_kernel_mass_drift():
    run_experiment(5)


def test_06_two_mode_rotation_rate_and_sqrt_t_bounds():
    run_experiment(6)


def test_07_log_growth_slope_in_triple_resonance():
    run_experiment(7)


def test_08_free_driven_slope_direction_and_magnitude():
    run_experiment(8)


def test_09_dissipative_ray_decays_conjugate_amplifies():
    run_experiment(9)


def test_10_signature_table_covers_nine_patterns():
    run_experiment(10)
