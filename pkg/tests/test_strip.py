import io

import compas
import numpy
import pytest

from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.rng import make_rng
from compas_fpp.strip import Box
from compas_fpp.strip import DistanceProfile
from compas_fpp.strip import EdgeColumn
from compas_fpp.strip import Model
from compas_fpp.strip import StripConfiguration
from compas_fpp.strip import StripGeometry
from compas_fpp.strip import batched_cross_distances
from compas_fpp.strip import check_event_A
from compas_fpp.strip import cross_distance
from compas_fpp.strip import cross_step
from compas_fpp.strip import cross_sweep
from compas_fpp.strip import dump_edges
from compas_fpp.strip import event_a_bound
from compas_fpp.strip import event_a_mask
from compas_fpp.strip import load_edges
from compas_fpp.strip import sample_column
from compas_fpp.strip import sample_configuration
from compas_fpp.strip import shortest_path_oracle
from compas_fpp.strip import standard_distance
from compas_fpp.strip.edgeio import dumps_edges
from compas_fpp.strip.edgeio import loads_edges
from compas_fpp.strip.oracle import oracle_profile
from compas_fpp.strip.sampling import sample_standard_arrays
from compas_fpp.strip.standard import closed_edges_per_square
from compas_fpp.strip.standard import event_a_bound_sharp

# =============================================================================
# Geometry
# =============================================================================


def test_geometry_rows_and_sites():
    geometry = StripGeometry(3, "standard")
    assert geometry.rows == 7
    assert geometry.sites == 6
    assert not geometry.is_cross
    assert geometry.row_index(3) == 6
    with pytest.raises(ParameterError):
        geometry.row_index(4)
    with pytest.raises(ParameterError):
        StripGeometry(0)


def test_column_shapes_are_checked():
    with pytest.raises(ContractError):
        EdgeColumn([1, 1])
    with pytest.raises(ContractError):
        EdgeColumn([1, 1, 1], [1, 1, 1])
    column = EdgeColumn([1, 0, 1], [0, 1])
    assert column.closed_count == 2
    with pytest.raises(ContractError):
        column.check(StripGeometry(1))


def test_profile_invariants():
    DistanceProfile(1, [2, 1, 2]).check()
    with pytest.raises(ContractError):
        DistanceProfile(0, [2, 0, 2]).check()
    with pytest.raises(ContractError):
        DistanceProfile(1, [1, 0, 1]).check()


def test_configuration_json_round_trip():
    geometry = StripGeometry(2, Model.STANDARD)
    configuration = sample_configuration(make_rng(11), geometry, 0.3, 5)
    copy = compas.json_loads(compas.json_dumps(configuration))
    assert copy == configuration
    assert copy.n == 5


def test_configuration_from_arrays_inverts_arrays():
    geometry = StripGeometry(2, Model.STANDARD)
    configuration = sample_configuration(make_rng(3), geometry, 0.4, 6)
    rebuilt = StripConfiguration.from_arrays(geometry, configuration.horizontal_array(), configuration.vertical_array())
    assert rebuilt == configuration


# =============================================================================
# Sampling
# =============================================================================


def test_sample_configuration_matches_successive_columns():
    geometry = StripGeometry(2, Model.STANDARD)
    configuration = sample_configuration(make_rng(9), geometry, 0.25, 4)
    rng = make_rng(9)
    origin = rng.random(geometry.sites) >= 0.25
    columns = [sample_column(rng, geometry, 0.25) for _ in range(4)]
    assert numpy.array_equal(configuration.origin_vertical, origin)
    assert configuration.columns == columns


def test_sampling_extremes():
    geometry = StripGeometry(2)
    assert sample_column(make_rng(0), geometry, 0.0) == EdgeColumn.all_open(geometry)
    assert sample_column(make_rng(0), geometry, 1.0) == EdgeColumn.all_closed(geometry)
    with pytest.raises(ParameterError):
        sample_column(make_rng(0), geometry, 1.5)


@pytest.mark.slow
def test_sample_column_closed_fraction():
    geometry = StripGeometry(4)
    rng = make_rng(11)
    columns = 10**6
    closed = sum(sample_column(rng, geometry, 0.3).closed_count for _ in range(columns))
    total = columns * geometry.rows
    sigma = (0.3 * 0.7 / total) ** 0.5
    assert abs(closed / total - 0.3) <= 4 * sigma


# =============================================================================
# Cross model distances
# =============================================================================


def test_cross_step_all_open():
    geometry = StripGeometry(2)
    profile = cross_step(DistanceProfile.initial(2), EdgeColumn.all_open(geometry))
    assert profile.column_index == 1
    assert profile.d.tolist() == [3, 2, 1, 2, 3]


def test_cross_step_single_closed_edge():
    # the closed edge of row 0 forces a diagonal of length 2 and a vertical step
    profile = cross_step(DistanceProfile.initial(1), EdgeColumn([1, 0, 1]))
    assert profile.d.tolist() == [2, 3, 2]


def test_cross_distance_all_closed():
    geometry = StripGeometry(3)
    for n in range(1, 10):
        assert cross_distance([EdgeColumn.all_closed(geometry)] * n) == 2 * n + n % 2


def test_cross_distance_all_open():
    geometry = StripGeometry(3)
    profiles = cross_sweep([EdgeColumn.all_open(geometry)] * 6)
    assert [profile.column_index for profile in profiles] == list(range(7))
    assert profiles[-1].d.tolist() == [6 + abs(j) for j in range(-3, 4)]


def test_cross_step_rejects_standard_columns():
    geometry = StripGeometry(1, Model.STANDARD)
    with pytest.raises(ContractError):
        cross_step(DistanceProfile.initial(1), EdgeColumn.all_open(geometry))


def test_sweep_matches_oracle_on_random_segments():
    rng = make_rng(2024)
    for instance in range(60):
        K = 1 + instance % 4
        n = 1 + int(rng.integers(0, 25))
        eps = float(rng.choice([0.1, 0.3, 0.5, 0.8]))
        configuration = sample_configuration(rng, StripGeometry(K), eps, n)
        profiles = cross_sweep(configuration)
        for i in (1, n // 2 + 1, n):
            oracle = oracle_profile(configuration.head(i), i)
            assert oracle.tolist() == profiles[i].d.tolist()


def test_batched_distances_match_single_sweeps():
    rng = make_rng(5)
    horizontal = rng.random((20, 12, 5)) >= 0.3
    batched = batched_cross_distances(horizontal)
    geometry = StripGeometry(2)
    for b in range(20):
        configuration = StripConfiguration.from_arrays(geometry, horizontal[b])
        assert batched[b].tolist() == cross_sweep(configuration)[-1].d.tolist()


def test_opening_a_closed_edge_never_increases_cross_distances():
    rng = make_rng(31)
    base = rng.random((25, 7)) >= 0.4
    before = batched_cross_distances(base[None])[0]
    assert before[3] >= 25
    closed = numpy.argwhere(~base)
    variants = numpy.repeat(base[None], 300, axis=0)
    for variant, pick in zip(variants, rng.integers(0, len(closed), size=300)):
        i, row = closed[pick]
        variant[i, row] = True
    after = batched_cross_distances(variants)
    assert (after <= before).all()
    assert (after[:, 3] >= 25).all()


def test_oracle_doctest_value():
    geometry = StripGeometry(2)
    columns = [EdgeColumn.all_open(geometry)] * 3
    assert shortest_path_oracle(geometry, columns, (0, 0), (3, -2)) == 5
    with pytest.raises(ParameterError):
        shortest_path_oracle(geometry, columns, (0, 0), (4, 0))


# =============================================================================
# Standard model and event A
# =============================================================================


def test_standard_distance_all_open_and_disconnected():
    geometry = StripGeometry(1, Model.STANDARD)
    assert standard_distance(geometry, [EdgeColumn.all_open(geometry)] * 4, 4) == 4
    assert standard_distance(geometry, [EdgeColumn.all_open(geometry)] * 4, 0) == 0
    cut = [EdgeColumn.all_open(geometry), EdgeColumn([0, 0, 0], [1, 1]), EdgeColumn.all_open(geometry)]
    assert standard_distance(geometry, cut, 3) is None
    with pytest.raises(ParameterError):
        standard_distance(StripGeometry(1), cut, 3)


def test_standard_distance_detour():
    geometry = StripGeometry(1, Model.STANDARD)
    columns = [EdgeColumn([1, 0, 1], [1, 1])]
    assert standard_distance(geometry, columns, 1) == 3


def test_opening_a_closed_edge_never_increases_standard_distances():
    geometry = StripGeometry(1, Model.STANDARD)
    for seed in range(10):
        configuration = sample_configuration(make_rng(seed), geometry, 0.4, 6)
        horizontal = configuration.horizontal_array()
        vertical = configuration.vertical_array()
        before = standard_distance(geometry, configuration, 6)
        for flags in (horizontal, vertical):
            for index in numpy.argwhere(~flags):
                flags[tuple(index)] = True
                opened = StripConfiguration.from_arrays(geometry, horizontal, vertical)
                after = standard_distance(geometry, opened, 6)
                flags[tuple(index)] = False
                if before is not None:
                    assert after is not None
                    assert 6 <= after <= before


def test_closed_edges_per_square_and_event_A():
    geometry = StripGeometry(1, Model.STANDARD)
    good = StripConfiguration(geometry, [EdgeColumn([1, 0, 1], [1, 1])])
    bad = StripConfiguration(geometry, [EdgeColumn([1, 0, 1], [0, 1])])
    assert closed_edges_per_square(good.horizontal_array(), good.vertical_array()).tolist() == [[1, 1]]
    assert closed_edges_per_square(bad.horizontal_array(), bad.vertical_array()).tolist() == [[2, 1]]
    assert check_event_A(geometry, good)
    assert not check_event_A(geometry, bad)
    assert check_event_A(geometry, bad, box=Box(0, 1, 0, 1))
    with pytest.raises(ParameterError):
        check_event_A(geometry, bad, box=Box(0, 2, -1, 1))


def test_event_a_mask_matches_single_checks():
    horizontal, vertical = sample_standard_arrays(make_rng(8), 2, 0.15, 50, 6)
    mask = event_a_mask(horizontal, vertical)
    geometry = StripGeometry(2, Model.STANDARD)
    for b in range(50):
        configuration = StripConfiguration.from_arrays(geometry, horizontal[b], vertical[b])
        assert bool(mask[b]) == check_event_A(geometry, configuration)


def test_event_a_bounds():
    assert event_a_bound(3, 60, 0.05) == pytest.approx(9.9)
    assert event_a_bound_sharp(1, 1, 0.1) == pytest.approx(2 * (0.06 + 0.004 + 0.0001))
    assert event_a_bound_sharp(4, 50, 0.02) < event_a_bound(4, 50, 0.02)


# =============================================================================
# Edge files
# =============================================================================


def test_edge_file_round_trip(tmp_path):
    configuration = sample_configuration(make_rng(1), StripGeometry(2, Model.STANDARD), 0.3, 7)
    path = tmp_path / "edges.txt"
    dump_edges(configuration, str(path))
    assert load_edges(str(path)) == configuration
    text = path.read_text()
    assert text.startswith("# K=2 model=standard\norigin V:")


def test_edge_file_streams():
    configuration = sample_configuration(make_rng(1), StripGeometry(1), 0.5, 3)
    stream = io.StringIO()
    dump_edges(configuration, stream)
    stream.seek(0)
    assert load_edges(stream) == configuration


def test_edge_file_literal():
    configuration = loads_edges("# K=1 model=cross\n0 H:101\n\n# comment\n1 H:111\n")
    assert configuration.n == 2
    assert configuration.columns[0].horizontal.tolist() == [True, False, True]
    assert dumps_edges(configuration) == "# K=1 model=cross\n0 H:101\n1 H:111\n"


@pytest.mark.parametrize(
    "text, line",
    [
        ("0 H:101\n", "line 1"),
        ("# K=1 model=cross\n0 H:1011\n", "line 2"),
        ("# K=1 model=cross\n1 H:101\n", "line 2"),
        ("# K=1 model=cross\n0 H:1x1\n", "line 2"),
        ("# K=1 model=hexagonal\n", "line 1"),
    ],
)
def test_edge_file_errors_name_the_line(text, line):
    with pytest.raises(ParameterError) as error:
        loads_edges(text)
    assert line in str(error.value)


@pytest.mark.slow
def test_sweep_matches_oracle_acceptance_scale():
    rng = make_rng(7)
    for _ in range(1000):
        K = 1 + int(rng.integers(0, 8))
        n = 1 + int(rng.integers(0, 200))
        eps = float(rng.random())
        configuration = sample_configuration(rng, StripGeometry(K), eps, n)
        assert oracle_profile(configuration, n).tolist() == cross_sweep(configuration)[-1].d.tolist()
