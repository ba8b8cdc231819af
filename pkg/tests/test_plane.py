import compas
import numpy
import pytest

import compas_fpp.plane.clusters
from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.kernels import grid_union_find
from compas_fpp.plane import PlaneWindow
from compas_fpp.plane import WindowDoubling
from compas_fpp.plane import cross_plane_distances
from compas_fpp.plane import estimate_mu
from compas_fpp.plane import find_T
from compas_fpp.plane import label_clusters
from compas_fpp.plane import mu_reference
from compas_fpp.plane import plane_distance
from compas_fpp.plane import window_doubling
from compas_fpp.plane.distances import axis_points
from compas_fpp.plane.distances import distances_from
from compas_fpp.plane.mu import window_ratio
from compas_fpp.rng import make_rng

# =============================================================================
# Windows
# =============================================================================


def test_window_indices():
    window = PlaneWindow.all_open(-2, 4, -1, 1)
    assert (window.width, window.height) == (7, 3)
    assert (window.x_max, window.y_max) == (4, 1)
    assert window.index((-2, -1)) == 0
    assert window.index((0, 0)) == 7
    for index in range(window.vertex_count):
        assert window.index(window.vertex(index)) == index
    with pytest.raises(ParameterError):
        window.index((5, 0))


def test_window_border_mask():
    window = PlaneWindow.all_open(0, 3, 0, 2)
    mask = window.border_mask()
    assert mask.sum() == window.vertex_count - 2
    assert not mask[window.index((1, 1))]
    assert not mask[window.index((2, 1))]


def test_window_shapes_are_checked():
    with pytest.raises(ContractError):
        PlaneWindow(0, 0, numpy.ones((2, 3), dtype=bool), numpy.ones((2, 2), dtype=bool))
    with pytest.raises(ParameterError):
        PlaneWindow.all_open(3, 2, 0, 0)
    with pytest.raises(ParameterError):
        PlaneWindow.all_open(0, 2, -1, 1).with_edge("d", (0, 0), False)


def test_window_sampling_and_json():
    window = PlaneWindow.sample(make_rng(3), 0.3, -3, 3, -2, 2)
    same = PlaneWindow.sample(make_rng(3), 0.3, -3, 3, -2, 2)
    assert numpy.array_equal(window.horizontal, same.horizontal)
    assert numpy.array_equal(window.vertical, same.vertical)
    copy = compas.json_loads(compas.json_dumps(window))
    assert numpy.array_equal(copy.horizontal, window.horizontal)
    assert numpy.array_equal(copy.vertical, window.vertical)
    assert (copy.x_min, copy.y_min, copy.eps) == (-3, -2, 0.3)


def test_window_crop():
    window = PlaneWindow.sample(make_rng(6), 0.4, -5, 9, -4, 4)
    crop = window.crop(-2, 6, -2, 2)
    assert (crop.x_min, crop.x_max, crop.y_min, crop.y_max) == (-2, 6, -2, 2)
    assert numpy.array_equal(crop.horizontal, window.horizontal[3:11, 2:7])
    assert numpy.array_equal(crop.vertical, window.vertical[3:12, 2:6])
    assert crop.eps == 0.4
    with pytest.raises(ParameterError):
        window.crop(-6, 6, -2, 2)
    with pytest.raises(ParameterError):
        window.crop(2, 1, 0, 0)


# =============================================================================
# Clusters
# =============================================================================


def test_clusters_of_extreme_windows():
    opened = label_clusters(PlaneWindow.all_open(0, 4, -2, 2))
    assert opened.cluster_count == 1
    assert opened.boundary_connected.all()
    closed = label_clusters(PlaneWindow.all_closed(0, 4, -2, 2))
    assert closed.cluster_count == 25
    assert not closed.is_boundary_connected((2, 0))
    assert closed.is_boundary_connected((0, 0))


def test_cluster_labels_are_smallest_indices():
    window = PlaneWindow.sample(make_rng(12), 0.45, 0, 9, 0, 9)
    clusters = label_clusters(window)
    for vertex_index, label in enumerate(clusters.labels):
        assert label <= vertex_index
        assert clusters.labels[label] == label


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_union_find_and_scipy_labels_agree(seed, monkeypatch):
    window = PlaneWindow.sample(make_rng(seed), 0.4, -6, 6, -5, 5)
    labels = numpy.empty(window.vertex_count, dtype=numpy.int64)
    grid_union_find(window.width, window.height, window.horizontal, window.vertical, labels)
    monkeypatch.setattr(compas_fpp.plane.clusters, "has_numba", False)
    fallback = label_clusters(window)
    assert numpy.array_equal(fallback.labels, labels)
    monkeypatch.setattr(compas_fpp.plane.clusters, "has_numba", True)
    compiled = label_clusters(window)
    assert numpy.array_equal(compiled.labels, labels)


def test_isolated_origin():
    window = PlaneWindow.all_open(-2, 2, -2, 2)
    for kind, vertex in (("h", (-1, 0)), ("h", (0, 0)), ("v", (0, -1)), ("v", (0, 0))):
        window = window.with_edge(kind, vertex, False)
    clusters = label_clusters(window)
    assert clusters.cluster_count == 2
    assert not clusters.is_boundary_connected((0, 0))
    assert not clusters.connected((0, 0), (1, 0))
    assert plane_distance(window, (0, 0), (1, 0)) is None


def origin_reaches_border(eps, radius, windows, seed):
    rng = make_rng(seed)
    hits = 0
    for _ in range(windows):
        window = PlaneWindow.sample(rng, eps, -radius, radius, -radius, radius)
        hits += label_clusters(window).is_boundary_connected((0, 0))
    return hits / windows


def test_origin_reaches_border_less_often_at_criticality():
    critical = origin_reaches_border(0.5, 16, 300, seed=1)
    dense = origin_reaches_border(0.05, 16, 300, seed=2)
    assert dense >= 0.99
    assert critical <= dense - 0.1


# =============================================================================
# Distances
# =============================================================================


def test_plane_distance_open_and_detour():
    window = PlaneWindow.all_open(0, 5, -2, 2)
    assert plane_distance(window, (0, 0), (5, 1)) == 6
    blocked = window.with_edge("h", (0, 0), False)
    assert plane_distance(blocked, (0, 0), (1, 0)) == 3
    assert plane_distance(blocked, (0, 0), (0, 0)) == 0


def test_cross_plane_distances_all_closed():
    window = PlaneWindow.all_closed(0, 8, -2, 2)
    distances = cross_plane_distances(window, (0, 0))
    for n in range(9):
        assert distances[window.index((n, 0))] == 2 * n + n % 2


def test_cross_plane_distances_use_open_horizontals():
    window = PlaneWindow.all_open(0, 6, -2, 2)
    distances = cross_plane_distances(window, (0, 0))
    assert distances[window.index((6, 0))] == 6
    assert distances[window.index((3, 2))] == 5


def test_opening_an_edge_never_disconnects_or_lengthens():
    rng = make_rng(17)
    window = PlaneWindow.sample(rng, 0.4, -6, 6, -5, 5)
    clusters = label_clusters(window)
    before = distances_from(window, (0, 0))
    for kind, flags in (("h", window.horizontal), ("v", window.vertical)):
        closed = numpy.argwhere(~flags)
        for pick in rng.integers(0, len(closed), size=20):
            x, y = closed[pick]
            opened = window.with_edge(kind, (x + window.x_min, y + window.y_min), True)
            labels = label_clusters(opened).labels
            assert numpy.array_equal(labels[clusters.labels], labels)
            assert (distances_from(opened, (0, 0)) <= before).all()


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_distance_is_finite_iff_labels_agree(seed):
    window = PlaneWindow.sample(make_rng(seed), 0.45, -6, 6, -5, 5)
    clusters = label_clusters(window)
    finite = numpy.isfinite(distances_from(window, (0, 0)))
    assert numpy.array_equal(finite, clusters.labels == clusters.label((0, 0)))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_distances_dominate_l1(seed):
    window = PlaneWindow.sample(make_rng(seed), 0.3, -5, 15, -5, 5)
    distances = distances_from(window, (0, 0))
    l1 = numpy.array([abs(x) + abs(y) for x, y in map(window.vertex, range(window.vertex_count))])
    assert (distances >= l1).all()
    for n in range(1, 16):
        length = plane_distance(window, (0, 0), (n, 0))
        assert length is None or length >= n


def test_find_T():
    window = PlaneWindow.all_open(-2, 10, -2, 2)
    clusters = label_clusters(window)
    assert list(axis_points(window, 4)) == [(4, 0), (8, 0)]
    assert find_T(window, clusters, 3, 2) == (6, 0)
    assert find_T(window, clusters, 3, 4) is None
    closed = PlaneWindow.all_closed(-2, 10, -2, 2)
    assert find_T(closed, label_clusters(closed), 3, 1) is None
    with pytest.raises(ParameterError):
        find_T(window, clusters, 3, 0)
    with pytest.raises(ParameterError):
        list(axis_points(window, 0))


def first_point_exceeds(eps, n, windows, seed):
    rng = make_rng(seed)
    exceeded = 0
    for _ in range(windows):
        window = PlaneWindow.sample(rng, eps, 0, 2 * n, -n, n)
        exceeded += find_T(window, label_clusters(window), n, 1) != (n, 0)
    return exceeded / windows


@pytest.mark.slow
def test_first_point_exceedance_scales_like_eps_to_the_fourth():
    coarse = first_point_exceeds(0.3, 3, 200000, seed=1)
    fine = first_point_exceeds(0.15, 3, 200000, seed=2)
    assert fine > 0
    assert 8 <= coarse / fine <= 32


# =============================================================================
# Time constant
# =============================================================================


def test_mu_reference():
    reference = mu_reference(0.1)
    assert reference["first_order"] == pytest.approx(1.05)
    assert reference["upper_bound"] == pytest.approx(1.1)
    assert reference["detour"] == pytest.approx(1.2)


def test_estimate_mu_all_open():
    estimate = estimate_mu(0.0, 10, replicas=100)
    assert estimate.mu_hat == 1.0
    assert estimate.stderr == 0.0
    assert estimate.admissible_fraction == 1.0
    assert estimate.origin_disconnected_fraction == 0.0
    assert estimate.margin == 5
    assert estimate.slope is None


def test_estimate_mu_is_independent_of_workers():
    a = estimate_mu(0.1, 12, replicas=100, seed=5, workers=1)
    b = estimate_mu(0.1, 12, replicas=100, seed=5, workers=4)
    assert a.mu_hat == b.mu_hat
    assert a.stderr == b.stderr
    assert 1.0 <= a.mu_hat <= 1.0 + 2 * 0.1 + 10 * a.stderr


def test_estimate_mu_parameters():
    with pytest.raises(ParameterError):
        estimate_mu(0.1, 10, margin=4)
    with pytest.raises(ParameterError):
        estimate_mu(0.1, 10, replicas=99)
    with pytest.raises(ParameterError):
        estimate_mu(0.1, 0)
    with pytest.raises(ParameterError):
        estimate_mu(-0.1, 10)


def test_window_doubling_all_open():
    doubling = window_doubling(0.0, 10, replicas=100)
    assert (doubling.inner.margin, doubling.outer.margin) == (5, 10)
    assert doubling.shift == 0.0
    assert doubling.stable()


def test_window_doubling_shares_edges():
    a = window_doubling(0.1, 12, replicas=100, seed=4, workers=1)
    b = window_doubling(0.1, 12, replicas=100, seed=4, workers=3)
    assert a.shift == b.shift
    copy = compas.json_loads(compas.json_dumps(a))
    assert isinstance(copy, WindowDoubling)
    assert copy.inner.mu_hat == a.inner.mu_hat
    assert copy.outer.stderr == a.outer.stderr
    for seed in range(20):
        outer = PlaneWindow.sample(make_rng(seed), 0.2, -16, 28, -16, 16)
        small = window_ratio(outer.crop(-8, 20, -8, 8), 12)
        large = window_ratio(outer, 12)
        if small[0] and large[0]:
            assert large[2] <= small[2]
    with pytest.raises(ParameterError):
        window_doubling(0.1, 10, margin=4)


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.02, 0.05])
def test_estimate_mu_first_order_slope(eps):
    estimate = estimate_mu(eps, 400, margin=200, replicas=400, seed=0)
    assert 0.35 <= estimate.slope <= 0.70
    assert estimate.mu_hat <= 1 + eps + 3 * estimate.stderr


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.02, 0.05])
def test_window_doubling_is_stable(eps):
    doubling = window_doubling(eps, 400, margin=200, replicas=400, seed=0)
    assert doubling.stable()
