"""Compiled inner loops.

The kernels are compiled with :func:`numba.njit` when numba is available
(``pip install compas_fpp[hpc]``) and run as plain Python otherwise.
They operate on preallocated numpy arrays only.
"""

try:
    from numba import njit
except ImportError:
    has_numba = False
else:
    has_numba = True


def _jit(func):
    if has_numba:
        return njit(cache=True, nogil=True)(func)
    return func


@_jit
def tasep_run(state, alpha, beta, gamma, uniforms, left, hits):  # pragma: no cover
    """Advance a parallel update TASEP by ``len(uniforms)`` steps, in place.

    Parameters
    ----------
    state : numpy.ndarray
        ``uint8`` occupancy of the ``S`` positions. Modified in place.
    alpha, beta, gamma : float
        Jump, entry and exit probabilities.
    uniforms : numpy.ndarray
        Shape ``(steps, S + 1)``. Column 0 drives the entry, column ``p + 1`` the jump
        out of position ``p`` and column ``S`` the exit. An event fires iff its draw is below its rate.
    left : int
        Position of the recorded pair ``(left, left + 1)``.
    hits : numpy.ndarray
        ``uint8`` output of length ``steps``: 1 iff ``left`` is occupied and ``left + 1`` empty
        before the step.

    """
    size = state.shape[0]
    current = state.copy()
    following = state.copy()
    for t in range(uniforms.shape[0]):
        if current[left] == 1 and current[left + 1] == 0:
            hits[t] = 1
        else:
            hits[t] = 0
        for p in range(size):
            following[p] = current[p]
        if current[0] == 0 and uniforms[t, 0] < beta:
            following[0] = 1
        for p in range(size - 1):
            if current[p] == 1 and current[p + 1] == 0 and uniforms[t, p + 1] < alpha:
                following[p] = 0
                following[p + 1] = 1
        if current[size - 1] == 1 and uniforms[t, size] < gamma:
            following[size - 1] = 0
        for p in range(size):
            current[p] = following[p]
    for p in range(size):
        state[p] = current[p]


@_jit
def _find(parent, x):  # pragma: no cover
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@_jit
def _union(parent, a, b):  # pragma: no cover
    root_a = _find(parent, a)
    root_b = _find(parent, b)
    if root_a < root_b:
        parent[root_b] = root_a
    elif root_b < root_a:
        parent[root_a] = root_b


@_jit
def grid_union_find(width, height, horizontal, vertical, labels):  # pragma: no cover
    """Union-find labelling of the open subgraph of a vertex grid.

    Vertex ``(x, y)`` has index ``x * height + y``. On return ``labels[v]``
    is the smallest vertex index of the component of ``v``.
    """
    for v in range(width * height):
        labels[v] = v
    for x in range(width - 1):
        for y in range(height):
            if horizontal[x, y]:
                _union(labels, x * height + y, (x + 1) * height + y)
    for x in range(width):
        for y in range(height - 1):
            if vertical[x, y]:
                _union(labels, x * height + y, x * height + y + 1)
    for v in range(width * height):
        labels[v] = _find(labels, v)