"""Compiled one-to-all distance kernels (BFS and binary-heap Dijkstra)."""

import numpy as np
from numba import njit

INF = np.iinfo(np.int64).max // 4


@njit(cache=True, nogil=True)
def bfs(indptr, indices, source, dist, queue):
    n = dist.shape[0]
    for i in range(n):
        dist[i] = INF
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] == INF:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return tail


@njit(cache=True, nogil=True)
def _sift_up(keys, vals, pos):
    k = keys[pos]
    x = vals[pos]
    while pos > 0:
        parent = (pos - 1) >> 1
        if keys[parent] <= k:
            break
        keys[pos] = keys[parent]
        vals[pos] = vals[parent]
        pos = parent
    keys[pos] = k
    vals[pos] = x


@njit(cache=True, nogil=True)
def _sift_down(keys, vals, size):
    pos = 0
    k = keys[0]
    x = vals[0]
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        if child + 1 < size and keys[child + 1] < keys[child]:
            child += 1
        if keys[child] >= k:
            break
        keys[pos] = keys[child]
        vals[pos] = vals[child]
        pos = child
    keys[pos] = k
    vals[pos] = x


@njit(cache=True, nogil=True)
def dijkstra(indptr, indices, weights, source, dist, done):
    """Lazy-deletion Dijkstra on a binary heap; zero weights allowed."""
    n = dist.shape[0]
    for i in range(n):
        dist[i] = INF
        done[i] = False
    cap = indptr[n] + 1
    keys = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.int64)
    size = 1
    keys[0] = 0
    vals[0] = source
    dist[source] = 0
    settled = 0
    while size > 0:
        d = keys[0]
        u = vals[0]
        size -= 1
        if size > 0:
            keys[0] = keys[size]
            vals[0] = vals[size]
            _sift_down(keys, vals, size)
        if done[u]:
            continue
        done[u] = True
        settled += 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                keys[size] = nd
                vals[size] = v
                _sift_up(keys, vals, size)
                size += 1
    return settled


@njit(cache=True, nogil=True)
def ecc_antipode(dist, rank):
    """Max distance and the node realising the lexicographic max of (dist, rank)."""
    best = -1
    best_d = -1
    for v in range(dist.shape[0]):
        d = dist[v]
        if d > best_d or (d == best_d and rank[v] > rank[best]):
            best_d = d
            best = v
    return best_d, best
