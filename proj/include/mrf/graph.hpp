// Finite graphs for the verification oracles and the sampler: plain
// adjacency-list graphs with named small instances, explicit rooted trees,
// girth computation, an edge-list text format, and a configuration-model
// generator for random regular graphs with an optional girth floor.
#pragma once

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mrf/common.hpp"
#include "mrf/rng.hpp"

namespace mrf {

struct finite_graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adj;

    int degree(int v) const { return static_cast<int>(adj[static_cast<std::size_t>(v)].size()); }
};

inline finite_graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 0) throw precondition_error("make_graph: negative node count");
    finite_graph g;
    g.n = n;
    g.adj.resize(static_cast<std::size_t>(n));
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw precondition_error("make_graph: edge endpoint out of range");
        if (u == v) throw precondition_error("make_graph: self-loop");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw precondition_error("make_graph: duplicate edge");
        g.adj[static_cast<std::size_t>(u)].push_back(v);
        g.adj[static_cast<std::size_t>(v)].push_back(u);
    }
    g.edges = std::move(edges);
    return g;
}

inline finite_graph star_graph(int leaves) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return make_graph(leaves + 1, std::move(e));
}

inline finite_graph complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return make_graph(n, std::move(e));
}

// Triangular prism: two triangles joined by a perfect matching, 3-regular.
inline finite_graph prism_graph() {
    return make_graph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                          {0, 3}, {1, 4}, {2, 5}});
}

// Petersen graph: outer 5-cycle, inner pentagram, spokes. 3-regular, girth 5.
inline finite_graph petersen_graph() {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(5 + i, 5 + (i + 2) % 5);
        e.emplace_back(i, 5 + i);
    }
    return make_graph(10, std::move(e));
}

// Rooted tree in which node 0 has a single child and every deeper internal
// node has delta-1 children, grown down to the given depth. Nodes are
// numbered level by level, so BFS depth equals generation order.
inline finite_graph tree_tprime(int delta, int depth) {
    if (delta < 3) throw precondition_error("tree_tprime: degree must be at least 3");
    if (depth < 1) throw precondition_error("tree_tprime: depth must be at least 1");
    std::vector<std::pair<int, int>> e;
    std::vector<int> level = {0};
    int next = 1;
    for (int d = 1; d <= depth; ++d) {
        std::vector<int> fresh;
        for (int parent : level) {
            int kids = (d == 1) ? 1 : delta - 1;
            for (int c = 0; c < kids; ++c) {
                e.emplace_back(parent, next);
                fresh.push_back(next++);
            }
        }
        level = std::move(fresh);
    }
    return make_graph(next, std::move(e));
}

// Rooted tree whose root has delta children and every deeper internal node
// has delta-1 children: the depth-d neighborhood of a node in the infinite
// delta-regular tree.
inline finite_graph tree_tfull(int delta, int depth) {
    if (delta < 3) throw precondition_error("tree_tfull: degree must be at least 3");
    if (depth < 1) throw precondition_error("tree_tfull: depth must be at least 1");
    std::vector<std::pair<int, int>> e;
    std::vector<int> level = {0};
    int next = 1;
    for (int d = 1; d <= depth; ++d) {
        std::vector<int> fresh;
        for (int parent : level) {
            int kids = (d == 1) ? delta : delta - 1;
            for (int c = 0; c < kids; ++c) {
                e.emplace_back(parent, next);
                fresh.push_back(next++);
            }
        }
        level = std::move(fresh);
    }
    return make_graph(next, std::move(e));
}

inline std::vector<int> bfs_depths(const finite_graph& g, int root) {
    if (root < 0 || root >= g.n) throw precondition_error("bfs_depths: root out of range");
    std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
    std::deque<int> queue = {root};
    dist[static_cast<std::size_t>(root)] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.adj[static_cast<std::size_t>(u)])
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

namespace detail {

// BFS from one start node, reporting the shortest cycle it can see (the
// classic dist[u] + dist[v] + 1 bound on the first non-tree edge touched).
// Capping the depth makes the girth >= g check cheap on large graphs.
inline int shortest_cycle_from(const finite_graph& g, int start, int max_depth) {
    std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
    std::vector<int> parent(static_cast<std::size_t>(g.n), -1);
    std::deque<int> queue = {start};
    dist[static_cast<std::size_t>(start)] = 0;
    int best = std::numeric_limits<int>::max();
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (dist[static_cast<std::size_t>(u)] >= max_depth) continue;
        for (int v : g.adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                parent[static_cast<std::size_t>(v)] = u;
                queue.push_back(v);
            } else if (v != parent[static_cast<std::size_t>(u)]) {
                best = std::min(best, dist[static_cast<std::size_t>(u)] +
                                          dist[static_cast<std::size_t>(v)] + 1);
            }
        }
    }
    return best;
}

}  // namespace detail

// Length of the shortest cycle, or 0 for a forest.
inline int girth(const finite_graph& g) {
    int best = std::numeric_limits<int>::max();
    for (int s = 0; s < g.n; ++s)
        best = std::min(best, detail::shortest_cycle_from(g, s, g.n));
    return best == std::numeric_limits<int>::max() ? 0 : best;
}

// Whether every cycle has length >= floor_len; truncated BFS keeps this
// linear-ish even on thousands of nodes.
inline bool girth_at_least(const finite_graph& g, int floor_len) {
    if (floor_len <= 3) return true;
    int radius = floor_len / 2 + 1;
    for (int s = 0; s < g.n; ++s)
        if (detail::shortest_cycle_from(g, s, radius) < floor_len) return false;
    return true;
}

// Plain text edge list: first line "n m", then one "u v" line per edge.
inline finite_graph read_edge_list(std::istream& in) {
    int n = 0, m = 0;
    if (!(in >> n >> m))
        throw precondition_error("read_edge_list: missing n m header");
    std::vector<std::pair<int, int>> e;
    e.reserve(static_cast<std::size_t>(std::max(0, m)));
    for (int i = 0; i < m; ++i) {
        int u = 0, v = 0;
        if (!(in >> u >> v))
            throw precondition_error("read_edge_list: truncated edge list");
        e.emplace_back(u, v);
    }
    return make_graph(n, std::move(e));
}

inline void write_edge_list(std::ostream& out, const finite_graph& g) {
    out << g.n << ' ' << g.edges.size() << '\n';
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

// Degree-uniform view used by the sampler: flat neighbor array plus the
// girth floor the generator certified (0 when unchecked).
struct regular_graph {
    int n = 0;
    int delta = 0;
    std::vector<int> flat;    // n * delta neighbor ids
    int girth_floor = 0;

    const int* neighbors(int v) const {
        return flat.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(delta);
    }
};

inline regular_graph regular_from(const finite_graph& g, int delta) {
    regular_graph r;
    r.n = g.n;
    r.delta = delta;
    r.flat.reserve(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(delta));
    for (int v = 0; v < g.n; ++v) {
        if (g.degree(v) != delta)
            throw precondition_error("regular_from: node degree differs from delta");
        for (int u : g.adj[static_cast<std::size_t>(v)]) r.flat.push_back(u);
    }
    return r;
}

inline finite_graph to_finite(const regular_graph& r) {
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v < r.n; ++v)
        for (int k = 0; k < r.delta; ++k) {
            int u = r.neighbors(v)[k];
            if (v < u) e.emplace_back(v, u);
        }
    return make_graph(r.n, std::move(e));
}

// Configuration model: pair half-edges uniformly, reject drawings with loops
// or parallel edges, and (optionally) drawings whose girth is below the
// requested floor. Deterministic in the seed.
inline regular_graph gen_random_regular(int n, int delta, std::uint64_t seed,
                                        int min_girth = 0) {
    if (delta < 3) throw precondition_error("gen_random_regular: degree must be at least 3");
    if (n < delta + 1)
        throw precondition_error("gen_random_regular: need at least delta+1 nodes");
    if (n % 2 != 0 && delta % 2 != 0)
        throw precondition_error("gen_random_regular: n * delta must be even");
    rng_stream rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(delta));
    for (std::size_t i = 0; i < stubs.size(); ++i)
        stubs[i] = static_cast<int>(i) / delta;

    for (int attempt = 0; attempt < 10000; ++attempt) {
        rng.shuffle(stubs);
        std::vector<std::pair<int, int>> e;
        e.reserve(stubs.size() / 2);
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || !seen.insert(std::minmax(u, v)).second) ok = false;
            else e.emplace_back(u, v);
        }
        if (!ok) continue;
        finite_graph g = make_graph(n, std::move(e));
        if (min_girth > 0 && !girth_at_least(g, min_girth)) continue;
        regular_graph r = regular_from(g, delta);
        r.girth_floor = min_girth;
        return r;
    }
    throw generation_error("gen_random_regular: attempt budget exhausted");
}

}  // namespace mrf
