#include "cfiwl/base_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>

#include "cfiwl/errors.hpp"

namespace cfiwl {

std::optional<int> OrderedBaseGraph::edge_index(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    Edge e{u, v};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) return std::nullopt;
    return static_cast<int>(it - edges.begin());
}

ColoredGraph OrderedBaseGraph::to_colored() const {
    ColoredGraph g;
    g.n = n;
    g.color = color;
    g.edges = edges;
    g.rebuild_adjacency();
    return g;
}

void OrderedBaseGraph::validate() const {
    if (n <= 0) throw invalid_input_error("base graph: empty");
    for (int v = 0; v < n; ++v)
        if (color[v] != v + 1)
            throw invalid_input_error("base graph: colors must be 1..n in id order");
    for (size_t i = 0; i < edges.size(); ++i) {
        const auto& [u, v] = edges[i];
        if (u < 0 || v <= u || v >= n)
            throw invalid_input_error("base graph: malformed edge");
        if (i > 0 && !(edges[i - 1] < edges[i]))
            throw invalid_input_error("base graph: edges not sorted");
    }
    for (int v = 0; v < n; ++v)
        if (!std::is_sorted(adj[v].begin(), adj[v].end()))
            throw invalid_input_error("base graph: neighbor list out of color order");
    // Connectivity.
    std::vector<char> seen(n, 0);
    std::deque<Vertex> q{0};
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        for (Vertex u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                q.push_back(u);
            }
    }
    if (reached != n) throw invalid_input_error("base graph: not connected");
    if (!coords.empty() && static_cast<int>(coords.size()) != n)
        throw invalid_input_error("base graph: coords size mismatch");
}

OrderedBaseGraph make_base_graph(int n, std::vector<Edge> edges,
                                 std::vector<std::pair<int, int>> coords) {
    if (n <= 0) throw invalid_input_error("base graph: need at least one vertex");
    OrderedBaseGraph g;
    g.n = n;
    g.color.resize(n);
    std::iota(g.color.begin(), g.color.end(), 1);
    for (auto& [u, v] : edges) {
        if (u == v) throw invalid_input_error("base graph: self loop");
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw invalid_input_error("base graph: endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw invalid_input_error("base graph: duplicate edge");
    g.edges = std::move(edges);
    g.adj.assign(n, {});
    for (const auto& [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    g.coords = std::move(coords);
    g.validate();
    return g;
}

namespace {
OrderedBaseGraph make_grid_like(int rows, int cols, bool wrap_cols, bool wrap_rows) {
    if (rows < 1 || cols < 1) throw invalid_input_error("grid: empty");
    if (wrap_cols && rows < 3)
        throw invalid_input_error("cylinder: need rows >= 3 to close columns");
    if (wrap_rows && cols < 3)
        throw invalid_input_error("torus: need cols >= 3 to close rows");
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<Edge> edges;
    std::vector<std::pair<int, int>> coords;
    coords.reserve(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) coords.push_back({r, c});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
        }
    if (wrap_cols)
        for (int c = 0; c < cols; ++c) edges.push_back({id(0, c), id(rows - 1, c)});
    if (wrap_rows)
        for (int r = 0; r < rows; ++r) edges.push_back({id(r, 0), id(r, cols - 1)});
    return make_base_graph(rows * cols, std::move(edges), std::move(coords));
}
} // namespace

OrderedBaseGraph make_grid(int rows, int cols) {
    return make_grid_like(rows, cols, false, false);
}

OrderedBaseGraph make_cylinder(int rows, int cols) {
    return make_grid_like(rows, cols, true, false);
}

OrderedBaseGraph make_torus(int rows, int cols) {
    return make_grid_like(rows, cols, true, true);
}

int neighbor_index(const OrderedBaseGraph& g, Vertex u, Vertex v) {
    const auto& a = g.adj[u];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it == a.end() || *it != v)
        throw invalid_input_error("neighbor_index: not adjacent");
    return static_cast<int>(it - a.begin()) + 1;
}

Vertex neighbor_at(const OrderedBaseGraph& g, Vertex u, int i) {
    if (i < 1 || i > g.degree(u))
        throw invalid_input_error("neighbor_at: position out of range");
    return g.adj[u][i - 1];
}

long long GridParams::row_period(int row) const {
    return fk * periods[row] * periods[(row + 1) % k];
}

namespace {
long long gcd_ll(long long a, long long b) {
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool is_prime(long long x) {
    if (x < 2) return false;
    for (long long d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

// Returns the prime base if x is a proper prime power (p^e, e >= 2), else 0.
long long prime_power_base(long long x) {
    for (long long p = 2; p * p <= x; ++p) {
        if (x % p) continue;
        long long y = x;
        while (y % p == 0) y /= p;
        return y == 1 ? p : 0;
    }
    return 0;
}

GridParams derive(int k, int w, bool toy, std::vector<long long> periods) {
    if (k < 3) throw invalid_input_error("grid params: k must be >= 3");
    if (static_cast<int>(periods.size()) != k)
        throw invalid_input_error("grid params: need exactly k periods");
    for (long long p : periods)
        if (p < 1) throw invalid_input_error("grid params: periods must be positive");
    for (size_t i = 0; i < periods.size(); ++i)
        for (size_t j = i + 1; j < periods.size(); ++j)
            if (gcd_ll(periods[i], periods[j]) != 1)
                throw invalid_input_error("grid params: periods not pairwise coprime");
    std::sort(periods.begin(), periods.end());

    GridParams gp;
    gp.k = k;
    gp.w = w;
    gp.toy = toy;
    gp.fk = 2LL * k + 2;
    gp.periods = std::move(periods);
    long long prod = 1;
    for (long long p : gp.periods) prod *= p;
    gp.j_len = gp.fk / 2 * prod;
    gp.jstar_len = 2 * gp.j_len;
    gp.lambda.resize(k);
    for (int i = 0; i < k; ++i) gp.lambda[i] = gp.j_len / gp.row_period(i) - 1;
    return gp;
}
} // namespace

std::vector<long long> choose_periods(int k, int w) {
    // Candidates in (w/2, w], largest first; primes preferred (descending by
    // value), then proper prime powers ordered by prime base descending, then
    // by value descending.
    std::vector<long long> primes, powers;
    for (long long x = w; x > w / 2; --x) {
        if (is_prime(x))
            primes.push_back(x);
        else if (prime_power_base(x) != 0)
            powers.push_back(x);
    }
    std::sort(powers.begin(), powers.end(), [](long long a, long long b) {
        long long ba = prime_power_base(a), bb = prime_power_base(b);
        if (ba != bb) return ba > bb;
        return a > b;
    });
    std::vector<long long> picked;
    auto try_pick = [&](long long x) {
        if (static_cast<int>(picked.size()) >= k) return;
        for (long long p : picked)
            if (gcd_ll(p, x) != 1) return;
        picked.push_back(x);
    };
    for (long long x : primes) try_pick(x);
    for (long long x : powers) try_pick(x);
    if (static_cast<int>(picked.size()) < k)
        throw invalid_input_error("choose_periods: not enough coprime candidates in (w/2, w]");
    return picked;
}

GridParams build_params(int k, int w) {
    if (w < 2 * (2 * k + 2))
        throw invalid_input_error("grid params: w must be at least 2 f(k)");
    return derive(k, w, false, choose_periods(k, w));
}

GridParams toy_params(int k, std::vector<long long> periods) {
    return derive(k, 0, true, std::move(periods));
}

} // namespace cfiwl
