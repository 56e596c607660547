#include "cfiwl/cfi.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <string>

#include "cfiwl/errors.hpp"
#include "cfiwl/f2.hpp"

namespace cfiwl {

namespace {

void require_assignment(const OrderedBaseGraph& g, const EdgeAssignment& f,
                        const char* where) {
    if (f.bits.size() != g.edges.size())
        throw invalid_input_error(std::string(where) + ": assignment size " +
                                  std::to_string(f.bits.size()) + " != edge count " +
                                  std::to_string(g.edges.size()));
}

void require_twisting_size(const DirectedEdgeIndex& idx, const Twisting& t,
                           const char* where) {
    if (t.member.size() != idx.dir_edges.size())
        throw invalid_input_error(std::string(where) + ": twisting size mismatch");
}

} // namespace

int EdgeAssignment::parity() const {
    int p = 0;
    for (std::uint8_t b : bits) p ^= (b & 1);
    return p;
}

EdgeAssignment zero_assignment(const OrderedBaseGraph& g) {
    EdgeAssignment f;
    f.bits.assign(g.edges.size(), 0);
    return f;
}

EdgeAssignment single_edge_assignment(const OrderedBaseGraph& g, int edge_idx) {
    if (edge_idx < 0 || edge_idx >= static_cast<int>(g.edges.size()))
        throw invalid_input_error("single_edge_assignment: edge index out of range");
    EdgeAssignment f = zero_assignment(g);
    f.bits[edge_idx] = 1;
    return f;
}

EdgeAssignment xor_assignments(const EdgeAssignment& a, const EdgeAssignment& b) {
    if (a.bits.size() != b.bits.size())
        throw invalid_input_error("xor_assignments: size mismatch");
    EdgeAssignment out = a;
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] ^= b.bits[i];
    return out;
}

DirectedEdgeIndex DirectedEdgeIndex::build(const OrderedBaseGraph& g) {
    DirectedEdgeIndex idx;
    idx.dir_edges.reserve(2 * g.edges.size());
    for (const Edge& e : g.edges) {
        idx.dir_edges.push_back({e.first, e.second});
        idx.dir_edges.push_back({e.second, e.first});
    }
    std::sort(idx.dir_edges.begin(), idx.dir_edges.end());
    idx.first_out.assign(g.n + 1, 0);
    for (const Edge& d : idx.dir_edges) ++idx.first_out[d.first + 1];
    for (Vertex v = 0; v < g.n; ++v) idx.first_out[v + 1] += idx.first_out[v];
    return idx;
}

int DirectedEdgeIndex::id_of(Vertex tail, Vertex head) const {
    const Edge key{tail, head};
    auto it = std::lower_bound(dir_edges.begin(), dir_edges.end(), key);
    if (it == dir_edges.end() || *it != key)
        throw invalid_input_error("DirectedEdgeIndex::id_of: no such directed edge");
    return static_cast<int>(it - dir_edges.begin());
}

bool Twisting::empty_set() const {
    return std::all_of(member.begin(), member.end(),
                       [](std::uint8_t b) { return b == 0; });
}

Twisting empty_twisting(const OrderedBaseGraph& g) {
    Twisting t;
    t.member.assign(2 * g.edges.size(), 0);
    return t;
}

Twisting xor_twistings(const Twisting& a, const Twisting& b) {
    if (a.member.size() != b.member.size())
        throw invalid_input_error("xor_twistings: size mismatch");
    Twisting out = a;
    for (std::size_t i = 0; i < out.member.size(); ++i) out.member[i] ^= b.member[i];
    return out;
}

bool is_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                 const Twisting& t) {
    require_twisting_size(idx, t, "is_twisting");
    for (Vertex v = 0; v < g.n; ++v) {
        int out = 0;
        for (int d = idx.first_out[v]; d < idx.first_out[v + 1]; ++d)
            out += t.member[d] ? 1 : 0;
        if (out % 2 != 0) return false;
    }
    return true;
}

bool twisting_fixes(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                    const Twisting& t, Vertex u) {
    require_twisting_size(idx, t, "twisting_fixes");
    if (u < 0 || u >= g.n)
        throw invalid_input_error("twisting_fixes: vertex out of range");
    for (int d = idx.first_out[u]; d < idx.first_out[u + 1]; ++d)
        if (t.member[d]) return false;
    return true;
}

EdgeAssignment twisting_effect(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                               const Twisting& t) {
    require_twisting_size(idx, t, "twisting_effect");
    EdgeAssignment f = zero_assignment(g);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const auto [u, v] = g.edges[e];
        f.bits[e] = static_cast<std::uint8_t>(t.member[idx.id_of(u, v)] ^
                                              t.member[idx.id_of(v, u)]);
    }
    return f;
}

std::vector<int> twisted_edges(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                               const Twisting& t) {
    const EdgeAssignment eff = twisting_effect(g, idx, t);
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(eff.bits.size()); ++e)
        if (eff.bits[e]) out.push_back(e);
    return out;
}

int CFIGraph::vertex_of(Vertex base_vertex, std::uint32_t m) const {
    if (base_vertex < 0 || base_vertex >= base.n)
        throw invalid_input_error("CFIGraph::vertex_of: base vertex out of range");
    const int d = base.degree(base_vertex);
    if (d >= 32 || m >= (1u << d) || std::popcount(m) % 2 != 0)
        throw invalid_input_error("CFIGraph::vertex_of: not an even mask of this gadget");
    // Rank of m among even-weight masks: each pair {2t, 2t+1} holds exactly one
    // even-weight mask, so [0, m) contains m/2 of them plus possibly m-1 itself.
    const std::uint32_t rank =
        m / 2 + ((m & 1u) != 0 && std::popcount(m - 1) % 2 == 0 ? 1 : 0);
    return offset[base_vertex] + static_cast<int>(rank);
}

ColoredGraph CFIGraph::to_colored() const {
    ColoredGraph g;
    g.n = n();
    g.color.resize(g.n);
    for (int x = 0; x < g.n; ++x) g.color[x] = base.color[origin[x]];
    g.edges = edges;
    g.adj = adj;
    return g;
}

CFIGraph build_cfi(const OrderedBaseGraph& base, const EdgeAssignment& f,
                   int max_degree) {
    require_assignment(base, f, "build_cfi");
    CFIGraph c;
    c.base = base;
    c.f = f;
    c.offset.assign(base.n + 1, 0);
    for (Vertex u = 0; u < base.n; ++u) {
        const int d = base.degree(u);
        if (d > max_degree || d >= 31)
            throw resource_cap_error("build_cfi: degree " + std::to_string(d) +
                                     " exceeds cap " + std::to_string(max_degree));
        c.offset[u + 1] = c.offset[u] + (d == 0 ? 1 : 1 << (d - 1));
    }
    const int total = c.offset[base.n];
    c.origin.resize(total);
    c.mask.resize(total);
    for (Vertex u = 0; u < base.n; ++u) {
        const int d = base.degree(u);
        int x = c.offset[u];
        for (std::uint32_t m = 0; m < (1u << d); ++m) {
            if (std::popcount(m) % 2 != 0) continue;
            c.origin[x] = u;
            c.mask[x] = m;
            ++x;
        }
    }
    for (int e = 0; e < static_cast<int>(base.edges.size()); ++e) {
        const auto [u, v] = base.edges[e];
        const int pu = neighbor_index(base, u, v) - 1;
        const int pv = neighbor_index(base, v, u) - 1;
        for (int x = c.offset[u]; x < c.offset[u + 1]; ++x) {
            const std::uint32_t abit = (c.mask[x] >> pu) & 1u;
            for (int y = c.offset[v]; y < c.offset[v + 1]; ++y) {
                const std::uint32_t bbit = (c.mask[y] >> pv) & 1u;
                if ((abit ^ bbit) == (f.bits[e] & 1u)) c.edges.push_back({x, y});
            }
        }
    }
    std::sort(c.edges.begin(), c.edges.end());
    c.adj.assign(total, {});
    for (const auto& [x, y] : c.edges) {
        c.adj[x].push_back(y);
        c.adj[y].push_back(x);
    }
    for (auto& a : c.adj) std::sort(a.begin(), a.end());
    return c;
}

EdgeAssignment apply_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                              const EdgeAssignment& f, const Twisting& t) {
    require_assignment(g, f, "apply_twisting");
    return xor_assignments(f, twisting_effect(g, idx, t));
}

std::vector<Vertex> twisting_to_isomorphism(const CFIGraph& from, const Twisting& t) {
    const OrderedBaseGraph& g = from.base;
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(g);
    if (!is_twisting(g, idx, t))
        throw invalid_input_error("twisting_to_isomorphism: set is not a twisting");
    std::vector<std::uint32_t> delta(g.n, 0);
    for (int d = 0; d < static_cast<int>(idx.dir_edges.size()); ++d) {
        if (!t.member[d]) continue;
        const auto [u, v] = idx.dir_edges[d];
        delta[u] ^= 1u << (neighbor_index(g, u, v) - 1);
    }
    std::vector<Vertex> map(from.n());
    for (int x = 0; x < from.n(); ++x)
        map[x] = from.vertex_of(from.origin[x], from.mask[x] ^ delta[from.origin[x]]);
    return map;
}

bool cfi_isomorphic(const OrderedBaseGraph& base, const EdgeAssignment& f,
                    const EdgeAssignment& g) {
    require_assignment(base, f, "cfi_isomorphic");
    require_assignment(base, g, "cfi_isomorphic");
    return f.parity() == g.parity();
}

std::optional<Twisting> find_twisting(const OrderedBaseGraph& base,
                                      const EdgeAssignment& f,
                                      const EdgeAssignment& g,
                                      const std::vector<Vertex>& fixed) {
    require_assignment(base, f, "find_twisting");
    require_assignment(base, g, "find_twisting");
    const DirectedEdgeIndex idx = DirectedEdgeIndex::build(base);
    F2System sys(static_cast<int>(idx.dir_edges.size()));

    bool ok = true;
    // The effect of T must equal f + g on every edge.
    for (int e = 0; e < static_cast<int>(base.edges.size()) && ok; ++e) {
        const auto [u, v] = base.edges[e];
        ok = sys.add_constraint({idx.id_of(u, v), idx.id_of(v, u)},
                                ((f.bits[e] ^ g.bits[e]) & 1) != 0);
    }
    // Even out-degree at every vertex.
    for (Vertex u = 0; u < base.n && ok; ++u) {
        std::vector<int> row;
        for (int d = idx.first_out[u]; d < idx.first_out[u + 1]; ++d) row.push_back(d);
        ok = sys.add_constraint(row, false);
    }
    // Fixed vertices have no outgoing member.
    for (Vertex u : fixed) {
        if (u < 0 || u >= base.n)
            throw invalid_input_error("find_twisting: fixed vertex out of range");
        for (int d = idx.first_out[u]; d < idx.first_out[u + 1] && ok; ++d)
            ok = sys.fix_var(d, false);
    }
    if (!ok) return std::nullopt;

    auto sol = sys.lex_min_solution();
    if (!sol) return std::nullopt;
    Twisting t;
    t.member = std::move(*sol);
    return t;
}

namespace {

// Backtracking isomorphism search state. Vertices of `a` are assigned in an
// order that visits rare colors first; every candidate pair is checked against
// all previously assigned pairs for adjacency and equivalence agreement.
struct IsoSearch {
    const ColoredGraph& a;
    const ColoredGraph& b;
    std::vector<Vertex> order;    // assignment order over a's vertices
    std::vector<Vertex> map;      // a -> b, or -1
    std::vector<std::uint8_t> used; // b-vertex already an image

    bool compatible(Vertex x, Vertex y) const {
        if (a.color[x] != b.color[y]) return false;
        if (a.adj[x].size() != b.adj[y].size()) return false;
        for (Vertex z = 0; z < a.n; ++z) {
            const Vertex w = map[z];
            if (w < 0 || z == x) continue;
            if (a.adjacent(x, z) != b.adjacent(y, w)) return false;
            if (a.has_equivalence() &&
                (a.eq_class[x] == a.eq_class[z]) != (b.eq_class[y] == b.eq_class[w]))
                return false;
        }
        return true;
    }

    bool extend(std::size_t pos) {
        if (pos == order.size()) return true;
        const Vertex x = order[pos];
        if (map[x] >= 0) return extend(pos + 1); // pinned
        for (Vertex y = 0; y < b.n; ++y) {
            if (used[y] || !compatible(x, y)) continue;
            map[x] = y;
            used[y] = 1;
            if (extend(pos + 1)) return true;
            map[x] = -1;
            used[y] = 0;
        }
        return false;
    }
};

} // namespace

std::optional<std::vector<Vertex>> brute_force_isomorphic(
    const ColoredGraph& a, const ColoredGraph& b,
    const std::vector<std::pair<Vertex, Vertex>>& pins, int cap) {
    if (a.n > cap || b.n > cap)
        throw resource_cap_error("brute_force_isomorphic: graph larger than cap " +
                                 std::to_string(cap));
    if (a.n != b.n) return std::nullopt;
    if (a.edges.size() != b.edges.size()) return std::nullopt;
    if (a.has_equivalence() != b.has_equivalence()) return std::nullopt;

    IsoSearch s{a, b, {}, std::vector<Vertex>(a.n, -1),
                std::vector<std::uint8_t>(b.n, 0)};
    for (const auto& [x, y] : pins) {
        if (x < 0 || x >= a.n || y < 0 || y >= b.n)
            throw invalid_input_error("brute_force_isomorphic: pin out of range");
        if (s.used[y] && s.map[x] != y) return std::nullopt; // two pins collide
        if (s.map[x] >= 0 && s.map[x] != y) return std::nullopt;
        if (!s.compatible(x, y)) return std::nullopt;
        s.map[x] = y;
        s.used[y] = 1;
    }

    // Rare colors first: fewest candidate images, largest pruning.
    std::map<int, int> freq;
    for (Vertex v = 0; v < a.n; ++v) ++freq[a.color[v]];
    s.order.resize(a.n);
    std::iota(s.order.begin(), s.order.end(), 0);
    std::sort(s.order.begin(), s.order.end(), [&](Vertex u, Vertex v) {
        const int fu = freq.at(a.color[u]), fv = freq.at(a.color[v]);
        if (fu != fv) return fu < fv;
        return u < v;
    });

    if (!s.extend(0)) return std::nullopt;
    return s.map;
}

bool check_isomorphism(const ColoredGraph& a, const ColoredGraph& b,
                       const std::vector<Vertex>& map) {
    if (a.n != b.n || static_cast<int>(map.size()) != a.n) return false;
    if (a.edges.size() != b.edges.size()) return false;
    if (a.has_equivalence() != b.has_equivalence()) return false;
    std::vector<std::uint8_t> hit(b.n, 0);
    for (Vertex x = 0; x < a.n; ++x) {
        const Vertex y = map[x];
        if (y < 0 || y >= b.n || hit[y]) return false;
        hit[y] = 1;
        if (a.color[x] != b.color[y]) return false;
    }
    // Every a-edge maps to a b-edge; with equal counts and an injective vertex
    // map the induced edge map is a bijection, so non-edges are preserved too.
    for (const Edge& e : a.edges)
        if (!b.adjacent(map[e.first], map[e.second])) return false;
    if (a.has_equivalence()) {
        // The induced class map must be well-defined and injective; together
        // these give u ~ v exactly when map[u] ~ map[v].
        std::vector<int> cmap(a.n, -1), seen(b.n, 0);
        for (Vertex x = 0; x < a.n; ++x) {
            const int ca = a.eq_class[x], cb = b.eq_class[map[x]];
            if (cmap[ca] < 0) {
                if (seen[cb]) return false;
                cmap[ca] = cb;
                seen[cb] = 1;
            } else if (cmap[ca] != cb) {
                return false;
            }
        }
    }
    return true;
}

} // namespace cfiwl
