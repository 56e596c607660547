#include "cfiwl/compression.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "cfiwl/errors.hpp"
#include "cfiwl/f2.hpp"

namespace cfiwl {

namespace {

// 2^(d-1) even-weight masks for degree d (a single mask for d = 0).
std::uint64_t gadget_size(int degree) {
    if (degree >= 63)
        throw resource_cap_error("gadget_size: degree too large");
    return degree == 0 ? 1 : 1ULL << (degree - 1);
}

} // namespace

void BaseCompression::validate(const OrderedBaseGraph& g) const {
    if (static_cast<int>(class_of.size()) != g.n)
        throw invalid_input_error("compression: class_of size mismatch");
    std::vector<int> seen(g.n, 0);
    for (int c = 0; c < num_classes(); ++c) {
        const auto& cls = members[c];
        if (cls.empty())
            throw invalid_input_error("compression: empty class");
        if (!std::is_sorted(cls.begin(), cls.end()))
            throw invalid_input_error("compression: members not ascending");
        for (Vertex v : cls) {
            if (v < 0 || v >= g.n)
                throw invalid_input_error("compression: vertex out of range");
            if (seen[v]++)
                throw invalid_input_error("compression: vertex in two classes");
            if (class_of[v] != c)
                throw invalid_input_error("compression: class_of disagrees with members");
        }
        const int deg = g.degree(cls[0]);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (g.degree(cls[i]) != deg)
                throw invalid_input_error("compression: class mixes degrees");
            for (std::size_t j = i + 1; j < cls.size(); ++j)
                if (g.adjacent(cls[i], cls[j]))
                    throw invalid_input_error("compression: adjacent class members");
        }
    }
    for (Vertex v = 0; v < g.n; ++v)
        if (!seen[v]) throw invalid_input_error("compression: vertex in no class");
}

BaseCompression discrete_compression(const OrderedBaseGraph& g) {
    BaseCompression comp;
    comp.class_of.resize(g.n);
    comp.members.resize(g.n);
    for (Vertex v = 0; v < g.n; ++v) {
        comp.class_of[v] = v;
        comp.members[v] = {v};
    }
    return comp;
}

BaseCompression make_compression(const OrderedBaseGraph& g,
                                 const std::vector<std::vector<Vertex>>& classes) {
    BaseCompression comp;
    comp.class_of.assign(g.n, -1);
    comp.members.resize(classes.size());
    for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
        comp.members[c] = classes[c];
        std::sort(comp.members[c].begin(), comp.members[c].end());
        for (Vertex v : comp.members[c]) {
            if (v < 0 || v >= g.n)
                throw invalid_input_error("make_compression: vertex out of range");
            if (comp.class_of[v] != -1)
                throw invalid_input_error("make_compression: vertex in two classes");
            comp.class_of[v] = c;
        }
    }
    comp.validate(g);
    return comp;
}

ColoredGraph cfi_with_lifted_relation(const CFIGraph& cfi, const BaseCompression& comp) {
    comp.validate(cfi.base);
    ColoredGraph g = cfi.to_colored();
    // Quotient slot of class c starts at the prefix sum of gadget sizes; the
    // mask rank within a gadget equals x - offset[origin], identical across
    // members of one class because their degrees agree.
    std::vector<int> qoffset(comp.num_classes() + 1, 0);
    for (int c = 0; c < comp.num_classes(); ++c)
        qoffset[c + 1] =
            qoffset[c] +
            static_cast<int>(gadget_size(cfi.base.degree(comp.members[c][0])));
    g.eq_class.resize(g.n);
    for (int x = 0; x < g.n; ++x) {
        const Vertex u = cfi.origin[x];
        g.eq_class[x] = qoffset[comp.class_of[u]] + (x - cfi.offset[u]);
    }
    return g;
}

bool is_compressible_assignment(const OrderedBaseGraph& g, const BaseCompression& comp,
                                const EdgeAssignment& f) {
    if (f.bits.size() != g.edges.size())
        throw invalid_input_error("is_compressible_assignment: size mismatch");
    std::map<std::tuple<int, int, int, int>, std::uint8_t> profile;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const auto [u, v] = g.edges[e];
        const int pu = neighbor_index(g, u, v), pv = neighbor_index(g, v, u);
        for (int o = 0; o < 2; ++o) {
            const std::tuple<int, int, int, int> key =
                o == 0 ? std::tuple{comp.class_of[u], pu, comp.class_of[v], pv}
                       : std::tuple{comp.class_of[v], pv, comp.class_of[u], pu};
            auto [it, inserted] = profile.emplace(key, f.bits[e]);
            if (!inserted && it->second != f.bits[e]) return false;
        }
    }
    return true;
}

bool is_compressible_twisting(const OrderedBaseGraph& g, const DirectedEdgeIndex& idx,
                              const BaseCompression& comp, const Twisting& t) {
    if (t.member.size() != idx.dir_edges.size())
        throw invalid_input_error("is_compressible_twisting: size mismatch");
    for (const auto& cls : comp.members) {
        const Vertex ref = cls[0];
        const int deg = g.degree(ref);
        for (std::size_t i = 1; i < cls.size(); ++i) {
            const Vertex u = cls[i];
            for (int p = 0; p < deg; ++p)
                if (t.member[idx.id_of(u, g.adj[u][p])] !=
                    t.member[idx.id_of(ref, g.adj[ref][p])])
                    return false;
        }
    }
    return true;
}

int CompressedCFIGraph::vertex_of(int base_class, std::uint32_t m) const {
    if (base_class < 0 || base_class >= comp.num_classes())
        throw invalid_input_error("CompressedCFIGraph::vertex_of: class out of range");
    // q vertices are sorted by (class, mask), so the class occupies one span.
    const auto lo = std::lower_bound(q_class.begin(), q_class.end(), base_class);
    const auto hi = std::upper_bound(q_class.begin(), q_class.end(), base_class);
    const std::uint32_t span = static_cast<std::uint32_t>(hi - lo);
    if (std::popcount(m) % 2 != 0)
        throw invalid_input_error("CompressedCFIGraph::vertex_of: odd-weight mask");
    const std::uint32_t rank =
        m / 2 + ((m & 1u) != 0 && std::popcount(m - 1) % 2 == 0 ? 1 : 0);
    if (rank >= span)
        throw invalid_input_error("CompressedCFIGraph::vertex_of: mask outside gadget");
    return static_cast<int>(lo - q_class.begin()) + static_cast<int>(rank);
}

CompressedCFIGraph build_compressed_cfi(const OrderedBaseGraph& base,
                                        const BaseCompression& comp,
                                        const EdgeAssignment& f, int max_degree) {
    comp.validate(base);
    if (!is_compressible_assignment(base, comp, f))
        throw invalid_input_error("build_compressed_cfi: assignment not compressible");
    const CFIGraph cfi = build_cfi(base, f, max_degree);

    CompressedCFIGraph q;
    q.comp = comp;
    std::vector<int> qoffset(comp.num_classes() + 1, 0);
    for (int c = 0; c < comp.num_classes(); ++c) {
        const int d = base.degree(comp.members[c][0]);
        qoffset[c + 1] = qoffset[c] + static_cast<int>(gadget_size(d));
    }
    const int total = qoffset[comp.num_classes()];
    q.q_class.resize(total);
    q.q_mask.resize(total);
    for (int c = 0; c < comp.num_classes(); ++c) {
        const int d = base.degree(comp.members[c][0]);
        int x = qoffset[c];
        for (std::uint32_t m = 0; m < (1u << d); ++m) {
            if (std::popcount(m) % 2 != 0) continue;
            q.q_class[x] = c;
            q.q_mask[x] = m;
            ++x;
        }
    }

    // Contract every CFI edge; class non-adjacency makes loops impossible.
    std::set<Edge> edges;
    for (const Edge& e : cfi.edges) {
        const int a = qoffset[comp.class_of[cfi.origin[e.first]]] +
                      (e.first - cfi.offset[cfi.origin[e.first]]);
        const int b = qoffset[comp.class_of[cfi.origin[e.second]]] +
                      (e.second - cfi.offset[cfi.origin[e.second]]);
        edges.insert({std::min(a, b), std::max(a, b)});
    }

    q.graph.n = total;
    q.graph.color.resize(total);
    for (int x = 0; x < total; ++x)
        q.graph.color[x] = base.color[comp.members[q.q_class[x]][0]];
    q.graph.edges.assign(edges.begin(), edges.end());
    q.graph.rebuild_adjacency();
    return q;
}

std::uint64_t compressed_size(const OrderedBaseGraph& g, const BaseCompression& comp) {
    std::uint64_t total = 0;
    for (const auto& cls : comp.members) total += gadget_size(g.degree(cls[0]));
    return total;
}

std::optional<Twisting> find_compressible_twisting(const OrderedBaseGraph& base,
                                                   const DirectedEdgeIndex& idx,
                                                   const BaseCompression& comp,
                                                   const EdgeAssignment& f,
                                                   const EdgeAssignment& g,
                                                   const std::vector<Vertex>& fixed) {
    if (f.bits.size() != base.edges.size() || g.bits.size() != base.edges.size())
        throw invalid_input_error("find_compressible_twisting: size mismatch");
    F2System sys(static_cast<int>(idx.dir_edges.size()));

    bool ok = true;
    for (int e = 0; e < static_cast<int>(base.edges.size()) && ok; ++e) {
        const auto [u, v] = base.edges[e];
        ok = sys.add_constraint({idx.id_of(u, v), idx.id_of(v, u)},
                                ((f.bits[e] ^ g.bits[e]) & 1) != 0);
    }
    for (Vertex u = 0; u < base.n && ok; ++u) {
        std::vector<int> row;
        for (int d = idx.first_out[u]; d < idx.first_out[u + 1]; ++d) row.push_back(d);
        ok = sys.add_constraint(row, false);
    }
    // Class members share their positionwise out-patterns.
    for (const auto& cls : comp.members) {
        if (!ok) break;
        const Vertex ref = cls[0];
        const int deg = base.degree(ref);
        for (std::size_t i = 1; i < cls.size() && ok; ++i) {
            const Vertex u = cls[i];
            for (int p = 0; p < deg && ok; ++p)
                ok = sys.add_constraint({idx.id_of(u, base.adj[u][p]),
                                         idx.id_of(ref, base.adj[ref][p])},
                                        false);
        }
    }
    for (Vertex u : fixed) {
        if (u < 0 || u >= base.n)
            throw invalid_input_error("find_compressible_twisting: fixed vertex out of range");
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

std::optional<Twisting> find_compressible_twisting_fixing_classes(
    const OrderedBaseGraph& base, const DirectedEdgeIndex& idx,
    const BaseCompression& comp, const EdgeAssignment& f, const EdgeAssignment& g,
    const std::vector<int>& fixed_classes) {
    std::vector<Vertex> fixed;
    for (int c : fixed_classes) {
        if (c < 0 || c >= comp.num_classes())
            throw invalid_input_error(
                "find_compressible_twisting_fixing_classes: class out of range");
        fixed.insert(fixed.end(), comp.members[c].begin(), comp.members[c].end());
    }
    return find_compressible_twisting(base, idx, comp, f, g, fixed);
}

} // namespace cfiwl
