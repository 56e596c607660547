#include "cfiwl/graph.hpp"

#include <deque>
#include <string>

#include "cfiwl/errors.hpp"

namespace cfiwl {

void ColoredGraph::rebuild_adjacency() {
    adj.assign(n, {});
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
}

void ColoredGraph::validate() const {
    if (n < 0) throw invalid_input_error("graph: negative vertex count");
    if (static_cast<int>(color.size()) != n)
        throw invalid_input_error("graph: color array size mismatch");
    if (static_cast<int>(adj.size()) != n)
        throw invalid_input_error("graph: adjacency size mismatch");
    for (size_t i = 0; i < edges.size(); ++i) {
        const auto& [u, v] = edges[i];
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw invalid_input_error("graph: edge endpoint out of range");
        if (u >= v) throw invalid_input_error("graph: edge not stored with u < v");
        if (i > 0 && !(edges[i - 1] < edges[i]))
            throw invalid_input_error("graph: edges not sorted or duplicated");
    }
    std::size_t half_degree_sum = 0;
    for (const auto& a : adj) half_degree_sum += a.size();
    if (half_degree_sum != 2 * edges.size())
        throw invalid_input_error("graph: adjacency inconsistent with edges");
    if (!eq_class.empty()) {
        if (static_cast<int>(eq_class.size()) != n)
            throw invalid_input_error("graph: eq_class size mismatch");
        int max_id = -1;
        for (int c : eq_class) {
            if (c < 0) throw invalid_input_error("graph: negative class id");
            max_id = std::max(max_id, c);
        }
        std::vector<char> seen(max_id + 1, 0);
        for (int c : eq_class) seen[c] = 1;
        for (int c = 0; c <= max_id; ++c)
            if (!seen[c])
                throw invalid_input_error("graph: class ids not dense (missing " +
                                          std::to_string(c) + ")");
    }
}

ColoredGraph make_colored_graph(int n, std::vector<Edge> edges, std::vector<int> colors,
                                std::vector<int> eq_class) {
    ColoredGraph g;
    g.n = n;
    for (auto& [u, v] : edges)
        if (u > v) std::swap(u, v);
    std::sort(edges.begin(), edges.end());
    g.edges = std::move(edges);
    g.color = colors.empty() ? std::vector<int>(n, 1) : std::move(colors);
    g.eq_class = std::move(eq_class);
    g.rebuild_adjacency();
    g.validate();
    return g;
}

namespace {
std::vector<int> component_ids(const ColoredGraph& g) {
    std::vector<int> comp(g.n, -1);
    int next = 0;
    for (Vertex s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        std::deque<Vertex> q{s};
        while (!q.empty()) {
            Vertex v = q.front();
            q.pop_front();
            for (Vertex u : g.adj[v])
                if (comp[u] < 0) {
                    comp[u] = next;
                    q.push_back(u);
                }
        }
        ++next;
    }
    return comp;
}
} // namespace

int component_count(const ColoredGraph& g) {
    const auto comp = component_ids(g);
    int max_id = -1;
    for (int c : comp) max_id = std::max(max_id, c);
    return max_id + 1;
}

std::vector<int> component_sizes(const ColoredGraph& g) {
    const auto comp = component_ids(g);
    std::vector<int> sizes(component_count(g), 0);
    for (int c : comp) ++sizes[c];
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

} // namespace cfiwl
