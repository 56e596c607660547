#include "cfiwl/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfiwl/errors.hpp"

namespace cfiwl {

namespace {

using json = nlohmann::json; // std::map-backed objects: keys serialize sorted

// Shared structural validation before make_colored_graph (whose adjacency
// rebuild assumes in-range endpoints).
ColoredGraph build_graph_checked(int n, std::vector<Edge> edges, std::vector<int> colors,
                                 std::vector<int> eq_class, const char* what) {
    if (n < 0) throw invalid_input_error(std::string(what) + ": negative vertex count");
    for (const auto& [u, v] : edges)
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw invalid_input_error(std::string(what) + ": edge endpoint out of range");
    return make_colored_graph(n, std::move(edges), std::move(colors), std::move(eq_class));
}

} // namespace

GraphFormat graph_format_from_name(const std::string& name) {
    if (name == "json") return GraphFormat::json;
    if (name == "dimacs") return GraphFormat::dimacs;
    if (name == "graph6") return GraphFormat::graph6;
    throw invalid_input_error("unknown graph format: " + name);
}

std::string graph_format_name(GraphFormat f) {
    switch (f) {
        case GraphFormat::json: return "json";
        case GraphFormat::dimacs: return "dimacs";
        case GraphFormat::graph6: return "graph6";
    }
    throw invalid_input_error("unknown graph format value");
}

bool format_is_lossless_for(const ColoredGraph& g, GraphFormat f) {
    if (f != GraphFormat::graph6) return true;
    if (g.has_equivalence()) return false;
    return std::all_of(g.color.begin(), g.color.end(), [](int c) { return c == 1; });
}

// ---- JSON ---------------------------------------------------------------------

std::string graph_to_json(const ColoredGraph& g,
                          const std::map<std::string, std::string>& meta) {
    json j;
    j["n"] = g.n;
    j["colors"] = g.color;
    json edges = json::array();
    for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
    j["edges"] = std::move(edges);
    if (g.has_equivalence()) j["eq_class"] = g.eq_class;
    if (!meta.empty()) j["meta"] = meta;
    return j.dump();
}

ColoredGraph graph_from_json(const std::string& text) {
    const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object())
        throw invalid_input_error("json graph: not a JSON object");
    try {
        if (!j.contains("n") || !j.contains("edges"))
            throw invalid_input_error("json graph: missing \"n\" or \"edges\"");
        const int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw invalid_input_error("json graph: edge is not a pair");
            edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        }
        std::vector<int> colors;
        if (j.contains("colors")) colors = j.at("colors").get<std::vector<int>>();
        std::vector<int> eq;
        if (j.contains("eq_class")) eq = j.at("eq_class").get<std::vector<int>>();
        return build_graph_checked(n, std::move(edges), std::move(colors), std::move(eq),
                                   "json graph");
    } catch (const json::exception& e) {
        throw invalid_input_error(std::string("json graph: ") + e.what());
    }
}

// ---- DIMACS -------------------------------------------------------------------

std::string graph_to_dimacs(const ColoredGraph& g) {
    std::ostringstream out;
    out << "p edge " << g.n << ' ' << g.edges.size() << '\n';
    for (const auto& [u, v] : g.edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    for (Vertex v = 0; v < g.n; ++v) out << "n " << v + 1 << ' ' << g.color[v] << '\n';
    if (g.has_equivalence()) {
        const int nc = 1 + *std::max_element(g.eq_class.begin(), g.eq_class.end());
        for (int c = 0; c < nc; ++c) {
            out << 'q';
            for (Vertex v = 0; v < g.n; ++v)
                if (g.eq_class[v] == c) out << ' ' << v + 1;
            out << '\n';
        }
    }
    return out.str();
}

ColoredGraph graph_from_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::size_t m = 0;
    std::vector<Edge> edges;
    std::vector<int> colors;
    std::vector<int> eq;
    int next_class = 0;
    auto need_header = [&] {
        if (n < 0) throw invalid_input_error("dimacs graph: line before \"p edge\" header");
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string kind;
            if (n >= 0 || !(ls >> kind >> n >> m) || kind != "edge" || n < 0)
                throw invalid_input_error("dimacs graph: malformed problem line");
            colors.assign(n, 1);
        } else if (tag == "e") {
            need_header();
            int u = 0, v = 0;
            if (!(ls >> u >> v) || u < 1 || v < 1 || u > n || v > n)
                throw invalid_input_error("dimacs graph: bad edge line: " + line);
            edges.push_back({u - 1, v - 1});
        } else if (tag == "n") {
            need_header();
            int v = 0, c = 0;
            if (!(ls >> v >> c) || v < 1 || v > n)
                throw invalid_input_error("dimacs graph: bad color line: " + line);
            colors[v - 1] = c;
        } else if (tag == "q") {
            need_header();
            if (eq.empty()) eq.assign(n, -1);
            int v = 0;
            while (ls >> v) {
                if (v < 1 || v > n || eq[v - 1] != -1)
                    throw invalid_input_error("dimacs graph: bad class line: " + line);
                eq[v - 1] = next_class;
            }
            ++next_class;
        } else {
            throw invalid_input_error("dimacs graph: unknown line tag: " + tag);
        }
    }
    if (n < 0) throw invalid_input_error("dimacs graph: missing \"p edge\" header");
    if (edges.size() != m)
        throw invalid_input_error("dimacs graph: edge count does not match header");
    if (!eq.empty())
        for (int c : eq)
            if (c < 0) throw invalid_input_error("dimacs graph: vertex missing from classes");
    return build_graph_checked(n, std::move(edges), std::move(colors), std::move(eq),
                               "dimacs graph");
}

// ---- graph6 ---------------------------------------------------------------------

std::string graph_to_graph6(const ColoredGraph& g) {
    std::string out;
    const long long n = g.n;
    if (n <= 62) {
        out += static_cast<char>(n + 63);
    } else if (n <= 258047) {
        out += static_cast<char>(126);
        for (int shift = 12; shift >= 0; shift -= 6)
            out += static_cast<char>(((n >> shift) & 63) + 63);
    } else {
        throw invalid_input_error("graph6: vertex count too large");
    }
    int bits = 0, acc = 0;
    for (Vertex j = 1; j < g.n; ++j) {
        for (Vertex i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
            if (++bits == 6) {
                out += static_cast<char>(acc + 63);
                bits = 0;
                acc = 0;
            }
        }
    }
    if (bits > 0) out += static_cast<char>((acc << (6 - bits)) + 63);
    return out;
}

ColoredGraph graph_from_graph6(const std::string& text) {
    std::size_t pos = 0;
    auto next6 = [&]() -> int {
        if (pos >= text.size()) throw invalid_input_error("graph6: truncated input");
        const unsigned char c = static_cast<unsigned char>(text[pos++]);
        if (c < 63 || c > 126) throw invalid_input_error("graph6: byte out of range");
        return c - 63;
    };
    long long n = next6();
    if (n == 63) { // long form
        n = 0;
        for (int i = 0; i < 3; ++i) n = (n << 6) | next6();
    }
    std::vector<Edge> edges;
    int bits = 0, acc = 0;
    for (Vertex j = 1; j < n; ++j) {
        for (Vertex i = 0; i < j; ++i) {
            if (bits == 0) {
                acc = next6();
                bits = 6;
            }
            if (acc & (1 << (bits - 1))) edges.push_back({i, j});
            --bits;
        }
    }
    if (pos != text.size()) throw invalid_input_error("graph6: trailing bytes");
    return build_graph_checked(static_cast<int>(n), std::move(edges), {}, {}, "graph6");
}

std::string graph_to_format(const ColoredGraph& g, GraphFormat f) {
    switch (f) {
        case GraphFormat::json: return graph_to_json(g);
        case GraphFormat::dimacs: return graph_to_dimacs(g);
        case GraphFormat::graph6: return graph_to_graph6(g);
    }
    throw invalid_input_error("unknown graph format value");
}

ColoredGraph graph_from_format(const std::string& text, GraphFormat f) {
    switch (f) {
        case GraphFormat::json: return graph_from_json(text);
        case GraphFormat::dimacs: return graph_from_dimacs(text);
        case GraphFormat::graph6: return graph_from_graph6(text);
    }
    throw invalid_input_error("unknown graph format value");
}

// ---- Transcripts -----------------------------------------------------------------

std::string transcript_to_json_lines(const GameTranscript& t) {
    std::string out;
    json header;
    header["type"] = "header";
    header["cop_count"] = t.cop_count;
    header["max_rounds"] = t.max_rounds;
    header["seed"] = t.seed;
    header["cop_strategy"] = t.cop_strategy;
    header["rounds_played"] = t.rounds_played;
    header["captured"] = t.captured;
    header["illegal_robber_move"] = t.illegal_robber_move;
    header["illegal_cop_move"] = t.illegal_cop_move;
    header["robber_survived"] = t.robber_survived;
    header["failure"] = t.failure;
    out += header.dump();
    out += '\n';
    for (const GameRoundRecord& r : t.rounds) {
        json line;
        line["type"] = "round";
        line["round"] = r.round;
        line["lift_class"] = r.lift_class;
        line["destination"] = r.destination;
        line["robber_from"] = r.robber_from;
        line["robber_to"] = r.robber_to;
        line["stayed"] = r.stayed;
        line["certified"] = r.certified;
        out += line.dump();
        out += '\n';
    }
    return out;
}

// ---- File helpers -----------------------------------------------------------------

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp~";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_input_error("cannot write file: " + tmp);
        out << content;
        out.flush();
        if (!out) throw invalid_input_error("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw invalid_input_error("cannot replace file: " + path + " (" + ec.message() + ")");
    }
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace cfiwl
