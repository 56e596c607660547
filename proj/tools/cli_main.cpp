// cfiwl: command-line front end for the CFI/Weisfeiler-Leman toolkit.
//
// Subcommands: gen-base, gen-cfi, gen-compressed, wl, distinguish, game-solve,
// game-sim, verify, furer-curve, export.
//
// Exit codes: 0 success, 2 verification failure (including "not distinguished
// within cap" and non-survival in game-sim), 3 resource cap, 4 usage error.
//
// Every experiment writes a self-describing JSON record (sorted keys, stable
// bytes); repeated runs with the same arguments produce byte-identical
// records at any parallelism level. Timing goes to stderr only.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfiwl/base_graph.hpp"
#include "cfiwl/cfi.hpp"
#include "cfiwl/compression.hpp"
#include "cfiwl/errors.hpp"
#include "cfiwl/games.hpp"
#include "cfiwl/graph.hpp"
#include "cfiwl/grid_compression.hpp"
#include "cfiwl/io.hpp"
#include "cfiwl/rng.hpp"
#include "cfiwl/wl.hpp"

namespace {

using cfiwl::invalid_input_error;
using cfiwl::resource_cap_error;
using json = nlohmann::json;

constexpr const char* kArtifactVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 2;
constexpr int kExitResourceCap = 3;
constexpr int kExitUsage = 4;

// ---- Small helpers ---------------------------------------------------------

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::pair<int, int> parse_dims(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw invalid_input_error("expected ROWSxCOLS, got: " + s);
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw invalid_input_error("expected ROWSxCOLS, got: " + s);
    }
}

std::vector<long long> parse_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw invalid_input_error("expected a comma-separated integer list, got: " + s);
        }
    }
    if (out.empty()) throw invalid_input_error("empty integer list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (long long v : parse_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

cfiwl::GraphFormat sniff_format(const std::string& text, const std::string& override_name) {
    if (!override_name.empty()) return cfiwl::graph_format_from_name(override_name);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return cfiwl::GraphFormat::json;
    if (text.find("p edge") != std::string::npos) return cfiwl::GraphFormat::dimacs;
    return cfiwl::GraphFormat::graph6;
}

cfiwl::ColoredGraph load_graph(const std::string& path, const std::string& format_name) {
    const std::string text = cfiwl::read_text_file(path);
    return cfiwl::graph_from_format(text, sniff_format(text, format_name));
}

std::string format_extension(cfiwl::GraphFormat f) {
    switch (f) {
        case cfiwl::GraphFormat::json: return ".json";
        case cfiwl::GraphFormat::dimacs: return ".dimacs";
        case cfiwl::GraphFormat::graph6: return ".g6";
    }
    return ".txt";
}

json base_record(const std::string& command) {
    json rec;
    rec["artifact_version"] = kArtifactVersion;
    rec["command"] = command;
    return rec;
}

// Record/CSV sink: a path writes atomically, "-" or "" streams to stdout.
void emit_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    cfiwl::write_text_file_atomic(out_path, text);
}

void emit_record(const json& rec, const std::string& out_path) {
    emit_text(out_path, rec.dump(2) + "\n");
}

json file_entry(const std::string& path, const std::string& content) {
    json e;
    e["path"] = path;
    e["fnv1a64"] = hex64(cfiwl::fnv1a64(content));
    return e;
}

// Cap resolution precedence: flag > config file > environment > built-in.
std::uint64_t resolve_cap(const CLI::Option* opt, std::uint64_t flag_value,
                          const json& config, const char* key, const char* env_name,
                          std::uint64_t fallback) {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (config.is_object() && config.contains(key)) return config.at(key).get<std::uint64_t>();
    if (const char* env = std::getenv(env_name)) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw invalid_input_error(std::string(env_name) + ": not an integer: " + env);
        }
    }
    return fallback;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const json cfg = json::parse(cfiwl::read_text_file(path), nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object())
        throw invalid_input_error("config file is not a JSON object: " + path);
    return cfg;
}

// ---- Base-graph family selection --------------------------------------------

struct FamilySpec {
    std::string grid;     // "RxC"
    std::string cylinder; // "RxC"
    std::string torus;    // "RxC"
    int path = 0;
    int cycle = 0;
    std::string base_file; // import (vertex ids give the order; colors ignored)
    std::string base_format;
};

void add_family_flags(CLI::App* sub, FamilySpec& fs, bool allow_import) {
    sub->add_option("--grid", fs.grid, "rows x cols grid, e.g. 2x4");
    sub->add_option("--cylinder", fs.cylinder, "grid with wrapped columns (rows >= 3)");
    sub->add_option("--torus", fs.torus, "cylinder with wrapped rows (cols >= 3)");
    sub->add_option("--path", fs.path, "path on N vertices");
    sub->add_option("--cycle", fs.cycle, "cycle on N vertices (N >= 3)");
    if (allow_import)
        sub->add_option("--base", fs.base_file,
                        "import a base graph from a file (vertex ids give the order)");
}

cfiwl::OrderedBaseGraph build_family(const FamilySpec& fs, json& descriptor) {
    const int chosen = (!fs.grid.empty()) + (!fs.cylinder.empty()) + (!fs.torus.empty()) +
                       (fs.path > 0) + (fs.cycle > 0) + (!fs.base_file.empty());
    if (chosen != 1)
        throw invalid_input_error(
            "choose exactly one of --grid / --cylinder / --torus / --path / --cycle / --base");
    if (!fs.grid.empty()) {
        const auto [r, c] = parse_dims(fs.grid);
        descriptor["family"] = "grid";
        descriptor["rows"] = r;
        descriptor["cols"] = c;
        return cfiwl::make_grid(r, c);
    }
    if (!fs.cylinder.empty()) {
        const auto [r, c] = parse_dims(fs.cylinder);
        descriptor["family"] = "cylinder";
        descriptor["rows"] = r;
        descriptor["cols"] = c;
        return cfiwl::make_cylinder(r, c);
    }
    if (!fs.torus.empty()) {
        const auto [r, c] = parse_dims(fs.torus);
        descriptor["family"] = "torus";
        descriptor["rows"] = r;
        descriptor["cols"] = c;
        return cfiwl::make_torus(r, c);
    }
    if (fs.path > 0) {
        descriptor["family"] = "path";
        descriptor["n"] = fs.path;
        std::vector<cfiwl::Edge> edges;
        for (int v = 0; v + 1 < fs.path; ++v) edges.push_back({v, v + 1});
        return cfiwl::make_base_graph(fs.path, std::move(edges));
    }
    if (fs.cycle > 0) {
        if (fs.cycle < 3) throw invalid_input_error("--cycle needs N >= 3");
        descriptor["family"] = "cycle";
        descriptor["n"] = fs.cycle;
        std::vector<cfiwl::Edge> edges;
        for (int v = 0; v + 1 < fs.cycle; ++v) edges.push_back({v, v + 1});
        edges.push_back({0, fs.cycle - 1});
        return cfiwl::make_base_graph(fs.cycle, std::move(edges));
    }
    const std::string text = cfiwl::read_text_file(fs.base_file);
    const cfiwl::ColoredGraph g =
        cfiwl::graph_from_format(text, sniff_format(text, fs.base_format));
    descriptor["family"] = "import";
    descriptor["source"] = fs.base_file;
    descriptor["source_fnv1a64"] = hex64(cfiwl::fnv1a64(text));
    return cfiwl::make_base_graph(g.n, g.edges);
}

// The vertical edge in the leftmost column: the canonical twist location of
// the grid families. Requires coordinates.
int first_column_edge(const cfiwl::OrderedBaseGraph& base) {
    if (!base.has_coords())
        throw invalid_input_error(
            "--twist first-column needs a grid-family base; use --twist edge:U-V");
    std::optional<int> best;
    for (std::size_t i = 0; i < base.edges.size(); ++i) {
        const auto [u, v] = base.edges[i];
        if (base.coords[u].second == 0 && base.coords[v].second == 0) {
            best = static_cast<int>(i);
            break; // edges are sorted, the first hit is canonical
        }
    }
    if (!best) throw invalid_input_error("base graph has no edge inside its first column");
    return *best;
}

// Twist selector: none | first-column | edge:U-V | random.
cfiwl::EdgeAssignment twist_assignment(const cfiwl::OrderedBaseGraph& base,
                                       const std::string& twist, std::uint64_t seed,
                                       json& descriptor) {
    descriptor["twist"] = twist;
    if (twist == "none") return cfiwl::zero_assignment(base);
    int edge = -1;
    if (twist == "first-column") {
        edge = first_column_edge(base);
    } else if (twist.rfind("edge:", 0) == 0) {
        const std::string spec = twist.substr(5);
        const auto dash = spec.find('-');
        if (dash == std::string::npos)
            throw invalid_input_error("expected --twist edge:U-V, got: " + twist);
        int u = 0, v = 0;
        try {
            u = std::stoi(spec.substr(0, dash));
            v = std::stoi(spec.substr(dash + 1));
        } catch (const std::exception&) {
            throw invalid_input_error("expected --twist edge:U-V, got: " + twist);
        }
        const auto idx = base.edge_index(std::min(u, v), std::max(u, v));
        if (!idx) throw invalid_input_error("--twist edge: no such base edge");
        edge = *idx;
    } else if (twist == "random") {
        cfiwl::Rng rng(seed);
        edge = static_cast<int>(rng.next_below(base.edges.size()));
    } else {
        throw invalid_input_error("unknown --twist value: " + twist +
                                  " (use none | first-column | edge:U-V | random)");
    }
    const auto [u, v] = base.edges[edge];
    descriptor["twist_edges"] = json::array({json::array({u, v})});
    return cfiwl::single_edge_assignment(base, edge);
}

// ---- gen-base ---------------------------------------------------------------

struct GenBaseOpts {
    FamilySpec family;
    std::string out;
    std::string format = "json";
};

int run_gen_base(const GenBaseOpts& o) {
    json descriptor;
    const cfiwl::OrderedBaseGraph base = build_family(o.family, descriptor);
    const cfiwl::GraphFormat fmt = cfiwl::graph_format_from_name(o.format);
    const cfiwl::ColoredGraph colored = base.to_colored();
    std::string text;
    if (fmt == cfiwl::GraphFormat::json) {
        text = cfiwl::graph_to_json(colored,
                                    {{"family", descriptor["family"].get<std::string>()}});
    } else {
        if (!cfiwl::format_is_lossless_for(colored, fmt))
            std::cerr << "warning: " << o.format << " drops the vertex colors\n";
        text = cfiwl::graph_to_format(colored, fmt) + "\n";
    }
    emit_text(o.out, text);
    std::cerr << "gen-base: n=" << base.n << " m=" << base.edges.size() << "\n";
    return kExitOk;
}

// ---- gen-cfi ------------------------------------------------------------------

struct GenCfiOpts {
    FamilySpec family;
    std::string twist = "first-column";
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    int max_degree = 20;
};

int run_gen_cfi(const GenCfiOpts& o) {
    if (o.out.empty()) throw invalid_input_error("gen-cfi needs --out PREFIX");
    const cfiwl::GraphFormat fmt = cfiwl::graph_format_from_name(o.format);
    if (fmt == cfiwl::GraphFormat::graph6)
        throw invalid_input_error("graph6 cannot store CFI colors; use export --force");
    json rec = base_record("gen-cfi");
    json& descriptor = rec["descriptor"];
    const cfiwl::OrderedBaseGraph base = build_family(o.family, descriptor);
    descriptor["seed"] = o.seed;
    const cfiwl::EdgeAssignment even = cfiwl::zero_assignment(base);
    const cfiwl::EdgeAssignment odd = twist_assignment(base, o.twist, o.seed, descriptor);

    const cfiwl::CFIGraph cfi_even = cfiwl::build_cfi(base, even, o.max_degree);
    const cfiwl::CFIGraph cfi_odd = cfiwl::build_cfi(base, odd, o.max_degree);
    rec["label"] = cfiwl::cfi_isomorphic(base, even, odd) ? "isomorphic" : "non-isomorphic";

    const std::string ext = format_extension(fmt);
    const std::string even_path = o.out + ".even" + ext;
    const std::string odd_path = o.out + ".odd" + ext;
    std::string even_text, odd_text;
    if (fmt == cfiwl::GraphFormat::json) {
        even_text = cfiwl::graph_to_json(cfi_even.to_colored(), {{"side", "even"}});
        odd_text = cfiwl::graph_to_json(cfi_odd.to_colored(), {{"side", "odd"}});
    } else {
        even_text = cfiwl::graph_to_dimacs(cfi_even.to_colored());
        odd_text = cfiwl::graph_to_dimacs(cfi_odd.to_colored());
    }
    cfiwl::write_text_file_atomic(even_path, even_text);
    cfiwl::write_text_file_atomic(odd_path, odd_text);

    rec["files"]["even"] = file_entry(even_path, even_text);
    rec["files"]["odd"] = file_entry(odd_path, odd_text);
    rec["results"]["base_n"] = base.n;
    rec["results"]["base_m"] = base.edges.size();
    rec["results"]["cfi_vertices"] = cfi_even.n();
    rec["results"]["cfi_edges"] = cfi_even.edges.size();
    const std::string manifest_path = o.out + ".manifest.json";
    cfiwl::write_text_file_atomic(manifest_path, rec.dump(2) + "\n");
    std::cerr << "gen-cfi: wrote " << even_path << ", " << odd_path << ", " << manifest_path
              << " (" << rec["label"].get<std::string>() << ")\n";
    return kExitOk;
}

// ---- gen-compressed -------------------------------------------------------------

struct GenCompressedOpts {
    int k = 3;
    int w = 0;
    std::string periods;
    std::string twist = "first-column";
    std::string out;
    std::uint64_t seed = 0;
    bool emit_precompressed = false;
};

cfiwl::GridParams params_from_flags(int k, int w, const std::string& periods) {
    if (w > 0 && !periods.empty())
        throw invalid_input_error("give either --w (regular regime) or --periods (toy), not both");
    if (w > 0) return cfiwl::build_params(k, w);
    if (!periods.empty()) return cfiwl::toy_params(k, parse_list(periods));
    throw invalid_input_error("need --w W or --periods a,b,c");
}

int run_gen_compressed(const GenCompressedOpts& o) {
    if (o.out.empty()) throw invalid_input_error("gen-compressed needs --out PREFIX");
    json rec = base_record("gen-compressed");
    json& descriptor = rec["descriptor"];
    const cfiwl::GridParams params = params_from_flags(o.k, o.w, o.periods);
    descriptor["k"] = params.k;
    descriptor["w"] = params.w;
    descriptor["toy"] = params.toy;
    descriptor["periods"] = params.periods;
    descriptor["seed"] = o.seed;
    const cfiwl::GridContext ctx = cfiwl::make_grid_context(params);
    const cfiwl::BaseCompression comp = cfiwl::grid_compression(ctx);
    const cfiwl::OrderedBaseGraph& cyl = ctx.cylinder;

    const cfiwl::EdgeAssignment even = cfiwl::zero_assignment(cyl);
    cfiwl::EdgeAssignment odd = even;
    if (o.twist == "first-column") {
        const auto e = cyl.edge_index(ctx.cyl_vertex(0, 0), ctx.cyl_vertex(1, 0));
        odd = cfiwl::single_edge_assignment(cyl, *e);
        descriptor["twist"] = o.twist;
        descriptor["twist_edges"] =
            json::array({json::array({ctx.cyl_vertex(0, 0), ctx.cyl_vertex(1, 0)})});
    } else if (o.twist == "none") {
        descriptor["twist"] = o.twist;
    } else {
        throw invalid_input_error("gen-compressed supports --twist first-column | none");
    }

    const cfiwl::CompressedCFIGraph q_even = cfiwl::build_compressed_cfi(cyl, comp, even);
    const cfiwl::CompressedCFIGraph q_odd = cfiwl::build_compressed_cfi(cyl, comp, odd);
    rec["label"] = cfiwl::cfi_isomorphic(cyl, even, odd) ? "isomorphic" : "non-isomorphic";

    const std::string even_path = o.out + ".even.json";
    const std::string odd_path = o.out + ".odd.json";
    const std::string classes_path = o.out + ".classes.json";
    const std::string even_text = cfiwl::graph_to_json(q_even.graph, {{"side", "even"}});
    const std::string odd_text = cfiwl::graph_to_json(q_odd.graph, {{"side", "odd"}});
    json classes_doc;
    classes_doc["artifact_version"] = kArtifactVersion;
    classes_doc["classes"] = comp.members; // member ids ascending per class
    const std::string classes_text = classes_doc.dump(2) + "\n";
    cfiwl::write_text_file_atomic(even_path, even_text);
    cfiwl::write_text_file_atomic(odd_path, odd_text);
    cfiwl::write_text_file_atomic(classes_path, classes_text);
    rec["files"]["even"] = file_entry(even_path, even_text);
    rec["files"]["odd"] = file_entry(odd_path, odd_text);
    rec["files"]["classes"] = file_entry(classes_path, classes_text);

    if (o.emit_precompressed) {
        const cfiwl::ColoredGraph pre_even =
            cfiwl::cfi_with_lifted_relation(cfiwl::build_cfi(cyl, even), comp);
        const cfiwl::ColoredGraph pre_odd =
            cfiwl::cfi_with_lifted_relation(cfiwl::build_cfi(cyl, odd), comp);
        const std::string pe_path = o.out + ".pre.even.json";
        const std::string po_path = o.out + ".pre.odd.json";
        const std::string pe_text = cfiwl::graph_to_json(pre_even, {{"side", "even"}});
        const std::string po_text = cfiwl::graph_to_json(pre_odd, {{"side", "odd"}});
        cfiwl::write_text_file_atomic(pe_path, pe_text);
        cfiwl::write_text_file_atomic(po_path, po_text);
        rec["files"]["pre_even"] = file_entry(pe_path, pe_text);
        rec["files"]["pre_odd"] = file_entry(po_path, po_text);
    }

    // Degree bound d and the counting identity for the quotient size.
    int dmax = 0;
    for (cfiwl::Vertex v = 0; v < cyl.n; ++v) dmax = std::max(dmax, cyl.degree(v));
    const std::uint64_t formula = cfiwl::compressed_size(cyl, comp);
    rec["results"]["base_n"] = cyl.n;
    rec["results"]["j_len"] = params.j_len;
    rec["results"]["jstar_len"] = params.jstar_len;
    rec["results"]["lambda"] = params.lambda;
    rec["results"]["classes"] = comp.num_classes();
    rec["results"]["compressed_vertices"] = q_even.graph.n;
    rec["results"]["size_formula"] = formula;
    rec["results"]["size_bound"] = (std::uint64_t{1} << (dmax - 1)) *
                                   static_cast<std::uint64_t>(comp.num_classes());
    rec["results"]["max_degree"] = dmax;
    const std::string manifest_path = o.out + ".manifest.json";
    cfiwl::write_text_file_atomic(manifest_path, rec.dump(2) + "\n");
    std::cerr << "gen-compressed: classes=" << comp.num_classes()
              << " compressed_vertices=" << q_even.graph.n << " (" << manifest_path << ")\n";
    return kExitOk;
}

// ---- wl / distinguish --------------------------------------------------------

struct WlOpts {
    std::string input;
    std::string input2;
    std::string format;
    int k = 1;
    int max_rounds = -1;
    std::uint64_t max_tuples = 200'000'000;
    const CLI::Option* max_tuples_opt = nullptr;
    bool histograms = false;
    std::string out;
    std::string config;
};

std::string histogram_key(const std::vector<std::pair<int, long long>>& h) {
    std::string s;
    for (const auto& [color, count] : h)
        s += std::to_string(color) + ":" + std::to_string(count) + ";";
    return s;
}

json wl_result_to_json(const cfiwl::WlResult& res, bool with_histograms) {
    json out;
    out["k"] = res.k;
    out["rounds_run"] = res.rounds_run;
    out["stabilized"] = res.stabilized;
    json per_round = json::array();
    for (const auto& s : res.per_round)
        per_round.push_back(json{{"num_colors", s.num_colors}, {"round", s.round}});
    out["per_round"] = std::move(per_round);
    json hashes = json::array();
    for (const auto& g : res.histograms) hashes.push_back(hex64(cfiwl::fnv1a64(histogram_key(g.back()))));
    out["final_histogram_fnv1a64"] = std::move(hashes);
    if (with_histograms) {
        json all = json::array();
        for (const auto& g : res.histograms) {
            json rounds = json::array();
            for (const auto& h : g) {
                json pairs = json::array();
                for (const auto& [color, count] : h) pairs.push_back(json::array({color, count}));
                rounds.push_back(std::move(pairs));
            }
            all.push_back(std::move(rounds));
        }
        out["histograms"] = std::move(all);
    }
    return out;
}

int run_wl(const WlOpts& o) {
    if (o.input.empty()) throw invalid_input_error("wl needs --input FILE");
    const json config = load_config(o.config);
    cfiwl::WlOptions opt;
    opt.k = o.k;
    opt.max_rounds = o.max_rounds;
    opt.max_tuples = resolve_cap(o.max_tuples_opt, o.max_tuples, config, "max_tuples",
                                 "CFIWL_MAX_TUPLES", opt.max_tuples);
    json rec = base_record("wl");
    rec["descriptor"]["input"] = o.input;
    const cfiwl::ColoredGraph a = load_graph(o.input, o.format);
    rec["descriptor"]["input_n"] = a.n;
    std::vector<const cfiwl::ColoredGraph*> graphs{&a};
    cfiwl::ColoredGraph b;
    if (!o.input2.empty()) {
        b = load_graph(o.input2, o.format);
        rec["descriptor"]["input2"] = o.input2;
        rec["descriptor"]["input2_n"] = b.n;
        graphs.push_back(&b);
    }
    rec["settings"]["k"] = opt.k;
    rec["settings"]["max_rounds"] = opt.max_rounds;
    rec["settings"]["max_tuples"] = opt.max_tuples;
    const cfiwl::WlResult res = cfiwl::wl_run(graphs, opt);
    rec["results"] = wl_result_to_json(res, o.histograms);
    if (graphs.size() == 2) {
        const auto d = res.distinguishing_round();
        rec["results"]["distinguishing_round"] = d ? json(*d) : json(nullptr);
    }
    emit_record(rec, o.out);
    std::cerr << "wl: rounds_run=" << res.rounds_run << " stabilized=" << res.stabilized
              << " colors=" << res.per_round.back().num_colors << "\n";
    return kExitOk;
}

struct DistinguishOpts {
    std::string a;
    std::string b;
    std::string format;
    int k = 2;
    int max_rounds = -1;
    std::uint64_t max_tuples = 200'000'000;
    const CLI::Option* max_tuples_opt = nullptr;
    std::string out;
    std::string config;
};

int run_distinguish(const DistinguishOpts& o) {
    if (o.a.empty() || o.b.empty()) throw invalid_input_error("distinguish needs --a and --b");
    const json config = load_config(o.config);
    cfiwl::WlOptions opt;
    opt.k = o.k;
    opt.max_rounds = o.max_rounds;
    opt.max_tuples = resolve_cap(o.max_tuples_opt, o.max_tuples, config, "max_tuples",
                                 "CFIWL_MAX_TUPLES", opt.max_tuples);
    json rec = base_record("distinguish");
    rec["descriptor"]["a"] = o.a;
    rec["descriptor"]["b"] = o.b;
    const cfiwl::ColoredGraph ga = load_graph(o.a, o.format);
    const cfiwl::ColoredGraph gb = load_graph(o.b, o.format);
    rec["settings"]["k"] = opt.k;
    rec["settings"]["max_rounds"] = opt.max_rounds;
    rec["settings"]["max_tuples"] = opt.max_tuples;
    const cfiwl::WlResult res = cfiwl::wl_run({&ga, &gb}, opt);
    const auto d = res.distinguishing_round();
    rec["results"] = wl_result_to_json(res, false);
    rec["results"]["distinguishing_round"] = d ? json(*d) : json(nullptr);
    rec["results"]["verdict"] = d ? "distinguished" : "none";
    emit_record(rec, o.out);
    if (d) {
        std::cerr << "distinguish: distinguished at round " << *d << "\n";
        return kExitOk;
    }
    std::cerr << "distinguish: not distinguished ("
              << (res.stabilized ? "stable partition" : "round cap") << ")\n";
    return kExitVerifyFail;
}

// ---- game-solve -----------------------------------------------------------------

struct GameSolveOpts {
    FamilySpec family;
    std::string input; // colored graph for the classic game
    std::string format;
    int cops = 1;
    bool compressed = false;
    std::string classes_file;
    int edge = -1;
    std::string initial;
    std::uint64_t state_cap = 5'000'000;
    const CLI::Option* state_cap_opt = nullptr;
    std::string out;
    std::string config;
};

std::vector<std::vector<cfiwl::Vertex>> load_classes(const std::string& path) {
    const json doc = json::parse(cfiwl::read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw invalid_input_error("classes file is not JSON: " + path);
    const json* arr = nullptr;
    if (doc.is_array()) arr = &doc;
    else if (doc.is_object() && doc.contains("classes")) arr = &doc.at("classes");
    else throw invalid_input_error("classes file needs a top-level array or a \"classes\" key");
    try {
        return arr->get<std::vector<std::vector<cfiwl::Vertex>>>();
    } catch (const json::exception& e) {
        throw invalid_input_error(std::string("classes file: ") + e.what());
    }
}

int run_game_solve(const GameSolveOpts& o) {
    const json config = load_config(o.config);
    const std::uint64_t cap = resolve_cap(o.state_cap_opt, o.state_cap, config, "state_cap",
                                          "CFIWL_STATE_CAP", o.state_cap);
    json rec = base_record("game-solve");
    rec["settings"]["cops"] = o.cops;
    rec["settings"]["state_cap"] = cap;
    cfiwl::GameSolveResult res;
    if (o.compressed) {
        if (!o.input.empty())
            throw invalid_input_error("compressed game takes a base graph, not --input");
        json& descriptor = rec["descriptor"];
        // build_family validates that exactly one family flag (or --base) is set.
        const cfiwl::OrderedBaseGraph base = build_family(o.family, descriptor);
        cfiwl::BaseCompression comp = o.classes_file.empty()
                                          ? cfiwl::discrete_compression(base)
                                          : cfiwl::make_compression(base, load_classes(o.classes_file));
        descriptor["classes"] = comp.num_classes();
        descriptor["mode"] = "compressed";
        const cfiwl::DirectedEdgeIndex idx = cfiwl::DirectedEdgeIndex::build(base);
        std::vector<int> initial;
        if (!o.initial.empty()) initial = parse_int_list(o.initial);
        const int edge = o.edge < 0 ? 0 : o.edge;
        rec["descriptor"]["initial_classes"] = initial;
        rec["descriptor"]["initial_edge"] = edge;
        res = cfiwl::solve_compressed_game(base, idx, comp, o.cops, initial, edge, cap);
    } else {
        cfiwl::ColoredGraph g;
        if (!o.input.empty()) {
            g = load_graph(o.input, o.format);
            rec["descriptor"]["input"] = o.input;
            rec["descriptor"]["mode"] = "classic";
        } else {
            json& descriptor = rec["descriptor"];
            g = build_family(o.family, descriptor).to_colored();
            descriptor["mode"] = "classic";
        }
        if (o.edge >= 0 || !o.initial.empty()) {
            std::vector<cfiwl::Vertex> initial;
            if (!o.initial.empty()) initial = parse_int_list(o.initial);
            rec["descriptor"]["initial_cops"] = initial;
            rec["descriptor"]["initial_edge"] = o.edge;
            res = cfiwl::solve_cops_robber_from(g, o.cops, initial, o.edge, cap);
        } else {
            res = cfiwl::solve_cops_robber(g, o.cops, cap);
        }
    }
    rec["results"]["cops_win"] = res.cops_win;
    rec["results"]["rounds"] = res.cops_win ? json(res.rounds) : json(nullptr);
    emit_record(rec, o.out);
    std::cerr << "game-solve: " << (res.cops_win ? "cops win in " + std::to_string(res.rounds) +
                                                       " rounds"
                                                 : std::string("robber wins"))
              << "\n";
    return kExitOk;
}

// ---- game-sim --------------------------------------------------------------------

struct GameSimOpts {
    int k = 3;
    int w = 0;
    std::string periods;
    std::string cops = "random";
    std::string script_file;
    int cop_count = 0; // 0: default k+1
    std::uint64_t seed = 0;
    int rounds = 0; // 0: default |J|/6 - (k+2)
    bool no_certify = false;
    std::string transcript_path;
    std::string out;
};

// Cop moves replayed from a file: {"moves": [[lift_class, destination], ...]},
// cycled when the game outlives the script.
class ScriptedCops final : public cfiwl::CopStrategy {
public:
    explicit ScriptedCops(std::vector<cfiwl::CopMove> moves) : moves_(std::move(moves)) {
        if (moves_.empty()) throw invalid_input_error("strategy script has no moves");
    }
    std::string name() const override { return "scripted"; }
    cfiwl::CopMove next(const std::vector<int>&, int, int round) override {
        return moves_[static_cast<std::size_t>(round - 1) % moves_.size()];
    }

private:
    std::vector<cfiwl::CopMove> moves_;
};

std::unique_ptr<cfiwl::CopStrategy> load_scripted_cops(const std::string& path) {
    const json doc = json::parse(cfiwl::read_text_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("moves"))
        throw invalid_input_error("strategy script needs a JSON object with \"moves\"");
    std::vector<cfiwl::CopMove> moves;
    for (const auto& m : doc.at("moves")) {
        if (!m.is_array() || m.size() != 2)
            throw invalid_input_error("strategy script: each move is [lift_class, destination]");
        moves.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
    }
    return std::make_unique<ScriptedCops>(std::move(moves));
}

int run_game_sim(const GameSimOpts& o) {
    json rec = base_record("game-sim");
    json& descriptor = rec["descriptor"];
    const cfiwl::GridParams params = params_from_flags(o.k, o.w, o.periods);
    descriptor["k"] = params.k;
    descriptor["w"] = params.w;
    descriptor["toy"] = params.toy;
    descriptor["periods"] = params.periods;
    descriptor["seed"] = o.seed;
    const cfiwl::GridContext ctx = cfiwl::make_grid_context(params);
    const cfiwl::BaseCompression comp = cfiwl::grid_compression(ctx);
    const cfiwl::DirectedEdgeIndex idx = cfiwl::DirectedEdgeIndex::build(ctx.cylinder);

    cfiwl::SimulationOptions sim;
    sim.cop_count = o.cop_count > 0 ? o.cop_count : params.k + 1;
    sim.max_rounds =
        o.rounds > 0 ? o.rounds
                     : static_cast<int>(params.j_len / 6 - (params.k + 2)); // survival horizon
    sim.seed = o.seed;
    sim.record_rounds = true;
    sim.check_certificates = !o.no_certify;
    descriptor["cop_count"] = sim.cop_count;
    descriptor["max_rounds"] = sim.max_rounds;
    descriptor["check_certificates"] = sim.check_certificates;

    std::unique_ptr<cfiwl::CopStrategy> cops;
    if (!o.script_file.empty()) {
        cops = load_scripted_cops(o.script_file);
        descriptor["cop_strategy"] = "scripted";
        descriptor["script"] = o.script_file;
    } else {
        cops = cfiwl::make_cop_strategy(cfiwl::cop_strategy_from_name(o.cops), ctx,
                                        sim.cop_count, o.seed);
        descriptor["cop_strategy"] = o.cops;
    }
    std::unique_ptr<cfiwl::RobberPolicy> robber =
        cfiwl::make_grid_robber_policy(ctx, idx, comp);

    const cfiwl::GameTranscript t =
        cfiwl::simulate_compressed_game(ctx.cylinder, idx, comp, *cops, *robber, sim);

    int moved = 0, certified = 0;
    for (const auto& r : t.rounds) {
        moved += r.stayed ? 0 : 1;
        certified += r.certified ? 1 : 0;
    }
    rec["results"]["rounds_played"] = t.rounds_played;
    rec["results"]["captured"] = t.captured;
    rec["results"]["robber_survived"] = t.robber_survived;
    rec["results"]["illegal_robber_move"] = t.illegal_robber_move;
    rec["results"]["illegal_cop_move"] = t.illegal_cop_move;
    rec["results"]["failure"] = t.failure;
    rec["results"]["moves"] = moved;
    rec["results"]["certified_rounds"] = certified;
    if (!o.transcript_path.empty()) {
        const std::string lines = cfiwl::transcript_to_json_lines(t);
        cfiwl::write_text_file_atomic(o.transcript_path, lines);
        rec["files"]["transcript"] = file_entry(o.transcript_path, lines);
    }
    emit_record(rec, o.out);
    std::cerr << "game-sim: " << t.cop_strategy << " seed=" << t.seed << " rounds="
              << t.rounds_played << "/" << t.max_rounds
              << (t.robber_survived ? " robber survived" : " robber LOST") << "\n";
    if (!t.failure.empty()) std::cerr << "game-sim: failure: " << t.failure << "\n";
    return t.robber_survived ? kExitOk : kExitVerifyFail;
}

// ---- verify -----------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    bool pass = true;
    long long trials = 0;
    std::string detail;
};

// Random connected base graph: a random spanning tree plus extra edges,
// keeping every degree at or below max_degree.
cfiwl::OrderedBaseGraph random_connected_base(cfiwl::Rng& rng, int n, int max_degree) {
    std::vector<cfiwl::Edge> edges;
    std::vector<int> deg(n, 0);
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
        edges.push_back({u, v});
        ++deg[u];
        ++deg[v];
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (deg[u] >= max_degree || deg[v] >= max_degree) continue;
            if (std::find(edges.begin(), edges.end(), cfiwl::Edge{u, v}) != edges.end())
                continue;
            if (rng.next_bernoulli(1, 4)) {
                edges.push_back({u, v});
                ++deg[u];
                ++deg[v];
            }
        }
    return cfiwl::make_base_graph(n, std::move(edges));
}

cfiwl::EdgeAssignment random_assignment(cfiwl::Rng& rng, const cfiwl::OrderedBaseGraph& g) {
    cfiwl::EdgeAssignment f = cfiwl::zero_assignment(g);
    for (auto& b : f.bits) b = rng.next_bool() ? 1 : 0;
    return f;
}

// Twisting existence, the parity criterion, and brute-force CFI isomorphism
// must give one verdict on small random bases.
SuiteResult suite_twisting(std::uint64_t seed, long long trials) {
    SuiteResult r{"twisting-iso"};
    cfiwl::Rng rng(seed);
    for (long long t = 0; t < trials; ++t) {
        const int n = rng.next_int(2, 6);
        const cfiwl::OrderedBaseGraph base = random_connected_base(rng, n, 3);
        const cfiwl::EdgeAssignment f = random_assignment(rng, base);
        const cfiwl::EdgeAssignment g = random_assignment(rng, base);
        const auto tw = cfiwl::find_twisting(base, f, g);
        const bool parity = cfiwl::cfi_isomorphic(base, f, g);
        const auto brute = cfiwl::brute_force_isomorphic(
            cfiwl::build_cfi(base, f).to_colored(), cfiwl::build_cfi(base, g).to_colored(), {},
            64);
        if (tw.has_value() != parity || brute.has_value() != parity) {
            r.pass = false;
            r.detail = "disagreement at trial " + std::to_string(t);
            return r;
        }
        if (tw) {
            const cfiwl::DirectedEdgeIndex idx = cfiwl::DirectedEdgeIndex::build(base);
            if (!(cfiwl::apply_twisting(base, idx, g, *tw) == f)) {
                r.pass = false;
                r.detail = "returned twisting does not map g to f at trial " + std::to_string(t);
                return r;
            }
        }
        ++r.trials;
    }
    return r;
}

struct CorpusEntry {
    std::string name;
    cfiwl::OrderedBaseGraph base;
    cfiwl::BaseCompression comp;
};

// End columns of a grid-family graph merged row by row (non-adjacent once
// cols >= 3, degrees equal by symmetry), every other vertex a singleton.
cfiwl::BaseCompression end_column_classes(const cfiwl::OrderedBaseGraph& g, int rows,
                                          int cols) {
    std::vector<std::vector<cfiwl::Vertex>> classes;
    for (int r = 0; r < rows; ++r) classes.push_back({r * cols, r * cols + (cols - 1)});
    for (int r = 0; r < rows; ++r)
        for (int c = 1; c + 1 < cols; ++c) classes.push_back({r * cols + c});
    return cfiwl::make_compression(g, classes);
}

std::vector<CorpusEntry> small_corpus() {
    std::vector<CorpusEntry> corpus;
    cfiwl::OrderedBaseGraph hexa =
        cfiwl::make_base_graph(6, {{0, 1}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    cfiwl::BaseCompression antipodal = cfiwl::make_compression(hexa, {{0, 3}, {1, 4}, {2, 5}});
    corpus.push_back({"hexagon-antipodal", hexa, antipodal});
    cfiwl::OrderedBaseGraph cyl = cfiwl::make_cylinder(3, 3);
    corpus.push_back({"cylinder3x3-endcols", cyl, end_column_classes(cyl, 3, 3)});
    cfiwl::OrderedBaseGraph grid = cfiwl::make_grid(3, 3);
    corpus.push_back({"grid3x3-endcols", grid, end_column_classes(grid, 3, 3)});
    return corpus;
}

// Quotient vertex counts: built graph == class-wise formula <= 2^(d-1) * #classes.
SuiteResult suite_counting(std::uint64_t, long long) {
    SuiteResult r{"compressed-count"};
    std::vector<CorpusEntry> corpus = small_corpus();
    {
        const cfiwl::GridContext ctx =
            cfiwl::make_grid_context(cfiwl::toy_params(3, {2, 3, 5}));
        corpus.push_back({"toy-grid-235", ctx.cylinder, cfiwl::grid_compression(ctx)});
    }
    for (const auto& entry : corpus) {
        const cfiwl::OrderedBaseGraph& g = entry.base;
        const cfiwl::BaseCompression& comp = entry.comp;
        std::uint64_t direct = 0;
        int dmax = 0;
        for (const auto& members : comp.members)
            direct += std::uint64_t{1} << (g.degree(members.front()) - 1);
        for (cfiwl::Vertex v = 0; v < g.n; ++v) dmax = std::max(dmax, g.degree(v));
        const std::uint64_t formula = cfiwl::compressed_size(g, comp);
        const std::uint64_t built =
            static_cast<std::uint64_t>(
                cfiwl::build_compressed_cfi(g, comp, cfiwl::zero_assignment(g)).graph.n);
        const std::uint64_t bound =
            (std::uint64_t{1} << (dmax - 1)) * static_cast<std::uint64_t>(comp.num_classes());
        if (formula != direct || built != formula || formula > bound) {
            r.pass = false;
            r.detail = entry.name + ": formula=" + std::to_string(formula) +
                       " direct=" + std::to_string(direct) + " built=" + std::to_string(built) +
                       " bound=" + std::to_string(bound);
            return r;
        }
        ++r.trials;
    }
    // Larger toy instance: formula and census arithmetic only.
    const cfiwl::GridContext midi = cfiwl::make_grid_context(cfiwl::toy_params(3, {8, 9, 11}));
    const cfiwl::BaseCompression comp = cfiwl::grid_compression(midi);
    std::uint64_t direct = 0;
    for (const auto& members : comp.members)
        direct += std::uint64_t{1} << (midi.cylinder.degree(members.front()) - 1);
    long long census_classes = 0;
    for (const auto& row : cfiwl::class_census(midi)) census_classes += row.total_classes();
    if (cfiwl::compressed_size(midi.cylinder, comp) != direct ||
        census_classes != comp.num_classes()) {
        r.pass = false;
        r.detail = "toy-grid-8-9-11: census/formula mismatch";
        return r;
    }
    ++r.trials;
    return r;
}

// The three faces of compressed equivalence must agree: a compressible
// twisting between the assignments, isomorphism of the relation-carrying CFI
// graphs, isomorphism of the quotients.
SuiteResult suite_equivalence(std::uint64_t seed, long long trials) {
    SuiteResult r{"compressed-equivalence"};
    cfiwl::Rng rng(seed);
    const std::vector<CorpusEntry> corpus = small_corpus();
    for (long long t = 0; t < trials; ++t) {
        const CorpusEntry& entry = corpus[static_cast<std::size_t>(t) % corpus.size()];
        const cfiwl::OrderedBaseGraph& base = entry.base;
        const cfiwl::BaseCompression& comp = entry.comp;
        const cfiwl::DirectedEdgeIndex idx = cfiwl::DirectedEdgeIndex::build(base);
        auto compressible = [&](cfiwl::Rng& rr) {
            for (int attempt = 0; attempt < 4096; ++attempt) {
                cfiwl::EdgeAssignment f = random_assignment(rr, base);
                if (cfiwl::is_compressible_assignment(base, comp, f)) return f;
            }
            throw invalid_input_error("failed to sample a compressible assignment");
        };
        const cfiwl::EdgeAssignment f = compressible(rng);
        const cfiwl::EdgeAssignment g = compressible(rng);
        const bool via_twisting =
            cfiwl::find_compressible_twisting(base, idx, comp, f, g).has_value();
        const bool via_precompressed =
            cfiwl::brute_force_isomorphic(
                cfiwl::cfi_with_lifted_relation(cfiwl::build_cfi(base, f), comp),
                cfiwl::cfi_with_lifted_relation(cfiwl::build_cfi(base, g), comp), {}, 64)
                .has_value();
        const bool via_quotient =
            cfiwl::brute_force_isomorphic(cfiwl::build_compressed_cfi(base, comp, f).graph,
                                          cfiwl::build_compressed_cfi(base, comp, g).graph, {},
                                          64)
                .has_value();
        if (via_twisting != via_precompressed || via_precompressed != via_quotient) {
            r.pass = false;
            r.detail = entry.name + " trial " + std::to_string(t) + ": twisting=" +
                       std::to_string(via_twisting) + " precompressed=" +
                       std::to_string(via_precompressed) + " quotient=" +
                       std::to_string(via_quotient);
            return r;
        }
        ++r.trials;
    }
    return r;
}

// At most one k-vertex toroidal vertical separator inside the closure of W,
// and the staircase finder returns exactly it.
SuiteResult suite_separator(std::uint64_t seed, long long trials) {
    SuiteResult r{"separator-unique"};
    const cfiwl::GridContext ctx = cfiwl::make_grid_context(cfiwl::toy_params(3, {2, 3, 5}));
    cfiwl::Rng rng(seed);
    const int k = ctx.k();
    for (long long t = 0; t < trials; ++t) {
        std::vector<cfiwl::Vertex> w;
        if (rng.next_bernoulli(7, 10)) {
            for (int row = 0; row < k; ++row)
                w.push_back(ctx.cyl_vertex(row, static_cast<int>(rng.next_below(
                                                    static_cast<std::uint64_t>(ctx.j_len())))));
        } else {
            const int size = rng.next_int(1, k);
            for (int i = 0; i < size; ++i)
                w.push_back(static_cast<cfiwl::Vertex>(
                    rng.next_below(static_cast<std::uint64_t>(ctx.cylinder.n))));
        }
        std::sort(w.begin(), w.end());
        w.erase(std::unique(w.begin(), w.end()), w.end());
        const std::vector<cfiwl::RC> closure = cfiwl::equiv_star_closure(ctx, w);
        // A vertical separator must meet every row: a set missing row i leaves
        // that row's full path intact under every cyclic shift. So k-subsets
        // with one member per row are the only candidates.
        std::vector<std::vector<cfiwl::RC>> by_row(static_cast<std::size_t>(k));
        for (const cfiwl::RC& v : closure) by_row[static_cast<std::size_t>(v.row)].push_back(v);
        int count = 0;
        std::vector<cfiwl::RC> found;
        const bool full_rows =
            std::none_of(by_row.begin(), by_row.end(), [](const auto& m) { return m.empty(); });
        if (full_rows) {
            for (const cfiwl::RC& a : by_row[0])
                for (const cfiwl::RC& b : by_row[1])
                    for (const cfiwl::RC& c : by_row[2]) {
                        const std::vector<cfiwl::RC> s{a, b, c};
                        if (cfiwl::is_toroidal_vertical_separator(ctx, s).separates) {
                            ++count;
                            found = s;
                        }
                    }
        }
        const auto stair = cfiwl::staircase_separator(ctx, w);
        bool ok = count <= 1 && stair.has_value() == (count == 1);
        if (ok && stair) {
            std::vector<cfiwl::RC> a = *stair;
            std::sort(a.begin(), a.end());
            std::sort(found.begin(), found.end());
            ok = a == found;
        }
        if (!ok) {
            r.pass = false;
            r.detail = "trial " + std::to_string(t) + ": separators=" + std::to_string(count) +
                       " staircase=" + std::to_string(stair.has_value());
            return r;
        }
        ++r.trials;
    }
    return r;
}

// End-to-end twistings exist exactly off the pseudo-separators, and every
// returned twisting checks out independently.
SuiteResult suite_jump(std::uint64_t seed, long long trials) {
    SuiteResult r{"jump-twisting"};
    const cfiwl::GridContext ctx = cfiwl::make_grid_context(cfiwl::toy_params(3, {2, 3, 5}));
    const cfiwl::BaseCompression comp = cfiwl::grid_compression(ctx);
    const cfiwl::DirectedEdgeIndex idx = cfiwl::DirectedEdgeIndex::build(ctx.cylinder);
    cfiwl::Rng rng(seed);
    const int jl = ctx.j_len();
    for (long long t = 0; t < trials; ++t) {
        std::vector<cfiwl::Vertex> w;
        if (rng.next_bernoulli(1, 4)) {
            const int col = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(jl)));
            for (int row = 0; row < ctx.k(); ++row) w.push_back(ctx.cyl_vertex(row, col));
        } else {
            const int size = rng.next_int(1, ctx.k());
            for (int i = 0; i < size; ++i)
                w.push_back(static_cast<cfiwl::Vertex>(
                    rng.next_below(static_cast<std::uint64_t>(ctx.cylinder.n))));
            std::sort(w.begin(), w.end());
            w.erase(std::unique(w.begin(), w.end()), w.end());
        }
        const bool pseudo = cfiwl::is_pseudo_separator(ctx, w);
        const auto report = cfiwl::pseudo_separator_report(ctx, w);
        const auto e2e = cfiwl::end_to_end_twisting(ctx, idx, w);
        bool ok = pseudo == (report.pairwise_all && report.closure_vertical) &&
                  e2e.has_value() == !pseudo;
        if (ok && e2e) {
            const cfiwl::Twisting& tw = e2e->twisting;
            ok = cfiwl::is_twisting(ctx.cylinder, idx, tw) &&
                 cfiwl::is_compressible_twisting(ctx.cylinder, idx, comp, tw);
            if (ok)
                for (cfiwl::Vertex v : cfiwl::equiv_closure(ctx, w))
                    if (!cfiwl::twisting_fixes(ctx.cylinder, idx, tw, v)) {
                        ok = false;
                        break;
                    }
            if (ok) {
                const std::vector<int> twisted = cfiwl::twisted_edges(ctx.cylinder, idx, tw);
                auto touches = [&](int e, int col) {
                    const auto [u, v] = ctx.cylinder.edges[static_cast<std::size_t>(e)];
                    return ctx.cyl_rc(u).col == col || ctx.cyl_rc(v).col == col;
                };
                ok = twisted.size() == 2 &&
                     ((touches(twisted[0], 0) && touches(twisted[1], jl - 1)) ||
                      (touches(twisted[1], 0) && touches(twisted[0], jl - 1)));
            }
        }
        if (!ok) {
            r.pass = false;
            r.detail = "trial " + std::to_string(t) + ": pseudo=" + std::to_string(pseudo) +
                       " twisting=" + std::to_string(e2e.has_value());
            return r;
        }
        ++r.trials;
    }
    return r;
}

struct VerifyOpts {
    std::string suite;
    std::uint64_t seed = 1;
    long long trials = 0; // 0: per-suite default
};

int run_verify(const VerifyOpts& o) {
    using SuiteFn = SuiteResult (*)(std::uint64_t, long long);
    const std::vector<std::tuple<std::string, SuiteFn, long long>> suites = {
        {"twisting-iso", suite_twisting, 60},
        {"compressed-count", suite_counting, 1},
        {"compressed-equivalence", suite_equivalence, 36},
        {"separator-unique", suite_separator, 60},
        {"jump-twisting", suite_jump, 80},
    };
    if (o.suite.empty()) {
        std::cout << "available suites:\n";
        for (const auto& [name, fn, def] : suites)
            std::cout << "  " << name << " (default " << def << " trials)\n";
        std::cout << "  all\n";
        return kExitOk;
    }
    bool any = false, all_pass = true;
    for (const auto& [name, fn, def] : suites) {
        if (o.suite != "all" && o.suite != name) continue;
        any = true;
        const SuiteResult res = fn(o.seed, o.trials > 0 ? o.trials : def);
        if (res.pass) {
            std::cout << "suite " << res.name << ": PASS (" << res.trials << " checks)\n";
        } else {
            std::cout << "suite " << res.name << ": FAIL - " << res.detail << "\n";
            all_pass = false;
        }
    }
    if (!any) throw invalid_input_error("unknown suite: " + o.suite + " (try: verify)");
    return all_pass ? kExitOk : kExitVerifyFail;
}

// ---- furer-curve ---------------------------------------------------------------

struct FurerOpts {
    std::string sizes = "4,8,16,32,40";
    int k = 2;
    std::uint64_t max_tuples = 200'000'000;
    const CLI::Option* max_tuples_opt = nullptr;
    int threads = 1;
    std::string out;
    std::string record;
    std::string config;
};

struct FurerPoint {
    int n = 0;
    std::optional<int> round;
    int cfi_vertices = 0;
};

FurerPoint furer_point(int n, int k, std::uint64_t max_tuples) {
    const cfiwl::OrderedBaseGraph base = cfiwl::make_grid(2, n);
    const cfiwl::EdgeAssignment even = cfiwl::zero_assignment(base);
    const cfiwl::EdgeAssignment odd =
        cfiwl::single_edge_assignment(base, *base.edge_index(0, n));
    const cfiwl::ColoredGraph a = cfiwl::build_cfi(base, even).to_colored();
    const cfiwl::ColoredGraph b = cfiwl::build_cfi(base, odd).to_colored();
    FurerPoint p;
    p.n = n;
    p.cfi_vertices = a.n;
    p.round = cfiwl::wl_distinguishing_round(a, b, k, max_tuples);
    return p;
}

int run_furer(const FurerOpts& o) {
    const json config = load_config(o.config);
    const std::uint64_t max_tuples = resolve_cap(o.max_tuples_opt, o.max_tuples, config,
                                                 "max_tuples", "CFIWL_MAX_TUPLES", o.max_tuples);
    const std::vector<int> sizes = parse_int_list(o.sizes);
    const int threads = std::max(1, o.threads);
    std::vector<FurerPoint> points(sizes.size());
    // Independent jobs; results land in input order, so the bytes do not
    // depend on the thread count.
    for (std::size_t begin = 0; begin < sizes.size();
         begin += static_cast<std::size_t>(threads)) {
        const std::size_t end =
            std::min(sizes.size(), begin + static_cast<std::size_t>(threads));
        std::vector<std::future<FurerPoint>> batch;
        for (std::size_t i = begin; i < end; ++i)
            batch.push_back(std::async(std::launch::async, furer_point, sizes[i], o.k,
                                       max_tuples));
        for (std::size_t i = begin; i < end; ++i) points[i] = batch[i - begin].get();
    }
    std::string csv = "n,distinguishing_round\n";
    for (const auto& p : points)
        csv += std::to_string(p.n) + "," + (p.round ? std::to_string(*p.round) : "none") + "\n";
    emit_text(o.out, csv);
    if (!o.record.empty()) {
        json rec = base_record("furer-curve");
        rec["descriptor"]["sizes"] = sizes;
        rec["descriptor"]["family"] = "grid-2xn-cfi-pair";
        rec["settings"]["k"] = o.k;
        rec["settings"]["max_tuples"] = max_tuples;
        // The thread count is deliberately not recorded: records must not
        // depend on the parallelism level.
        json rows = json::array();
        for (const auto& p : points)
            rows.push_back(json{{"cfi_vertices", p.cfi_vertices},
                                {"distinguishing_round", p.round ? json(*p.round) : json(nullptr)},
                                {"n", p.n}});
        rec["results"]["points"] = std::move(rows);
        rec["results"]["csv_fnv1a64"] = hex64(cfiwl::fnv1a64(csv));
        emit_record(rec, o.record);
    }
    for (const auto& p : points)
        std::cerr << "furer-curve: n=" << p.n << " round="
                  << (p.round ? std::to_string(*p.round) : "none") << "\n";
    return kExitOk;
}

// ---- export ---------------------------------------------------------------------

struct ExportOpts {
    std::string input;
    std::string in_format;
    std::string format = "json";
    std::string out;
    bool force = false;
};

int run_export(const ExportOpts& o) {
    if (o.input.empty()) throw invalid_input_error("export needs --input FILE");
    const cfiwl::ColoredGraph g = load_graph(o.input, o.in_format);
    const cfiwl::GraphFormat fmt = cfiwl::graph_format_from_name(o.format);
    if (!cfiwl::format_is_lossless_for(g, fmt)) {
        if (!o.force)
            throw invalid_input_error(o.format +
                                      " would drop colors or the equivalence relation; "
                                      "pass --force to export anyway");
        std::cerr << "warning: " << o.format
                  << " drops colors and the equivalence relation\n";
    }
    std::string text = cfiwl::graph_to_format(g, fmt);
    if (fmt == cfiwl::GraphFormat::graph6) text += "\n";
    emit_text(o.out, text);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CFI construction, Weisfeiler-Leman and pursuit-game toolkit"};
    app.set_version_flag("--version", std::string("cfiwl ") + kArtifactVersion);
    app.require_subcommand(1);
    int rc = kExitOk;

    auto gen_base = std::make_shared<GenBaseOpts>();
    {
        CLI::App* sub = app.add_subcommand("gen-base", "generate a base graph");
        add_family_flags(sub, gen_base->family, false);
        sub->add_option("--out", gen_base->out, "output file (default stdout)");
        sub->add_option("--format", gen_base->format, "json | dimacs | graph6");
        sub->callback([gen_base, &rc] { rc = run_gen_base(*gen_base); });
    }

    auto gen_cfi = std::make_shared<GenCfiOpts>();
    {
        CLI::App* sub = app.add_subcommand("gen-cfi", "generate a CFI graph pair + manifest");
        add_family_flags(sub, gen_cfi->family, true);
        sub->add_option("--twist", gen_cfi->twist, "none | first-column | edge:U-V | random");
        sub->add_option("--out", gen_cfi->out, "output path prefix")->required();
        sub->add_option("--format", gen_cfi->format, "json | dimacs");
        sub->add_option("--seed", gen_cfi->seed, "seed for --twist random");
        sub->add_option("--max-degree", gen_cfi->max_degree, "gadget degree cap");
        sub->callback([gen_cfi, &rc] { rc = run_gen_cfi(*gen_cfi); });
    }

    auto gen_comp = std::make_shared<GenCompressedOpts>();
    {
        CLI::App* sub = app.add_subcommand(
            "gen-compressed", "generate a compressed CFI pair over the structured grid");
        sub->add_option("--k", gen_comp->k, "rows (k >= 3)");
        sub->add_option("--w", gen_comp->w, "width parameter of the regular regime");
        sub->add_option("--periods", gen_comp->periods, "explicit toy periods a,b,c");
        sub->add_option("--twist", gen_comp->twist, "first-column | none");
        sub->add_option("--out", gen_comp->out, "output path prefix")->required();
        sub->add_option("--seed", gen_comp->seed, "recorded in the manifest");
        sub->add_flag("--emit-precompressed", gen_comp->emit_precompressed,
                      "also write the relation-carrying CFI pair");
        sub->callback([gen_comp, &rc] { rc = run_gen_compressed(*gen_comp); });
    }

    auto wl = std::make_shared<WlOpts>();
    {
        CLI::App* sub = app.add_subcommand("wl", "run k-WL refinement on one or two graphs");
        sub->add_option("--input", wl->input, "graph file")->required();
        sub->add_option("--input2", wl->input2, "optional second graph");
        sub->add_option("--in-format", wl->format, "override input format sniffing");
        sub->add_option("-k,--k", wl->k, "WL dimension");
        sub->add_option("--max-rounds", wl->max_rounds, "-1 runs to stabilization");
        wl->max_tuples_opt = sub->add_option("--max-tuples", wl->max_tuples, "tuple cap");
        sub->add_flag("--histograms", wl->histograms, "embed full per-round histograms");
        sub->add_option("--out", wl->out, "record file (default stdout)");
        sub->add_option("--config", wl->config, "JSON config with default caps");
        sub->callback([wl, &rc] { rc = run_wl(*wl); });
    }

    auto dist = std::make_shared<DistinguishOpts>();
    {
        CLI::App* sub = app.add_subcommand(
            "distinguish", "first k-WL round separating two graphs (exit 2 when none)");
        sub->add_option("--a", dist->a, "first graph")->required();
        sub->add_option("--b", dist->b, "second graph")->required();
        sub->add_option("--in-format", dist->format, "override input format sniffing");
        sub->add_option("-k,--k", dist->k, "WL dimension");
        sub->add_option("--max-rounds", dist->max_rounds, "-1 runs to stabilization");
        dist->max_tuples_opt = sub->add_option("--max-tuples", dist->max_tuples, "tuple cap");
        sub->add_option("--out", dist->out, "record file (default stdout)");
        sub->add_option("--config", dist->config, "JSON config with default caps");
        sub->callback([dist, &rc] { rc = run_distinguish(*dist); });
    }

    auto solve = std::make_shared<GameSolveOpts>();
    {
        CLI::App* sub = app.add_subcommand("game-solve",
                                           "exact cops-and-robber value (classic or compressed)");
        add_family_flags(sub, solve->family, true);
        sub->add_option("--input", solve->input, "colored graph file (classic game)");
        sub->add_option("--in-format", solve->format, "override input format sniffing");
        sub->add_option("--cops", solve->cops, "number of cops")->required();
        sub->add_flag("--compressed", solve->compressed, "play on equivalence classes");
        sub->add_option("--classes", solve->classes_file, "class map JSON (compressed game)");
        sub->add_option("--edge", solve->edge, "initial robber edge (-1: adversarial)");
        sub->add_option("--initial", solve->initial, "initial cop vertices/classes a,b,c");
        solve->state_cap_opt = sub->add_option("--state-cap", solve->state_cap, "state cap");
        sub->add_option("--out", solve->out, "record file (default stdout)");
        sub->add_option("--config", solve->config, "JSON config with default caps");
        sub->callback([solve, &rc] { rc = run_game_solve(*solve); });
    }

    auto sim = std::make_shared<GameSimOpts>();
    {
        CLI::App* sub = app.add_subcommand(
            "game-sim", "simulate the compressed game on the structured grid (exit 2 unless "
                        "the robber survives)");
        sub->add_option("--k", sim->k, "rows (k >= 3)");
        sub->add_option("--w", sim->w, "width parameter of the regular regime");
        sub->add_option("--periods", sim->periods, "explicit toy periods a,b,c");
        sub->add_option("--cops", sim->cops, "random | greedy | sweep | separator");
        sub->add_option("--script", sim->script_file, "scripted cop moves JSON file");
        sub->add_option("--cop-count", sim->cop_count, "cops (default k+1)");
        sub->add_option("--seed", sim->seed, "strategy seed");
        sub->add_option("--rounds", sim->rounds, "rounds (default |J|/6 - (k+2))");
        sub->add_flag("--no-certify", sim->no_certify, "skip per-move certificate checks");
        sub->add_option("--transcript", sim->transcript_path, "JSON-lines transcript file");
        sub->add_option("--out", sim->out, "record file (default stdout)");
        sub->callback([sim, &rc] { rc = run_game_sim(*sim); });
    }

    auto verify = std::make_shared<VerifyOpts>();
    {
        CLI::App* sub = app.add_subcommand("verify", "run a property suite (exit 2 on failure)");
        sub->add_option("--suite", verify->suite,
                        "suite name or 'all'; omit to list available suites");
        sub->add_option("--seed", verify->seed, "sampling seed");
        sub->add_option("--trials", verify->trials, "override per-suite trial count");
        sub->callback([verify, &rc] { rc = run_verify(*verify); });
    }

    auto furer = std::make_shared<FurerOpts>();
    {
        CLI::App* sub = app.add_subcommand(
            "furer-curve", "distinguishing-round growth of 2xN grid CFI pairs, as CSV");
        sub->add_option("--sizes", furer->sizes, "comma-separated N values");
        sub->add_option("-k,--k", furer->k, "WL dimension");
        furer->max_tuples_opt = sub->add_option("--max-tuples", furer->max_tuples, "tuple cap");
        sub->add_option("--threads", furer->threads, "parallel jobs (bytes are unaffected)");
        sub->add_option("--out", furer->out, "CSV file (default stdout)");
        sub->add_option("--record", furer->record, "also write a JSON record");
        sub->add_option("--config", furer->config, "JSON config with default caps");
        sub->callback([furer, &rc] { rc = run_furer(*furer); });
    }

    auto exp = std::make_shared<ExportOpts>();
    {
        CLI::App* sub = app.add_subcommand("export", "convert a graph between formats");
        sub->add_option("--input", exp->input, "graph file")->required();
        sub->add_option("--in-format", exp->in_format, "override input format sniffing");
        sub->add_option("--format", exp->format, "json | dimacs | graph6");
        sub->add_option("--out", exp->out, "output file (default stdout)");
        sub->add_flag("--force", exp->force, "allow lossy export");
        sub->callback([exp, &rc] { rc = run_export(*exp); });
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const resource_cap_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const invalid_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    std::cerr << "elapsed_ms=" << elapsed << "\n";
    return rc;
}
