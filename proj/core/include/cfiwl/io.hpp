#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cfiwl/games.hpp"
#include "cfiwl/graph.hpp"

namespace cfiwl {

enum class GraphFormat { json, dimacs, graph6 };

GraphFormat graph_format_from_name(const std::string& name); // throws invalid_input_error
std::string graph_format_name(GraphFormat f);

// True when writing g in the format loses nothing (graph6 drops colors and
// the equivalence relation).
bool format_is_lossless_for(const ColoredGraph& g, GraphFormat f);

// JSON graph interchange. Deterministic bytes: object keys sorted, arrays in
// canonical order. `meta` lands in a string-to-string "meta" object.
std::string graph_to_json(const ColoredGraph& g,
                          const std::map<std::string, std::string>& meta = {});
ColoredGraph graph_from_json(const std::string& text);

// DIMACS "p edge n m" with extension lines: "n <vertex> <color>" per colored
// vertex (1-based ids) and one "q <v1> <v2> ..." line per equivalence class.
std::string graph_to_dimacs(const ColoredGraph& g);
ColoredGraph graph_from_dimacs(const std::string& text);

// graph6 (plain simple-graph encoding; colors and relation are not stored).
std::string graph_to_graph6(const ColoredGraph& g);
ColoredGraph graph_from_graph6(const std::string& text);

std::string graph_to_format(const ColoredGraph& g, GraphFormat f);
ColoredGraph graph_from_format(const std::string& text, GraphFormat f);

// One JSON object per line: a header line, then one line per recorded round.
std::string transcript_to_json_lines(const GameTranscript& t);

// ---- Small file utilities (deterministic, atomic) ---------------------------

std::string read_text_file(const std::string& path);           // throws invalid_input_error
void write_text_file_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace cfiwl
