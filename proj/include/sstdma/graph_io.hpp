#pragma once

#include <string>
#include <vector>

#include "sstdma/topology.hpp"

namespace sstdma {

// Graph document: {"node_count": N, "edges": [[i,j], ...]}. Edges are written
// with i < j, sorted. Duplicate edges on load are deduplicated with a warning;
// self-loops, bad indices, and malformed documents throw std::invalid_argument.
InterferenceGraph load_graph_text(const std::string& json_text,
                                  std::vector<std::string>* warnings = nullptr);
InterferenceGraph load_graph_file(const std::string& path,
                                  std::vector<std::string>* warnings = nullptr);

std::string save_graph_text(const InterferenceGraph& g);
void save_graph_file(const InterferenceGraph& g, const std::string& path);

// Writes content to path via a temp file + rename, so readers never observe
// a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace sstdma
