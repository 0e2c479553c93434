#include "sstdma/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sstdma {

using nlohmann::json;

static InterferenceGraph graph_from_json(const json& doc, std::vector<std::string>* warnings) {
    if (!doc.is_object() || !doc.contains("node_count") || !doc.contains("edges"))
        throw std::invalid_argument("graph document: expected {\"node_count\": N, \"edges\": [...]}");
    if (!doc["node_count"].is_number_integer())
        throw std::invalid_argument("graph document: node_count must be an integer");
    const int n = doc["node_count"].get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw std::invalid_argument("graph document: each edge must be a pair of integers");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    int dups = 0;
    InterferenceGraph g = InterferenceGraph::from_edges(n, edges, &dups);
    if (dups > 0 && warnings)
        warnings->push_back("graph document: dropped " + std::to_string(dups) + " duplicate edge(s)");
    return g;
}

InterferenceGraph load_graph_text(const std::string& json_text, std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("graph document: ") + e.what());
    }
    return graph_from_json(doc, warnings);
}

InterferenceGraph load_graph_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_graph_text(buf.str(), warnings);
}

std::string save_graph_text(const InterferenceGraph& g) {
    json doc;
    doc["node_count"] = g.node_count;
    json edges = json::array();
    for (auto [i, j] : g.edge_list()) edges.push_back(json::array({i, j}));
    doc["edges"] = std::move(edges);
    return doc.dump();
}

void save_graph_file(const InterferenceGraph& g, const std::string& path) {
    write_file_atomic(path, save_graph_text(g) + "\n");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

}  // namespace sstdma
