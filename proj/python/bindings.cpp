#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sstdma/analysis.hpp"
#include "sstdma/graph_io.hpp"
#include "sstdma/simulator.hpp"

namespace py = pybind11;
using namespace sstdma;

namespace {

FrameConfig make_config(int frame_size, int periods,
                        const std::vector<std::pair<int, int>>& partition,
                        std::optional<std::pair<int, int>> backoff) {
    std::vector<PeriodRange> ranges;
    for (auto [a, b] : partition) ranges.push_back({a, b});
    std::optional<BackoffWindow> bw;
    if (backoff) bw = BackoffWindow{backoff->first, backoff->second};
    return FrameConfig(frame_size, periods, ranges, bw);
}

std::vector<std::string> state_names(const World& w) {
    std::vector<std::string> out;
    for (auto rel : classify_all(w)) out.emplace_back(to_string(rel));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Self-stabilizing TDMA slot allocation: simulator and convergence bounds";

    py::class_<GraphStats>(m, "GraphStats")
        .def_readonly("edge_count", &GraphStats::edge_count)
        .def_readonly("mean_degree", &GraphStats::mean_degree)
        .def_readonly("max_degree", &GraphStats::max_degree)
        .def("__repr__", [](const GraphStats& s) {
            return "GraphStats(edge_count=" + std::to_string(s.edge_count) +
                   ", mean_degree=" + std::to_string(s.mean_degree) +
                   ", max_degree=" + std::to_string(s.max_degree) + ")";
        });

    py::class_<InterferenceGraph>(m, "InterferenceGraph")
        .def_static("from_edges",
                    [](int node_count, const std::vector<std::pair<int, int>>& edges) {
                        return InterferenceGraph::from_edges(node_count, edges);
                    },
                    py::arg("node_count"), py::arg("edges"))
        .def_readonly("node_count", &InterferenceGraph::node_count)
        .def_readonly("adjacency", &InterferenceGraph::adjacency)
        .def("degree", &InterferenceGraph::degree, py::arg("node"))
        .def("has_edge", &InterferenceGraph::has_edge, py::arg("i"), py::arg("j"))
        .def("edge_list", &InterferenceGraph::edge_list)
        .def("stats", [](const InterferenceGraph& g) { return graph_stats(g); });

    m.def("generate_rgg", &generate_rgg, py::arg("n_nodes"), py::arg("range"), py::arg("seed"));
    m.def("load_graph", [](const std::string& text) { return load_graph_text(text); },
          py::arg("json_text"));
    m.def("load_graph_file", [](const std::string& path) { return load_graph_file(path); },
          py::arg("path"));
    m.def("save_graph", &save_graph_text, py::arg("graph"));
    m.def("save_graph_file", &save_graph_file, py::arg("graph"), py::arg("path"));

    py::class_<FrameConfig>(m, "FrameConfig")
        .def(py::init(&make_config), py::arg("frame_size"), py::arg("periods"),
             py::arg("priority_partition") = std::vector<std::pair<int, int>>{},
             py::arg("backoff") = std::nullopt)
        .def_readonly("frame_size", &FrameConfig::frame_size)
        .def_readonly("periods", &FrameConfig::periods);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("converged", &RunResult::converged)
        .def_readonly("t_max", &RunResult::t_max)
        .def_readonly("rounds_executed", &RunResult::rounds_executed)
        .def_readonly("allocation_round", &RunResult::allocation_round)
        .def_readonly("winners_per_round", &RunResult::winners_per_round)
        .def_readonly("losses_per_round", &RunResult::losses_per_round)
        .def("trace_csv", [](const RunResult& r) { return trace_to_csv(r.traces); })
        .def("__repr__", [](const RunResult& r) {
            return std::string("RunResult(converged=") + (r.converged ? "True" : "False") +
                   ", t_max=" + std::to_string(r.t_max) + ")";
        });

    py::class_<World>(m, "World")
        .def(py::init([](const InterferenceGraph& g, const FrameConfig& cfg, std::uint64_t seed) {
                 return make_world(g, cfg, seed);
             }),
             py::arg("graph"), py::arg("config"), py::arg("seed"))
        .def_property_readonly("round_index", [](const World& w) { return w.round_index; })
        .def_property_readonly("node_count", [](const World& w) { return w.graph.node_count; })
        .def("slots",
             [](const World& w) {
                 std::vector<int> out;
                 for (const auto& st : w.states) out.push_back(st.slot);
                 return out;
             })
        .def("relative_states", &state_names)
        .def("is_safe", [](const World& w) { return is_safe(w); })
        .def("set_slot_assignment",
             [](World& w, const std::vector<int>& slots) { set_slot_assignment(w, slots); },
             py::arg("slots"))
        .def("randomize_states",
             [](World& w, std::uint64_t seed) {
                 Rng rng = make_rng(seed, 0);
                 randomize_states(w, rng);
             },
             py::arg("seed"))
        .def("run_round", [](World& w) { run_round(w); })
        .def("run_until_safe",
             [](World& w, long max_rounds, bool record_traces) {
                 return run_until_safe(w, max_rounds, record_traces);
             },
             py::arg("max_rounds") = 200, py::arg("record_traces") = false)
        .def("corrupt_states",
             [](World& w, double fraction, std::uint64_t seed) {
                 Rng rng = make_rng(seed, 0);
                 inject_fault(w, {.kind = FaultSpec::Kind::StateCorruption, .fraction = fraction},
                              rng);
             },
             py::arg("fraction"), py::arg("seed"))
        .def("change_edges",
             [](World& w, int add, int remove, std::uint64_t seed) {
                 Rng rng = make_rng(seed, 0);
                 FaultSpec f;
                 f.kind = FaultSpec::Kind::EdgeChange;
                 f.add_edges = add;
                 f.remove_edges = remove;
                 inject_fault(w, f, rng);
             },
             py::arg("add"), py::arg("remove"), py::arg("seed"))
        .def("churn",
             [](World& w, int add, int remove, std::uint64_t seed) {
                 Rng rng = make_rng(seed, 0);
                 FaultSpec f;
                 f.kind = FaultSpec::Kind::NodeChurn;
                 f.add_nodes = add;
                 f.remove_nodes = remove;
                 inject_fault(w, f, rng);
             },
             py::arg("add"), py::arg("remove"), py::arg("seed"));

    m.def("only_one_lb", py::overload_cast<double, int>(&analysis::only_one_lb), py::arg("s"),
          py::arg("n"));
    m.def("only_one_lb_rho",
          py::overload_cast<double, const std::vector<double>&>(&analysis::only_one_lb),
          py::arg("s"), py::arg("rho"));
    m.def("q_lb", &analysis::q_lb, py::arg("s"), py::arg("n"));
    m.def("local_bound_eq3", &analysis::local_bound_eq3, py::arg("s"), py::arg("n"));
    m.def("local_bound_from_q", &analysis::local_bound_from_q, py::arg("s"), py::arg("n"));
    m.def("stationary",
          [](double f, double h, double q, double w) {
              return analysis::stationary({.f = f, .h = h, .q = q, .w = w});
          },
          py::arg("f"), py::arg("h"), py::arg("q"), py::arg("w"));
    m.def("chain_s",
          [](double f, double h, double q, double w) {
              return analysis::chain_s({.f = f, .h = h, .q = q, .w = w});
          },
          py::arg("f"), py::arg("h"), py::arg("q"), py::arg("w"));
    m.def("expected_winners_lb", &analysis::expected_winners_lb, py::arg("n_nodes"), py::arg("s"),
          py::arg("n"));
    m.def("expected_winners_lb_compact", &analysis::expected_winners_lb_compact,
          py::arg("n_nodes"), py::arg("s"), py::arg("n"));
    m.def("global_bound", &analysis::global_bound, py::arg("s"), py::arg("n"));
    m.def("expected_retransmissions", &analysis::expected_retransmissions, py::arg("s"),
          py::arg("n"));
    m.def("rounds_for_confidence", &analysis::rounds_for_confidence, py::arg("alpha"),
          py::arg("n_nodes"), py::arg("s"), py::arg("n"));
    m.def("tmax_cdf_bound", &analysis::tmax_cdf_bound, py::arg("k"), py::arg("q"),
          py::arg("n_nodes"));
}
