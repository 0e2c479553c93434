#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sstdma/analysis.hpp"
#include "sstdma/graph_io.hpp"
#include "sstdma/simulator.hpp"

using nlohmann::json;
using namespace sstdma;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file_atomic(out_path, content);
}

struct ScheduledFault {
    long round = 0;
    FaultSpec spec;
};

struct SimulateOptions {
    std::string graph_path;
    int rgg_nodes = 0;
    double rgg_range = 0.1;
    int frame_size = 15;
    int periods = 2;
    std::vector<PeriodRange> partition;
    std::optional<BackoffWindow> backoff;
    std::uint64_t seed = 1;
    long max_rounds = 200;
    std::string out_path, trace_path;
    std::vector<ScheduledFault> faults;
};

FaultSpec parse_fault_spec(const json& f) {
    FaultSpec spec;
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "state_corruption") {
        spec.kind = FaultSpec::Kind::StateCorruption;
        spec.fraction = f.value("fraction", 0.2);
    } else if (kind == "edge_change") {
        spec.kind = FaultSpec::Kind::EdgeChange;
        spec.add_edges = f.value("add", 0);
        spec.remove_edges = f.value("remove", 0);
    } else if (kind == "node_churn") {
        spec.kind = FaultSpec::Kind::NodeChurn;
        spec.add_nodes = f.value("add", 0);
        spec.remove_nodes = f.value("remove", 0);
    } else {
        throw std::invalid_argument("unknown fault kind: " + kind);
    }
    return spec;
}

void apply_config_file(SimulateOptions& opt, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json cfg = json::parse(in);
    if (cfg.contains("graph")) {
        if (cfg["graph"].is_string())
            opt.graph_path = cfg["graph"].get<std::string>();
        else {
            opt.rgg_nodes = cfg["graph"].at("nodes").get<int>();
            opt.rgg_range = cfg["graph"].at("range").get<double>();
        }
    }
    opt.frame_size = cfg.value("frame_size", opt.frame_size);
    opt.periods = cfg.value("periods", opt.periods);
    opt.seed = cfg.value("seed", opt.seed);
    opt.max_rounds = cfg.value("max_rounds", opt.max_rounds);
    opt.out_path = cfg.value("out", opt.out_path);
    opt.trace_path = cfg.value("trace", opt.trace_path);
    if (cfg.contains("priority_partition"))
        for (const auto& r : cfg["priority_partition"])
            opt.partition.push_back({r.at(0).get<int>(), r.at(1).get<int>()});
    if (cfg.contains("backoff"))
        opt.backoff = BackoffWindow{cfg["backoff"].at(0).get<int>(), cfg["backoff"].at(1).get<int>()};
    for (const auto& f : cfg.value("faults", json::array()))
        opt.faults.push_back({f.at("round").get<long>(), parse_fault_spec(f)});
}

json run_result_to_json(const RunResult& res) {
    json j;
    j["converged"] = res.converged;
    j["t_max"] = res.t_max;
    j["rounds_executed"] = res.rounds_executed;
    j["allocation_round"] = res.allocation_round;
    j["winners_per_round"] = res.winners_per_round;
    j["losses_per_round"] = res.losses_per_round;
    double sum = 0;
    long counted = 0;
    for (long r : res.allocation_round)
        if (r >= 0) {
            sum += double(r);
            ++counted;
        }
    j["mean_allocation_round"] = counted ? sum / counted : -1.0;
    return j;
}

int cmd_simulate(const SimulateOptions& opt) {
    InterferenceGraph graph;
    std::vector<std::string> warnings;
    if (!opt.graph_path.empty())
        graph = load_graph_file(opt.graph_path, &warnings);
    else if (opt.rgg_nodes > 0)
        graph = generate_rgg(opt.rgg_nodes, opt.rgg_range, opt.seed);
    else
        throw std::invalid_argument("simulate: provide --graph or --nodes/--range");
    for (const auto& wmsg : warnings) std::cerr << "warning: " << wmsg << "\n";

    const FrameConfig cfg(opt.frame_size, opt.periods, opt.partition, opt.backoff);
    World world = make_world(graph, cfg, opt.seed);

    std::map<long, std::vector<FaultSpec>> schedule;
    for (const auto& f : opt.faults) {
        if (f.round < 0 || f.round > opt.max_rounds)
            throw std::invalid_argument("simulate: fault round outside [0, max_rounds]");
        schedule[f.round].push_back(f.spec);
    }

    const bool record = !opt.trace_path.empty();
    std::vector<RoundTrace> traces;
    json episodes = json::array();
    json summary;

    long boundary = 0;
    bool first_episode = true;
    auto run_episode = [&](long rounds_available) {
        RunResult res = run_until_safe(world, std::max(1L, rounds_available), record);
        if (record)
            for (auto& t : res.traces) traces.push_back(std::move(t));
        json ep = run_result_to_json(res);
        ep["start_round"] = boundary;
        episodes.push_back(ep);
        if (first_episode) {
            summary = run_result_to_json(res);
            first_episode = false;
        }
        boundary += res.rounds_executed;
        return res;
    };

    if (schedule.empty()) {
        run_episode(opt.max_rounds);
    } else {
        for (auto& [fault_round, specs] : schedule) {
            if (fault_round > boundary) run_episode(fault_round - boundary);
            // idle out the remaining rounds so the fault lands where asked
            while (boundary < fault_round) {
                RoundTrace t = run_round(world);
                if (record) traces.push_back(std::move(t));
                ++boundary;
            }
            Rng fault_rng = make_rng(opt.seed, 0xF000000ULL + std::uint64_t(fault_round));
            for (const auto& spec : specs) inject_fault(world, spec, fault_rng);
        }
        if (boundary < opt.max_rounds) run_episode(opt.max_rounds - boundary);
    }

    summary["episodes"] = episodes;
    summary["final_safe"] = is_safe(world);
    int exhausted = 0;
    for (int i = 0; i < world.graph.node_count; ++i) exhausted += node_exhaustion_safe(world, i);
    summary["exhausted_nodes"] = exhausted;
    summary["params"] = {{"nodes", world.graph.node_count}, {"frame_size", opt.frame_size},
                         {"periods", opt.periods},          {"seed", opt.seed},
                         {"max_rounds", opt.max_rounds}};

    if (record) write_file_atomic(opt.trace_path, trace_to_csv(traces));
    emit(summary.dump(2) + "\n", opt.out_path);
    if (!opt.out_path.empty())
        std::cout << (summary["final_safe"].get<bool>() ? "converged" : "not converged")
                  << ", t_max=" << summary["t_max"] << "\n";
    return summary["final_safe"].get<bool>() ? 0 : 1;
}

int cmd_bounds(double s, int n, long nodes, double alpha, const std::string& out_path) {
    using namespace analysis;
    std::ostringstream csv;
    csv << "s,n,nodes,alpha,only_one_lb,q_lb,local_bound_eq3,local_bound_from_q,"
           "global_bound,expected_retransmissions,rounds_for_confidence\n";
    csv << fmt(s) << ',' << n << ',' << nodes << ',' << fmt(alpha) << ','
        << fmt(only_one_lb(s, n)) << ',' << fmt(q_lb(s, n)) << ','
        << fmt(local_bound_eq3(s, n)) << ',' << fmt(local_bound_from_q(s, n)) << ','
        << fmt(global_bound(s, n)) << ',' << fmt(expected_retransmissions(s, n)) << ','
        << fmt(rounds_for_confidence(alpha, nodes, s, n)) << '\n';
    emit(csv.str(), out_path);
    if (!out_path.empty()) std::cout << csv.str();
    return 0;
}

// One full convergence experiment per seed, reported as the empirical
// distribution of rounds-to-safety next to the closed-form lower bound
// on P(t_max < k).
int cmd_fig4(int nodes, int seeds, int T, int n, double range, long max_rounds,
             double q_bound, int threads, const std::string& out_path) {
    if (range <= 0) range = 0.1 / std::sqrt(double(nodes) / 500.0);
    const FrameConfig cfg(T, n);

    std::vector<long> t_max(seeds, -1);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < seeds;) {
            const auto g = generate_rgg(nodes, range, std::uint64_t(i));
            World w = make_world(g, cfg, std::uint64_t(i));
            const auto res = run_until_safe(w, max_rounds);
            t_max[i] = res.converged ? res.t_max : -1;
        }
    };
    if (threads < 1) threads = static_cast<int>(std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, std::min(threads, seeds)); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    long k_cap = 2;
    int converged = 0;
    for (long t : t_max) {
        if (t < 0) continue;
        ++converged;
        k_cap = std::max(k_cap, t + 2);
    }
    k_cap = std::max<long>(
        k_cap, long(std::ceil(analysis::rounds_for_confidence(0.01, nodes, 1.0, n))) + 5);

    std::ostringstream csv;
    csv << "k,empirical,bound\n";
    for (long k = 1; k <= k_cap; ++k) {
        int below = 0;
        for (long t : t_max) below += (t >= 0 && t < k);
        csv << k << ',' << fmt(double(below) / seeds) << ','
            << fmt(analysis::tmax_cdf_bound(double(k), q_bound, nodes)) << '\n';
    }
    emit(csv.str(), out_path);

    if (!out_path.empty()) {
        json meta;
        meta["nodes"] = nodes;
        meta["seeds"] = seeds;
        meta["range"] = range;
        meta["frame_size"] = T;
        meta["periods"] = n;
        meta["max_rounds"] = max_rounds;
        meta["q_bound"] = q_bound;
        meta["converged_runs"] = converged;
        meta["t_max"] = t_max;
        write_file_atomic(out_path + ".meta.json", meta.dump(2) + "\n");
        std::cout << "fig4: " << converged << "/" << seeds << " runs converged, table in "
                  << out_path << "\n";
    }
    return converged == seeds ? 0 : 1;
}

int cmd_fig6(double alpha, double s, int n_min, int n_max, const std::vector<long>& node_counts,
             const std::string& out_path) {
    std::ostringstream csv;
    csv << "n,nodes,k\n";
    for (int n = n_min; n <= n_max; ++n)
        for (long N : node_counts)
            csv << n << ',' << N << ',' << fmt(analysis::rounds_for_confidence(alpha, N, s, n))
                << '\n';
    emit(csv.str(), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-stabilizing TDMA slot allocation: simulator and convergence bounds"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-graph", "Generate a random geometric interference graph");
    int gg_nodes = 500;
    double gg_range = 0.1;
    std::uint64_t gg_seed = 1;
    std::string gg_out;
    gen->add_option("--nodes", gg_nodes, "node count")->required();
    gen->add_option("--range", gg_range, "interference range on the unit square")->required();
    gen->add_option("--seed", gg_seed, "RNG seed");
    gen->add_option("--out", gg_out, "output path (stdout when omitted)");

    auto* sim = app.add_subcommand("simulate", "Run the protocol until the network is safe");
    SimulateOptions opt;
    std::string config_path;
    std::vector<std::string> corrupt_specs;
    sim->add_option("--config", config_path, "JSON config file");
    sim->add_option("--graph", opt.graph_path, "interference graph document");
    sim->add_option("--nodes", opt.rgg_nodes, "generate an RGG with this many nodes");
    sim->add_option("--range", opt.rgg_range, "RGG interference range");
    sim->add_option("-T,--frame-size", opt.frame_size, "timeslots per frame");
    sim->add_option("-n,--periods", opt.periods, "listening/signaling periods per timeslot");
    sim->add_option("--seed", opt.seed, "master seed");
    sim->add_option("--max-rounds", opt.max_rounds, "round budget");
    sim->add_option("--trace", opt.trace_path, "write an event trace CSV here");
    sim->add_option("--out", opt.out_path, "write the run summary JSON here");
    sim->add_option("--corrupt", corrupt_specs,
                    "inject state corruption, format round:fraction (repeatable)");

    auto* bnd = app.add_subcommand("bounds", "Tabulate the closed-form convergence bounds");
    double b_s = 1.0, b_alpha = 0.01;
    int b_n = 2;
    long b_nodes = 500;
    std::string b_out;
    bnd->add_option("--s", b_s, "load ratio d/T");
    bnd->add_option("-n,--periods", b_n, "listening/signaling periods");
    bnd->add_option("--nodes", b_nodes, "network size");
    bnd->add_option("--alpha", b_alpha, "failure probability");
    bnd->add_option("--out", b_out, "output path (stdout when omitted)");

    auto* f4 = app.add_subcommand("fig4", "Empirical rounds-to-safety CDF vs the closed-form bound");
    int f4_nodes = 500, f4_seeds = 100, f4_T = 15, f4_n = 2, f4_threads = 0;
    double f4_range = -1.0, f4_q = 0.25;
    long f4_rounds = 200;
    std::string f4_out;
    f4->add_option("--nodes", f4_nodes, "network size (500/2500/5000 in the reference runs)");
    f4->add_option("--seeds", f4_seeds, "number of independent runs");
    f4->add_option("-T,--frame-size", f4_T, "timeslots per frame");
    f4->add_option("-n,--periods", f4_n, "listening/signaling periods");
    f4->add_option("--range", f4_range, "RGG range; default 0.1/sqrt(nodes/500)");
    f4->add_option("--max-rounds", f4_rounds, "round budget per run");
    f4->add_option("--q", f4_q, "per-round win probability used in the bound column");
    f4->add_option("--threads", f4_threads, "worker threads (0 = hardware)");
    f4->add_option("--out", f4_out, "output CSV path (stdout when omitted)");

    auto* f6 = app.add_subcommand("fig6", "Grid of confidence round counts k(n, N)");
    double f6_alpha = 0.01, f6_s = 1.0;
    int f6_nmin = 2, f6_nmax = 12;
    std::vector<long> f6_nodes{100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000, 100000};
    std::string f6_out;
    f6->add_option("--alpha", f6_alpha, "failure probability");
    f6->add_option("--s", f6_s, "load ratio d/T");
    f6->add_option("--n-min", f6_nmin, "smallest period count");
    f6->add_option("--n-max", f6_nmax, "largest period count");
    f6->add_option("--nodes", f6_nodes, "network sizes for the grid")->delimiter(',');
    f6->add_option("--out", f6_out, "output CSV path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const auto g = generate_rgg(gg_nodes, gg_range, gg_seed);
            const auto stats = graph_stats(g);
            if (gg_out.empty()) {
                std::cout << save_graph_text(g) << "\n";
            } else {
                save_graph_file(g, gg_out);
                std::cout << "graph: " << g.node_count << " nodes, " << stats.edge_count
                          << " edges, mean degree " << fmt(stats.mean_degree) << " -> " << gg_out
                          << "\n";
            }
            return 0;
        }
        if (sim->parsed()) {
            if (!config_path.empty()) apply_config_file(opt, config_path);
            for (const auto& spec : corrupt_specs) {
                const auto colon = spec.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--corrupt expects round:fraction");
                ScheduledFault f;
                f.round = std::stol(spec.substr(0, colon));
                f.spec.kind = FaultSpec::Kind::StateCorruption;
                f.spec.fraction = std::stod(spec.substr(colon + 1));
                opt.faults.push_back(f);
            }
            return cmd_simulate(opt);
        }
        if (bnd->parsed()) return cmd_bounds(b_s, b_n, b_nodes, b_alpha, b_out);
        if (f4->parsed())
            return cmd_fig4(f4_nodes, f4_seeds, f4_T, f4_n, f4_range, f4_rounds, f4_q, f4_threads,
                            f4_out);
        if (f6->parsed()) return cmd_fig6(f6_alpha, f6_s, f6_nmin, f6_nmax, f6_nodes, f6_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
