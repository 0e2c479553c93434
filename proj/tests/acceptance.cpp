// Acceptance suite: every release gate in one binary, one verdict line each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sstdma/analysis.hpp"
#include "sstdma/simulator.hpp"

using namespace sstdma;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void note(const std::string& line) { std::printf("      %s\n", line.c_str()); }

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

InterferenceGraph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return InterferenceGraph::from_edges(n, edges);
}

std::optional<std::vector<int>> greedy_coloring(const InterferenceGraph& g, int colors,
                                                bool distance2) {
    std::vector<int> color(g.node_count, kNoSlot);
    for (int i = 0; i < g.node_count; ++i) {
        std::vector<char> used(colors, 0);
        for (int j : g.adjacency[i]) {
            if (color[j] != kNoSlot) used[color[j]] = 1;
            if (distance2)
                for (int k : g.adjacency[j])
                    if (k != i && color[k] != kNoSlot) used[color[k]] = 1;
        }
        int c = 0;
        while (c < colors && used[c]) ++c;
        if (c == colors) return std::nullopt;
        color[i] = c;
    }
    return color;
}

InterferenceGraph rgg_with_max_degree(int nodes, double range, int degree_cap,
                                      std::uint64_t base_seed) {
    for (std::uint64_t seed = base_seed;; ++seed) {
        auto g = generate_rgg(nodes, range, seed);
        if (graph_stats(g).max_degree <= degree_cap) return g;
    }
}

// ---------------------------------------------------------------------------

void criterion1_closure() {
    Timer timer;
    const FrameConfig cfg(15, 2);
    int configs = 0;
    long violations = 0, collisions = 0;
    for (std::uint64_t seed = 0; configs < 20 && seed < 400; ++seed) {
        const auto g = generate_rgg(100, 0.1, seed);
        const auto coloring = greedy_coloring(g, cfg.frame_size, true);
        if (!coloring) continue;
        ++configs;
        World w = make_world(g, cfg, seed + 9000);
        set_slot_assignment(w, *coloring);
        if (!is_safe(w)) ++violations;
        for (int round = 0; round < 100; ++round) {
            const auto trace = run_round(w);
            if (!is_safe(w)) ++violations;
            for (const auto& slot : trace.slots) collisions += slot.collided.size();
        }
    }
    const double secs = timer.seconds();
    const bool pass = configs == 20 && violations == 0 && collisions == 0 && secs < 10.0;
    report(1, "closure", pass,
           fmt("%g safe configs x 100 rounds: %g violations, ", configs, double(violations)) +
               fmt("%g collisions, %.1fs", double(collisions), secs));
}

void criterion2_cleanup() {
    Timer timer;
    const FrameConfig cfg(10, 2);
    int states_checked = 0;
    long dirty_nodes = 0;
    for (int gi = 0; gi < 20; ++gi) {
        const auto g = rgg_with_max_degree(40, 0.18, cfg.frame_size - 1, std::uint64_t(gi) * 1000);
        for (int ci = 0; ci < 5; ++ci) {
            World w = make_world(g, cfg, std::uint64_t(gi) * 100 + ci);
            Rng corrupt = make_rng(std::uint64_t(gi) * 17 + ci, 4242);
            randomize_states(w, corrupt);
            run_round(w);
            run_round(w);
            for (auto rel : classify_all(w))
                if (rel == RelativeState::Unstable) ++dirty_nodes;
            ++states_checked;
        }
    }
    const double secs = timer.seconds();
    const bool pass = states_checked == 100 && dirty_nodes == 0 && secs < 10.0;
    report(2, "cleanup within two rounds", pass,
           fmt("%g corrupted states, %g inconsistent nodes after 2 rounds, %.1fs",
               double(states_checked), double(dirty_nodes), secs));
}

void criterion3_network_convergence() {
    Timer timer;
    const int seeds = 100, nodes = 500;
    const FrameConfig cfg(15, 2);
    const long max_rounds = 200;

    std::vector<long> t_max(seeds, -1);
    std::vector<double> alloc_sum(seeds, 0);
    std::vector<long> alloc_count(seeds, 0), alloc_sq(seeds, 0);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < seeds;) {
            const auto g = generate_rgg(nodes, 0.1, std::uint64_t(i));
            World w = make_world(g, cfg, std::uint64_t(i));
            const auto res = run_until_safe(w, max_rounds);
            t_max[i] = res.converged ? res.t_max : -1;
            for (long r : res.allocation_round)
                if (r >= 0) {
                    alloc_sum[i] += double(r);
                    alloc_sq[i] += r * r;
                    alloc_count[i] += 1;
                }
        }
    };
    std::thread t1(worker), t2(worker);
    t1.join();
    t2.join();

    int converged = 0;
    long max_observed = 0;
    double sum = 0, sq = 0;
    long count = 0;
    for (int i = 0; i < seeds; ++i) {
        if (t_max[i] >= 0) {
            ++converged;
            max_observed = std::max(max_observed, t_max[i]);
        }
        sum += alloc_sum[i];
        sq += double(alloc_sq[i]);
        count += alloc_count[i];
    }
    const bool all_converged = converged == seeds;

    const double mean_alloc = sum / double(count);
    const double var = sq / double(count) - mean_alloc * mean_alloc;
    const double se = std::sqrt(std::max(0.0, var) / double(count));
    const double local_limit = analysis::global_bound(1.0, 2) + 3 * se;
    const bool mean_ok = mean_alloc <= local_limit;

    bool cdf_ok = true;
    long worst_k = 0;
    const long k_cap = std::max<long>(max_observed + 3, 45);
    for (long k = 1; k <= k_cap; ++k) {
        int below = 0;
        for (long t : t_max) below += (t >= 0 && t < k);
        const double empirical = double(below) / seeds;
        const double bound = analysis::tmax_cdf_bound(double(k), 0.25, nodes);
        const double sigma = std::sqrt(bound * (1 - bound) / seeds);
        if (empirical < bound - 3 * sigma) {
            cdf_ok = false;
            worst_k = k;
        }
    }
    const double secs = timer.seconds();
    const bool pass = all_converged && mean_ok && cdf_ok && secs < 300.0;
    std::string detail = fmt("%g/100 converged, mean alloc round %.3f <= %.3f", double(converged),
                             mean_alloc, local_limit);
    detail += cdf_ok ? ", CDF above bound at every k" : fmt(", CDF below bound at k=%g", double(worst_k));
    detail += fmt(", max t_max %g, %.1fs", double(max_observed), secs);
    report(3, "network convergence", pass, detail);
}

void criterion4_local_bound() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int d : {2, 4, 8}) {
        for (int n : {2, 4}) {
            const auto g = complete_graph(d + 1);
            const FrameConfig cfg(d + 1, n);
            const int runs = 2000;
            double sum = 0, sq = 0;
            for (int r = 0; r < runs; ++r) {
                World w = make_world(g, cfg, std::uint64_t(r) + std::uint64_t(d) * 1000000 +
                                                 std::uint64_t(n) * 100000000);
                const auto res = run_until_safe(w, 500);
                if (!res.converged || res.allocation_round[0] < 1) {
                    pass = false;
                    continue;
                }
                const double rounds = double(res.allocation_round[0]);
                sum += rounds;
                sq += rounds * rounds;
            }
            const double mean = sum / runs;
            const double se = std::sqrt(std::max(0.0, sq / runs - mean * mean) / runs);
            const double limit = analysis::local_bound_from_q(double(d) / (d + 1), n) + 3 * se;
            if (mean > limit) pass = false;
            detail += fmt("d=%g/n=%g: %.2f", double(d), double(n), mean) + fmt("<=%.2f ", limit);
        }
    }
    const double secs = timer.seconds();
    pass = pass && secs < 120.0;
    report(4, "local convergence bound", pass, detail + fmt("(%.1fs)", secs));
}

void criterion5_obtaining_vs_ready() {
    Timer timer;
    const auto g = complete_graph(4);
    const FrameConfig cfg(5, 2);
    long ready_seen = 0, ready_won = 0;
    long contested_seen = 0, contested_won = 0;
    long obtaining_seen = 0, obtaining_won = 0;
    for (int run = 0; obtaining_seen < 10000 || ready_seen < 10000; ++run) {
        World w = make_world(g, cfg, 5000000 + std::uint64_t(run));
        for (int round = 0; round < 12; ++round) {
            const auto trace = run_round(w);
            for (int i = 0; i < 4; ++i) {
                const bool won = trace.rel_after[i] == RelativeState::Allocated;
                if (trace.rel_before[i] == RelativeState::Ready) {
                    ready_seen++;
                    ready_won += won;
                    if (trace.m_samples[i] >= 1) {
                        contested_seen++;
                        contested_won += won;
                    }
                } else if (trace.rel_before[i] == RelativeState::Obtaining) {
                    obtaining_seen++;
                    obtaining_won += won;
                }
            }
            if (is_safe(w)) break;
        }
    }
    const double q_hat = double(ready_won) / double(ready_seen);
    const double w_hat = double(obtaining_won) / double(obtaining_seen);
    const double se = std::sqrt(q_hat * (1 - q_hat) / double(ready_seen) +
                                w_hat * (1 - w_hat) / double(obtaining_seen));
    const bool pass = w_hat >= q_hat - 3 * se;
    report(5, "obtaining converts at least as often as ready", pass,
           fmt("w=%.4f vs q=%.4f - 3se", w_hat, q_hat) +
               fmt(" (n_obt=%g, n_rdy=%g, %.1fs)", double(obtaining_seen), double(ready_seen),
                   timer.seconds()));
    // like-for-like companion: ready transitions with at least one rival in
    // the chosen slot, the competition regime the w >= q comparison is about
    const double qc_hat = double(contested_won) / double(contested_seen);
    const double se_c = std::sqrt(qc_hat * (1 - qc_hat) / double(contested_seen) +
                                  w_hat * (1 - w_hat) / double(obtaining_seen));
    note(fmt("matched competition: w=%.4f vs contested q=%.4f - 3se=%.4f", w_hat, qc_hat,
             qc_hat - 3 * se_c) +
         (w_hat >= qc_hat - 3 * se_c ? " -> holds" : " -> fails"));
}

void criterion6_matching_expectation() {
    Timer timer;
    const FrameConfig cfg(8, 2);
    bool pass = true;
    int nodes_checked = 0;
    double worst_margin = 1e9;
    for (int gi = 0; gi < 2; ++gi) {
        const auto g = rgg_with_max_degree(24, 0.22, cfg.frame_size - 1, 600000 + gi * 1000);
        const int N = g.node_count;
        std::vector<double> sum(N, 0), sq(N, 0);
        std::vector<long> count(N, 0);
        for (int run = 0; run < 1000; ++run) {
            World w = make_world(g, cfg, 700000 + gi * 100000 + run);
            for (int round = 0; round < 8; ++round) {
                const auto trace = run_round(w);
                for (int i = 0; i < N; ++i) {
                    if (trace.m_samples[i] < 0) continue;
                    sum[i] += trace.m_samples[i];
                    sq[i] += double(trace.m_samples[i]) * trace.m_samples[i];
                    count[i] += 1;
                }
                if (is_safe(w)) break;
            }
        }
        for (int i = 0; i < N; ++i) {
            if (count[i] < 1000) continue;
            const double mean = sum[i] / count[i];
            const double se = std::sqrt(std::max(0.0, sq[i] / count[i] - mean * mean) / count[i]);
            const double limit = double(g.degree(i)) / cfg.frame_size + 3 * se;
            worst_margin = std::min(worst_margin, limit - mean);
            if (mean > limit) pass = false;
            ++nodes_checked;
        }
    }
    report(6, "matching count expectation", pass,
           fmt("%g nodes, worst margin %.4f, %.1fs", double(nodes_checked), worst_margin,
               timer.seconds()));
}

void criterion7_analysis_goldens() {
    bool pass = true;
    std::string detail;

    if (analysis::q_lb(1.0, 2) != 0.25) {
        pass = false;
        detail += "q_lb(1,2) != 0.25; ";
    }
    if (analysis::local_bound_eq3(1.0, 2) != 4.0) {
        pass = false;
        detail += "local_bound_eq3(1,2) != 4; ";
    }

    Rng rng = make_rng(777, 0);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        analysis::ChainParams p;
        p.f = uniform01(rng);
        p.q = uniform01(rng) * (1.0 - p.f);
        p.h = uniform01(rng);
        p.w = uniform01(rng) * (1.0 - p.h);
        if (p.q * p.h + p.q * p.w + p.f * p.w + p.h + p.w + p.f <= 0) continue;
        const auto pi = analysis::stationary(p);
        const double r0 = pi[0] * (1 - p.f - p.q) + pi[1] * p.h + pi[2];
        const double r1 = pi[0] * p.f + pi[1] * (1 - p.h - p.w);
        const double r2 = pi[0] * p.q + pi[1] * p.w;
        worst = std::max({worst, std::abs(r0 - pi[0]), std::abs(r1 - pi[1]), std::abs(r2 - pi[2])});
    }
    if (worst > 1e-12) {
        pass = false;
        detail += fmt("stationary residual %.2e; ", worst);
    }

    const double k = analysis::rounds_for_confidence(0.01, 10000, 1.0, 3);
    if (!(k >= 34.0 && k <= 36.0)) {
        pass = false;
        detail += fmt("k(0.01,1e4,1,3)=%.3f outside [34,36]; ", k);
    }
    report(7, "analysis golden values", pass,
           detail.empty() ? fmt("exact goldens, stationary residual %.1e, k=%.2f", worst, k)
                          : detail);
}

void criterion8_exact_small_instance() {
    Timer timer;
    const auto g = complete_graph(2);
    const FrameConfig cfg(2, 2);
    const int runs = 100000;
    double sum = 0;
    for (int r = 0; r < runs; ++r) {
        World w = make_world(g, cfg, 300000000 + std::uint64_t(r));
        const auto res = run_until_safe(w, 500);
        if (!res.converged) {
            report(8, "exact two-node instance", false, "a run failed to converge");
            return;
        }
        sum += double(res.t_max);
    }
    // enumerated chain: half the runs finish in one round, the other half
    // resolve geometrically at rate 1/2 with the loser one round behind
    double oracle = 0.5;
    double p_reach = 0.5;
    for (int resolve = 1; p_reach > 1e-15; ++resolve) {
        oracle += p_reach * 0.5 * (resolve + 1);
        p_reach *= 0.5;
    }
    const double mean = sum / runs;
    const bool pass = std::abs(oracle - 2.0) < 1e-12 && std::abs(mean - oracle) <= 0.03;
    report(8, "exact two-node instance", pass,
           fmt("mean t_max %.4f vs oracle %.1f +- 0.03 over 1e5 runs, %.1fs", mean, oracle,
               timer.seconds()));
}

void criterion9_fault_recovery() {
    Timer timer;
    const FrameConfig cfg(15, 2);
    int recovered = 0;
    long effective_sum = 0;
    std::vector<long> re_tmax;
    for (int seed = 0; seed < 50; ++seed) {
        const auto g = generate_rgg(100, 0.1, 40000 + std::uint64_t(seed));
        World w = make_world(g, cfg, 40000 + std::uint64_t(seed));
        if (!run_until_safe(w, 200).converged) continue;
        Rng rng = make_rng(12000 + std::uint64_t(seed), 0);
        inject_fault(w, {.kind = FaultSpec::Kind::StateCorruption, .fraction = 0.2}, rng);
        const auto rel = classify_all(w);
        for (int i = 0; i < g.node_count; ++i)
            effective_sum += rel[i] != RelativeState::Allocated && !node_exhaustion_safe(w, i);
        const auto res = run_until_safe(w, 200);
        if (res.converged) {
            ++recovered;
            re_tmax.push_back(res.t_max);
        }
    }
    const bool pass = recovered == 50;
    std::sort(re_tmax.begin(), re_tmax.end());
    const double mean_eff = double(effective_sum) / 50.0;
    std::string detail = fmt("%g/50 recovered, %.1fs", double(recovered), timer.seconds());
    report(9, "fault recovery", pass, detail);
    if (!re_tmax.empty()) {
        double mean_t = 0;
        for (long t : re_tmax) mean_t += double(t);
        mean_t /= double(re_tmax.size());
        const long n_eff = std::lround(mean_eff);
        const double k99 = analysis::rounds_for_confidence(0.01, std::max(1L, n_eff), 1.0, 2);
        int below = 0;
        for (long t : re_tmax) below += t < long(std::ceil(k99));
        note(fmt("report: mean effective competitors %.1f, mean re-convergence %.2f rounds, ",
                 mean_eff, mean_t) +
             fmt("max %g", double(re_tmax.back())));
        note(fmt("report: at k=%.1f (99%% bound for N=%g) empirical fraction %.2f vs bound 0.99",
                 k99, double(n_eff), double(below) / double(re_tmax.size())));
    }
}

}  // namespace

// Runs every criterion by default; `--only 5` / `--skip 5` narrow the set
// (comma-separated ids), so the one documented-red criterion can live in its
// own test entry without masking the rest.
int main(int argc, char** argv) {
    std::vector<bool> enabled(10, true);
    for (int a = 1; a + 1 < argc; a += 2) {
        const std::string flag = argv[a];
        std::vector<bool> picked(10, false);
        std::string ids = argv[a + 1];
        for (std::size_t pos = 0; pos < ids.size();) {
            const int id = std::atoi(ids.c_str() + pos);
            if (id >= 1 && id <= 9) picked[id] = true;
            pos = ids.find(',', pos);
            if (pos == std::string::npos) break;
            ++pos;
        }
        for (int id = 1; id <= 9; ++id)
            enabled[id] = (flag == "--only") ? picked[id] : (enabled[id] && !picked[id]);
    }

    if (enabled[1]) criterion1_closure();
    if (enabled[2]) criterion2_cleanup();
    if (enabled[3]) criterion3_network_convergence();
    if (enabled[4]) criterion4_local_bound();
    if (enabled[5]) criterion5_obtaining_vs_ready();
    if (enabled[6]) criterion6_matching_expectation();
    if (enabled[7]) criterion7_analysis_goldens();
    if (enabled[8]) criterion8_exact_small_instance();
    if (enabled[9]) criterion9_fault_recovery();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
