#include "sstdma/simulator.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sstdma {

World make_world(const InterferenceGraph& g, const FrameConfig& cfg, std::uint64_t master_seed) {
    g.validate();
    cfg.validate();
    World w;
    w.graph = g;
    w.cfg = cfg;
    w.master_seed = master_seed;
    w.states.reserve(g.node_count);
    w.stream_ids.reserve(g.node_count);
    for (int i = 0; i < g.node_count; ++i) {
        const std::uint64_t sid = w.next_stream_id++;
        w.stream_ids.push_back(sid);
        NodeState st(cfg.frame_size, substream_seed(master_seed, sid));
        w.states.push_back(std::move(st));
    }
    return w;
}

static void corrupt_node(NodeState& st, const FrameConfig& cfg, Rng& rng) {
    st.slot = static_cast<int>(uniform_int(rng, -1, cfg.frame_size - 1));
    for (int t = 0; t < cfg.frame_size; ++t) st.unused[t] = static_cast<std::uint8_t>(uniform_int(rng, 0, 1));
    st.signal = uniform_int(rng, 0, 1) != 0;
    st.backoff_count = cfg.backoff ? static_cast<int>(uniform_int(rng, 0, 3 * cfg.frame_size)) : 0;
}

void randomize_states(World& w, Rng& rng) {
    for (auto& st : w.states) corrupt_node(st, w.cfg, rng);
}

void set_slot_assignment(World& w, const std::vector<int>& slots) {
    if (static_cast<int>(slots.size()) != w.graph.node_count)
        throw std::invalid_argument("set_slot_assignment: one slot per node required");
    const int T = w.cfg.frame_size;
    for (int i = 0; i < w.graph.node_count; ++i) {
        const int s = slots[i];
        if (s != kNoSlot && (s < 0 || s >= T))
            throw std::invalid_argument("set_slot_assignment: slot out of range");
        w.states[i].slot = s;
        w.states[i].signal = false;
        w.states[i].backoff_count = 0;
    }
    for (int i = 0; i < w.graph.node_count; ++i) {
        std::vector<std::uint8_t> claimed(T, 0);
        for (int j : w.graph.adjacency[i])
            if (slots[j] != kNoSlot) claimed[slots[j]] = 1;
        for (int t = 0; t < T; ++t)
            w.states[i].unused[t] = (t == slots[i]) ? 1 : static_cast<std::uint8_t>(!claimed[t]);
    }
}

std::vector<RelativeState> classify_all(const World& w) {
    std::vector<RelativeState> out(w.graph.node_count);
    std::vector<const NodeState*> nbs;
    for (int i = 0; i < w.graph.node_count; ++i) {
        nbs.clear();
        for (int j : w.graph.adjacency[i]) nbs.push_back(&w.states[j]);
        out[i] = protocol::relative_state(w.states[i], nbs);
    }
    return out;
}

bool node_exhaustion_safe(const World& w, int node) {
    if (w.states[node].slot != kNoSlot) return false;
    std::vector<std::uint8_t> covered(w.cfg.frame_size, 0);
    for (int j : w.graph.adjacency[node]) {
        const int s = w.states[j].slot;
        if (s != kNoSlot) covered[s] = 1;
    }
    return std::all_of(covered.begin(), covered.end(), [](std::uint8_t c) { return c != 0; });
}

bool is_safe(const World& w) {
    for (int i = 0; i < w.graph.node_count; ++i) {
        const int s = w.states[i].slot;
        if (s != kNoSlot) {
            for (int j : w.graph.adjacency[i])
                if (w.states[j].slot == s) return false;
        } else if (!node_exhaustion_safe(w, i)) {
            return false;
        }
    }
    return true;
}

RoundTrace run_round(World& w) {
    const int N = w.graph.node_count;
    const int T = w.cfg.frame_size;
    const int n = w.cfg.periods;

    RoundTrace trace;
    trace.round_index = w.round_index;
    trace.slots.resize(T);
    trace.rel_before = classify_all(w);
    trace.m_samples.assign(N, -1);

    std::vector<int> chosen_period(N, 0);
    std::vector<std::uint8_t> active(N, 0), beaconed(N, 0), round_competitor(N, 0);

    for (int t = 0; t < T; ++t) {
        SlotTrace& slot = trace.slots[t];

        // (a) timeslot event on every node; at t == 0 slotless nodes pick.
        std::vector<std::uint8_t> pool_empty(N, 0);
        if (t == 0) {
            for (int i = 0; i < N; ++i)
                if (w.states[i].slot == kNoSlot)
                    pool_empty[i] = static_cast<std::uint8_t>(w.states[i].unused_slots().empty());
        }
        std::vector<int> competitors;
        for (int i = 0; i < N; ++i) {
            const bool was_slotless = w.states[i].slot == kNoSlot;
            if (protocol::on_timeslot_start(w.states[i], t, w.cfg) == TimeslotAction::EnterCompetition)
                competitors.push_back(i);
            if (t == 0 && was_slotless && w.states[i].slot == kNoSlot && pool_empty[i])
                trace.busy_channel.push_back(i);
        }
        slot.competitors = competitors;

        if (t == 0) {
            for (int i = 0; i < N; ++i) {
                const int s = w.states[i].slot;
                if (s == kNoSlot) continue;
                int m = 0;
                for (int j : w.graph.adjacency[i])
                    if (w.states[j].slot == s) ++m;
                trace.m_samples[i] = m;
            }
        }

        // (b) every competitor draws its listening/signaling period.
        for (int i : competitors) {
            chosen_period[i] = protocol::choose_signal_period(w.states[i].priority_class, w.cfg, w.states[i].rng);
            w.states[i].signal = true;
            active[i] = 1;
            round_competitor[i] = 1;
        }

        // (c) periods in order: beacons, then carrier sensing at all neighbors.
        for (int k = 1; k <= n; ++k) {
            std::vector<int> tx;
            for (int i : competitors)
                if (active[i] && chosen_period[i] == k) tx.push_back(i);
            if (tx.empty()) continue;

            std::set<int> sensed;
            for (int i : tx) {
                beaconed[i] = 1;
                w.states[i].signal = false;  // broadcast attempt completed
                slot.beacons.emplace_back(k, i);
                for (int j : w.graph.adjacency[i]) sensed.insert(j);
            }
            for (int j : sensed) {
                const bool held_slot = w.states[j].slot == t;
                protocol::on_carrier_sense(w.states[j], t, beaconed[j] != 0);
                slot.senses.emplace_back(k, j);
                if (held_slot && w.states[j].slot == kNoSlot) {
                    active[j] = 0;
                    slot.losses.emplace_back(k, j);
                }
            }
        }

        // (d) everyone whose beacon went unchallenged by an earlier one sends DATA.
        std::vector<std::uint8_t> is_data_tx(N, 0);
        for (int i : competitors) {
            if (beaconed[i]) {
                is_data_tx[i] = 1;
                slot.data.emplace_back(chosen_period[i], i);
            }
        }

        // (e) receiver outcome: delivery needs exactly one transmitting neighbor.
        if (!slot.data.empty()) {
            for (int j = 0; j < N; ++j) {
                if (is_data_tx[j]) continue;
                int nb_tx = 0;
                for (int i : w.graph.adjacency[j])
                    if (is_data_tx[i] && ++nb_tx > 1) break;
                if (nb_tx == 1)
                    slot.delivered.push_back(j);
                else if (nb_tx > 1)
                    slot.collided.push_back(j);
            }
        }

        for (int i : competitors) {
            active[i] = 0;
            beaconed[i] = 0;
        }
    }

    w.round_index += 1;
    trace.rel_after = classify_all(w);

    for (int i = 0; i < N; ++i) {
        if (trace.rel_after[i] == RelativeState::Allocated && trace.rel_before[i] != RelativeState::Allocated)
            trace.winners += 1;
        if (round_competitor[i] && trace.rel_after[i] != RelativeState::Allocated) trace.losses += 1;
    }
    return trace;
}

RoundMetrics measure_round_metrics(const RoundTrace& trace) {
    RoundMetrics m;
    m.m_samples = trace.m_samples;
    std::vector<std::uint8_t> competed(trace.rel_after.size(), 0);
    for (const auto& slot : trace.slots)
        for (int i : slot.competitors) competed[i] = 1;
    for (std::size_t i = 0; i < trace.rel_after.size(); ++i) {
        if (trace.rel_after[i] == RelativeState::Allocated && trace.rel_before[i] != RelativeState::Allocated)
            m.winners += 1;
        if (competed[i] && trace.rel_after[i] != RelativeState::Allocated) m.losses += 1;
    }
    return m;
}

RunResult run_until_safe(World& w, long max_rounds, bool record_traces) {
    if (max_rounds < 1) throw std::invalid_argument("run_until_safe: max_rounds must be >= 1");
    const int N = w.graph.node_count;

    RunResult res;
    res.allocation_round.assign(N, -1);
    std::vector<long> settled_since(N, -1);

    const long start_round = w.round_index;
    auto update_settled = [&](long boundary) {
        const auto rel = classify_all(w);
        for (int i = 0; i < N; ++i) {
            const bool settled =
                rel[i] == RelativeState::Allocated || node_exhaustion_safe(w, i);
            if (!settled)
                settled_since[i] = -1;
            else if (settled_since[i] < 0)
                settled_since[i] = boundary;
        }
    };

    update_settled(0);
    if (is_safe(w)) {
        res.converged = true;
        res.t_max = 0;
        res.allocation_round = settled_since;
        return res;
    }

    for (long r = 1; r <= max_rounds; ++r) {
        RoundTrace trace = run_round(w);
        res.winners_per_round.push_back(trace.winners);
        res.losses_per_round.push_back(trace.losses);
        if (record_traces) res.traces.push_back(std::move(trace));
        res.rounds_executed = w.round_index - start_round;

        update_settled(r);
        if (is_safe(w)) {
            res.converged = true;
            res.t_max = r;
            res.allocation_round = settled_since;
            return res;
        }
    }
    res.allocation_round = settled_since;
    return res;
}

static void remove_node(World& w, int victim) {
    const int N = w.graph.node_count;
    std::vector<std::vector<int>> adj;
    adj.reserve(N - 1);
    auto remap = [&](int j) { return j < victim ? j : j - 1; };
    for (int i = 0; i < N; ++i) {
        if (i == victim) continue;
        std::vector<int> nb;
        for (int j : w.graph.adjacency[i])
            if (j != victim) nb.push_back(remap(j));
        adj.push_back(std::move(nb));
    }
    w.graph.node_count = N - 1;
    w.graph.adjacency = std::move(adj);
    w.states.erase(w.states.begin() + victim);
    w.stream_ids.erase(w.stream_ids.begin() + victim);
}

void inject_fault(World& w, const FaultSpec& fault, Rng& rng) {
    const int T = w.cfg.frame_size;
    switch (fault.kind) {
        case FaultSpec::Kind::StateCorruption: {
            const int N = w.graph.node_count;
            int count = static_cast<int>(fault.fraction * N + 0.5);
            count = std::clamp(count, 1, N);
            std::vector<int> idx(N);
            for (int i = 0; i < N; ++i) idx[i] = i;
            for (int i = 0; i < count; ++i) {  // partial Fisher-Yates
                const int j = static_cast<int>(uniform_int(rng, i, N - 1));
                std::swap(idx[i], idx[j]);
            }
            for (int i = 0; i < count; ++i) corrupt_node(w.states[idx[i]], w.cfg, rng);
            break;
        }
        case FaultSpec::Kind::EdgeChange: {
            for (int r = 0; r < fault.remove_edges; ++r) {
                auto edges = w.graph.edge_list();
                if (edges.empty()) break;
                auto [i, j] = edges[uniform_int(rng, 0, static_cast<std::int64_t>(edges.size()) - 1)];
                auto& ni = w.graph.adjacency[i];
                auto& nj = w.graph.adjacency[j];
                ni.erase(std::find(ni.begin(), ni.end(), j));
                nj.erase(std::find(nj.begin(), nj.end(), i));
            }
            const int N = w.graph.node_count;
            for (int a = 0; a < fault.add_edges && N >= 2; ++a) {
                for (int attempt = 0; attempt < 1000; ++attempt) {
                    const int i = static_cast<int>(uniform_int(rng, 0, N - 1));
                    const int j = static_cast<int>(uniform_int(rng, 0, N - 1));
                    if (i == j || w.graph.has_edge(i, j)) continue;
                    w.graph.adjacency[i].insert(
                        std::upper_bound(w.graph.adjacency[i].begin(), w.graph.adjacency[i].end(), j), j);
                    w.graph.adjacency[j].insert(
                        std::upper_bound(w.graph.adjacency[j].begin(), w.graph.adjacency[j].end(), i), i);
                    break;
                }
            }
            w.graph.validate();
            break;
        }
        case FaultSpec::Kind::NodeChurn: {
            if (fault.remove_nodes >= w.graph.node_count)
                throw std::invalid_argument("inject_fault: churn must leave at least one node");
            for (int r = 0; r < fault.remove_nodes; ++r)
                remove_node(w, static_cast<int>(uniform_int(rng, 0, w.graph.node_count - 1)));
            for (int a = 0; a < fault.add_nodes; ++a) {
                const int old_n = w.graph.node_count;
                const int id = old_n;
                w.graph.node_count += 1;
                w.graph.adjacency.emplace_back();
                const std::uint64_t sid = w.next_stream_id++;
                w.stream_ids.push_back(sid);
                NodeState st(T, substream_seed(w.master_seed, sid));
                corrupt_node(st, w.cfg, rng);
                w.states.push_back(std::move(st));
                // attach with roughly the mean degree of the surviving graph
                const double mean_deg = old_n > 0 ? graph_stats(w.graph).mean_degree : 0.0;
                int links = std::min(old_n, std::max(1, static_cast<int>(mean_deg + 0.5)));
                std::set<int> picked;
                while (static_cast<int>(picked.size()) < links)
                    picked.insert(static_cast<int>(uniform_int(rng, 0, old_n - 1)));
                for (int j : picked) {
                    w.graph.adjacency[id].push_back(j);
                    w.graph.adjacency[j].insert(
                        std::upper_bound(w.graph.adjacency[j].begin(), w.graph.adjacency[j].end(), id), id);
                }
                std::sort(w.graph.adjacency[id].begin(), w.graph.adjacency[id].end());
            }
            w.graph.validate();
            break;
        }
    }
}

std::string trace_to_csv(const std::vector<RoundTrace>& traces) {
    std::ostringstream out;
    out << "round,slot,period,node,event\n";
    for (const auto& tr : traces) {
        for (int t = 0; t < static_cast<int>(tr.slots.size()); ++t) {
            const SlotTrace& s = tr.slots[t];
            for (auto [k, i] : s.beacons) out << tr.round_index << ',' << t << ',' << k << ',' << i << ",beacon\n";
            for (auto [k, i] : s.senses) out << tr.round_index << ',' << t << ',' << k << ',' << i << ",sense\n";
            for (auto [k, i] : s.losses) out << tr.round_index << ',' << t << ',' << k << ',' << i << ",lose\n";
            for (auto [k, i] : s.data) out << tr.round_index << ',' << t << ',' << k << ',' << i << ",data\n";
            for (int i : s.delivered) out << tr.round_index << ',' << t << ",0," << i << ",deliver\n";
            for (int i : s.collided) out << tr.round_index << ',' << t << ",0," << i << ",collide\n";
        }
    }
    return out.str();
}

}  // namespace sstdma
