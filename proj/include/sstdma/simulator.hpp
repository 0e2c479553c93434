#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sstdma/protocol.hpp"
#include "sstdma/topology.hpp"

namespace sstdma {

// One synchronous network: interference graph, shared frame parameters, and
// the state of every node. Nodes keep persistent stream ids so that churn
// never disturbs the random streams of surviving nodes.
struct World {
    InterferenceGraph graph;
    FrameConfig cfg;
    std::vector<NodeState> states;
    std::vector<std::uint64_t> stream_ids;
    std::uint64_t master_seed = 0;
    std::uint64_t next_stream_id = 0;
    long round_index = 0;  // boundary counter: 0 before the first round
};

// Fresh world: every node slotless, all slots viewed unused, signal cleared.
World make_world(const InterferenceGraph& g, const FrameConfig& cfg, std::uint64_t master_seed);

// Overwrites every node's protocol variables with arbitrary values within
// their type ranges (slot in {none} + [0,T), random unused bits, random
// signal flag). Random streams are left intact.
void randomize_states(World& w, Rng& rng);

// Installs a slot assignment (kNoSlot allowed) together with unused vectors
// and flags that are consistent with it, i.e. the state the protocol itself
// would hold at a round boundary under that assignment.
void set_slot_assignment(World& w, const std::vector<int>& slots);

// Events of a single timeslot. Pairs are (period, node).
struct SlotTrace {
    std::vector<int> competitors;                 // slot holders at the slot start
    std::vector<std::pair<int, int>> beacons;
    std::vector<std::pair<int, int>> senses;
    std::vector<std::pair<int, int>> losses;      // competitors dethroned, with the period they lost in
    std::vector<std::pair<int, int>> data;        // DATA transmitters, with their beacon period
    std::vector<int> delivered;                   // nodes that received exactly one DATA packet
    std::vector<int> collided;                    // nodes that heard >= 2 concurrent DATA packets
};

struct RoundTrace {
    long round_index = 0;                         // index of the boundary this round started from
    std::vector<SlotTrace> slots;
    std::vector<RelativeState> rel_before, rel_after;
    std::vector<int> m_samples;                   // matching-neighbor count after slot-0 selection; -1 when slotless
    std::vector<int> busy_channel;                // nodes whose selection found no unused slot
    int winners = 0;                              // nodes that entered Allocated over this round
    int losses = 0;                               // competitors that did not end the round Allocated
};

struct RoundMetrics {
    int winners = 0;
    int losses = 0;
    std::vector<int> m_samples;
};

RoundMetrics measure_round_metrics(const RoundTrace& trace);

// Runs one complete broadcasting round (slots 0..T-1, periods in order,
// carrier sensing, DATA plus delivery outcomes). Deterministic given the
// node streams.
RoundTrace run_round(World& w);

// Task legality at a round boundary: every node either holds a slot no
// neighbor holds, or is slotless while neighbors cover all T slots.
bool is_safe(const World& w);
bool node_exhaustion_safe(const World& w, int node);

std::vector<RelativeState> classify_all(const World& w);

struct RunResult {
    bool converged = false;
    long t_max = -1;                    // rounds from the start of this run to the first safe boundary
    long rounds_executed = 0;
    // Per node: first boundary (relative to this run's start) of the settled
    // streak that lasted to the end; settled means Allocated, or slotless
    // with all slots covered by neighbors. -1 when the node never settled.
    std::vector<long> allocation_round;
    std::vector<int> winners_per_round, losses_per_round;
    std::vector<RoundTrace> traces;     // populated only when requested
};

RunResult run_until_safe(World& w, long max_rounds, bool record_traces = false);

struct FaultSpec {
    enum class Kind { StateCorruption, EdgeChange, NodeChurn };
    Kind kind = Kind::StateCorruption;
    double fraction = 0.2;                 // StateCorruption: share of nodes hit
    int add_edges = 0, remove_edges = 0;   // EdgeChange
    int add_nodes = 0, remove_nodes = 0;   // NodeChurn
};

// Applies a fault at a round boundary. Edge and churn faults keep the graph
// symmetric and re-validate it; removing every node is rejected.
void inject_fault(World& w, const FaultSpec& fault, Rng& rng);

// Line-oriented dump, one record per event:
//   round,slot,period,node,event
// with event in {beacon,data,sense,lose,deliver,collide}; deliver/collide
// carry period 0.
std::string trace_to_csv(const std::vector<RoundTrace>& traces);

}  // namespace sstdma
