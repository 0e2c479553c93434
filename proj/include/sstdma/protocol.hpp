#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sstdma/rng.hpp"

namespace sstdma {

// Absence of a broadcasting slot (the busy-channel value).
constexpr int kNoSlot = -1;

// Inclusive range of listening/signaling periods, 1-based.
struct PeriodRange {
    int first = 1;
    int last = 1;
    int size() const { return last - first + 1; }
};

struct BackoffWindow {
    int cw_start = 1;
    int cw_end = 1;
};

// Static frame parameters shared by every node.
struct FrameConfig {
    int frame_size = 2;  // T, timeslots per frame
    int periods = 2;     // n, listening/signaling periods per timeslot

    // Disjoint contiguous ranges covering [1..periods], ordered; range k is
    // reserved for priority class k (class 0 signals earliest).
    std::vector<PeriodRange> priority_partition;
    std::optional<BackoffWindow> backoff;

    FrameConfig() { priority_partition = {PeriodRange{1, periods}}; }
    FrameConfig(int T, int n, std::vector<PeriodRange> partition = {},
                std::optional<BackoffWindow> bw = std::nullopt)
        : frame_size(T), periods(n), priority_partition(std::move(partition)), backoff(bw) {
        if (priority_partition.empty()) priority_partition = {PeriodRange{1, n}};
        validate();
    }

    int priority_classes() const { return static_cast<int>(priority_partition.size()); }
    void validate() const;  // throws std::invalid_argument
};

// Full per-node protocol state.
struct NodeState {
    int slot = kNoSlot;
    std::vector<std::uint8_t> unused;  // size T; unused[t] = no indication that t is taken
    bool signal = false;
    int backoff_count = 0;
    int priority_class = 0;
    Rng rng;

    explicit NodeState(int frame_size = 2, std::uint64_t seed = 0)
        : unused(frame_size, 1), rng(seed) {}

    std::vector<int> unused_slots() const {
        std::vector<int> out;
        for (int t = 0; t < static_cast<int>(unused.size()); ++t)
            if (unused[t]) out.push_back(t);
        return out;
    }
};

enum class RelativeState { Ready, Obtaining, Allocated, Unstable };

const char* to_string(RelativeState s);

enum class TimeslotAction { None, EnterCompetition };

namespace protocol {

// Invoked at the start of timeslot t. Marks t as unused and clears the signal
// flag (stale-information cleanup), and at t == 0 lets a slotless node pick a
// new slot. The candidate set is the unused set as recorded at the end of the
// previous round: the cleanup mark on t itself is an assessment of the slot
// that is only about to begin, so it is not a selection candidate.
TimeslotAction on_timeslot_start(NodeState& st, int t, const FrameConfig& cfg);

// kNoSlot iff candidates is empty, otherwise a uniform member.
int select_unused_uniform(const std::vector<int>& candidates, Rng& rng);

// Contention-window variant: a node must count down backoff_count unused
// slots across rounds before it takes one. Returns kNoSlot while counting.
int select_unused_backoff(NodeState& st, const std::vector<int>& candidates,
                          const BackoffWindow& cw, Rng& rng);

// Uniform period within the node's priority class range; in [1..n].
int choose_signal_period(int priority_class, const FrameConfig& cfg, Rng& rng);

// Reaction to a sensed transmission in timeslot t. Marks t used and, if the
// node holds t without having transmitted its own beacon yet, drops the slot
// (it lost the competition). A node that already signaled in this slot keeps
// the slot and proceeds to its DATA transmission.
void on_carrier_sense(NodeState& st, int t, bool has_signaled_this_slot);

// The five per-node consistency properties, evaluated against the node's
// neighborhood at a round boundary:
//   p1  no broadcast attempt in progress (signal == false)
//   p2  for t != slot: unused[t] holds iff no neighbor claims t
//   p3  a slot is held, or some other slot is available
//   p4  a slot is held
//   p5  no neighbor claims this node's slot, and all neighbors view it as used
struct DefinitionProperties {
    bool p1 = false, p2 = false, p3 = false, p4 = false, p5 = false;
};

DefinitionProperties definition_properties(const NodeState& self,
                                           const std::vector<const NodeState*>& neighbors);

// Allocated: p1..p5. Obtaining: p1..p4 but not p5. Ready: p1..p3 but not p4.
// Unstable: anything else (arbitrary initial states land here).
RelativeState relative_state(const NodeState& self,
                             const std::vector<const NodeState*>& neighbors);

// True iff every period available to class a precedes every period of class b.
bool priority_dominance(int a_class, int b_class, const FrameConfig& cfg);

}  // namespace protocol
}  // namespace sstdma
