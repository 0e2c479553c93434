#include "sstdma/protocol.hpp"

#include <stdexcept>
#include <string>

namespace sstdma {

void FrameConfig::validate() const {
    if (frame_size < 2) throw std::invalid_argument("FrameConfig: frame_size must be >= 2");
    if (periods < 2) throw std::invalid_argument("FrameConfig: periods must be >= 2");
    if (priority_partition.empty())
        throw std::invalid_argument("FrameConfig: priority partition must not be empty");
    int expected_first = 1;
    for (const auto& r : priority_partition) {
        if (r.first != expected_first || r.last < r.first)
            throw std::invalid_argument("FrameConfig: partition ranges must be nonempty, ordered, and disjoint");
        expected_first = r.last + 1;
    }
    if (expected_first != periods + 1)
        throw std::invalid_argument("FrameConfig: partition must cover exactly [1.." + std::to_string(periods) + "]");
    if (backoff) {
        if (backoff->cw_start < 1 || backoff->cw_end < backoff->cw_start)
            throw std::invalid_argument("FrameConfig: backoff window must satisfy 1 <= CW_start <= CW_end");
    }
}

const char* to_string(RelativeState s) {
    switch (s) {
        case RelativeState::Ready: return "Ready";
        case RelativeState::Obtaining: return "Obtaining";
        case RelativeState::Allocated: return "Allocated";
        case RelativeState::Unstable: return "Unstable";
    }
    return "?";
}

namespace protocol {

TimeslotAction on_timeslot_start(NodeState& st, int t, const FrameConfig& cfg) {
    if (t < 0 || t >= cfg.frame_size)
        throw std::invalid_argument("on_timeslot_start: timeslot out of range");

    std::vector<int> candidates;
    const bool selecting = (t == 0 && st.slot == kNoSlot);
    if (selecting) candidates = st.unused_slots();

    st.unused[t] = 1;
    st.signal = false;

    if (selecting) {
        st.slot = cfg.backoff ? select_unused_backoff(st, candidates, *cfg.backoff, st.rng)
                              : select_unused_uniform(candidates, st.rng);
    }
    return st.slot == t ? TimeslotAction::EnterCompetition : TimeslotAction::None;
}

int select_unused_uniform(const std::vector<int>& candidates, Rng& rng) {
    if (candidates.empty()) return kNoSlot;
    return candidates[uniform_int(rng, 0, static_cast<std::int64_t>(candidates.size()) - 1)];
}

int select_unused_backoff(NodeState& st, const std::vector<int>& candidates,
                          const BackoffWindow& cw, Rng& rng) {
    if (st.backoff_count == 0)
        st.backoff_count = static_cast<int>(uniform_int(rng, cw.cw_start, cw.cw_end));
    const int available = static_cast<int>(candidates.size());
    if (st.backoff_count <= available) {
        st.backoff_count = 0;
        return select_unused_uniform(candidates, rng);
    }
    st.backoff_count -= available;
    return kNoSlot;
}

int choose_signal_period(int priority_class, const FrameConfig& cfg, Rng& rng) {
    if (priority_class < 0 || priority_class >= cfg.priority_classes())
        throw std::invalid_argument("choose_signal_period: invalid priority class");
    const PeriodRange& r = cfg.priority_partition[priority_class];
    return static_cast<int>(uniform_int(rng, r.first, r.last));
}

void on_carrier_sense(NodeState& st, int t, bool has_signaled_this_slot) {
    st.unused[t] = 0;
    st.signal = false;
    if (st.slot == t && !has_signaled_this_slot) st.slot = kNoSlot;
}

DefinitionProperties definition_properties(const NodeState& self,
                                           const std::vector<const NodeState*>& neighbors) {
    DefinitionProperties p;
    const int T = static_cast<int>(self.unused.size());

    p.p1 = !self.signal;

    p.p2 = true;
    for (int t = 0; t < T && p.p2; ++t) {
        if (t == self.slot) continue;
        bool claimed = false;
        for (const NodeState* nb : neighbors)
            if (nb->slot == t) { claimed = true; break; }
        if (static_cast<bool>(self.unused[t]) != !claimed) p.p2 = false;
    }

    bool any_unused = false;
    for (int t = 0; t < T; ++t)
        if (self.unused[t]) { any_unused = true; break; }
    p.p3 = (self.slot != kNoSlot) || any_unused;

    p.p4 = self.slot != kNoSlot;

    if (p.p4) {
        p.p5 = true;
        for (const NodeState* nb : neighbors) {
            if (nb->slot == self.slot || nb->unused[self.slot]) { p.p5 = false; break; }
        }
    }
    return p;
}

RelativeState relative_state(const NodeState& self,
                             const std::vector<const NodeState*>& neighbors) {
    const DefinitionProperties p = definition_properties(self, neighbors);
    if (!(p.p1 && p.p2 && p.p3)) return RelativeState::Unstable;
    if (!p.p4) return RelativeState::Ready;
    return p.p5 ? RelativeState::Allocated : RelativeState::Obtaining;
}

bool priority_dominance(int a_class, int b_class, const FrameConfig& cfg) {
    if (a_class < 0 || a_class >= cfg.priority_classes() || b_class < 0 ||
        b_class >= cfg.priority_classes())
        throw std::invalid_argument("priority_dominance: invalid priority class");
    return cfg.priority_partition[a_class].last < cfg.priority_partition[b_class].first;
}

}  // namespace protocol
}  // namespace sstdma
