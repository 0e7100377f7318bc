#pragma once

#include "symblicit/arith/num_traits.hpp"
#include "symblicit/lang/state_code.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace symblicit::elim {

using lang::StateCode;
using Slot = std::uint32_t;

/// An internal consistency check failed.
class ChainError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

template <class Num>
struct Edge {
    Slot to;
    Num p;
};

template <class Num>
struct StateRecord {
    StateCode code;
    std::vector<Edge<Num>> out;
    Num reward_u{};
    Num reward_l{};
    std::vector<Slot> preds; // current (rewired) predecessors other than the state itself
    std::uint32_t explored_preds = 0;
    bool done = false;
    bool goal = false;
    bool live = false;
};

/// The explicit, partially eliminated state space.
template <class Num>
class PartialChain {
public:
    using Traits = arith::NumTraits<Num>;
    using Record = StateRecord<Num>;

    // ── structure ──────────────────────────────────────────────────────────

    std::optional<Slot> find(const StateCode& c) const {
        auto it = index_.find(c);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    bool contains(const StateCode& c) const { return index_.contains(c); }

    Slot add_state(const StateCode& c) {
        if (index_.contains(c)) {
            throw ChainError("state inserted twice");
        }
        if (track_tombstones_ && tombstones_.contains(c)) {
            throw ChainError("eliminated state reinserted");
        }
        Slot s;
        if (!free_.empty()) {
            s = free_.back();
            free_.pop_back();
            records_[s] = Record{};
        } else {
            s = static_cast<Slot>(records_.size());
            records_.emplace_back();
        }
        Record& r = records_[s];
        r.code = c;
        r.live = true;
        r.reward_u = Traits::zero();
        r.reward_l = Traits::zero();
        index_.emplace(c, s);
        ++live_;
        note_peak();
        return s;
    }

    Record& at(Slot s) { return records_[s]; }
    const Record& at(Slot s) const { return records_[s]; }
    Record& at(const StateCode& c) { return records_[index_.at(c)]; }
    const Record& at(const StateCode& c) const { return records_[index_.at(c)]; }

    /// Adds `p` to the edge `from -> to`, creating it if needed.
    void add_edge(Slot from, Slot to, const Num& p) {
        Record& r = records_[from];
        for (auto& e : r.out) {
            if (e.to == to) {
                e.p += p;
                return;
            }
        }
        r.out.push_back({to, p});
        ++transitions_;
        if (to != from) {
            records_[to].preds.push_back(from);
        }
        note_peak();
    }

    std::optional<Num> edge(Slot from, Slot to) const {
        for (const auto& e : records_[from].out) {
            if (e.to == to) {
                return e.p;
            }
        }
        return std::nullopt;
    }

    Slot initial() const { return initial_; }
    void set_initial(Slot s) { initial_ = s; }

    std::size_t live_states() const { return live_; }
    std::size_t live_transitions() const { return transitions_; }
    std::size_t peak_states() const { return peak_states_; }
    std::size_t peak_transitions() const { return peak_transitions_; }
    std::uint64_t eliminations() const { return eliminations_; }
    std::uint64_t removals() const { return removals_; }

    void track_tombstones(bool on) { track_tombstones_ = on; }

    template <class F>
    void for_each_live(F f) const {
        for (Slot s = 0; s < records_.size(); ++s) {
            if (records_[s].live) {
                f(s, records_[s]);
            }
        }
    }

    // ── elimination ────────────────────────────────────────────────────────

    /// State elimination: redistributes the self-loop of `s`, redirects all
    /// current predecessors around `s`, and removes `s` unless `keep` or it
    /// is absorbing. A state whose only transition is a self-loop is left
    /// untouched (its loop is normalized to exactly 1).
    void eliminate(Slot s, bool keep) {
        Record& r = records_[s];
        if (!r.live || !r.done) {
            throw ChainError("eliminating a state that is not fully explored");
        }
        ++eliminations_;
        if (drop_self_loop(s)) {
            return;
        }
        // Copy: redirection edits the predecessor lists.
        const std::vector<Slot> preds = r.preds;
        for (Slot sp : preds) {
            Record& q = records_[sp];
            if (!q.done) {
                throw ChainError("eliminating a state with an unexplored predecessor");
            }
            auto it = std::find_if(q.out.begin(), q.out.end(), [&](const Edge<Num>& e) { return e.to == s; });
            if (it == q.out.end()) {
                throw ChainError("predecessor list out of sync");
            }
            const Num p = it->p;
            q.out.erase(it);
            --transitions_;
            for (const auto& e : records_[s].out) {
                Num q2 = p * e.p;
                if (!Traits::is_zero(q2)) { // floating underflow: the mass is lost either way
                    add_edge(sp, e.to, q2);
                }
            }
            q.reward_u += Num(p * records_[s].reward_u);
            q.reward_l += Num(p * records_[s].reward_l);
        }
        records_[s].preds.clear();
        if (!keep) {
            remove(s);
        }
    }

    /// First step of elimination alone: folds a self-loop of probability p_c < 1
    /// into the other edges and the rewards. Returns true if the loop is the
    /// only transition (the state is absorbing).
    bool drop_self_loop(Slot s) {
        Record& r = records_[s];
        auto loop = std::find_if(r.out.begin(), r.out.end(), [&](const Edge<Num>& e) { return e.to == s; });
        if (loop == r.out.end()) {
            return false;
        }
        Num escape = Traits::zero();
        for (const auto& e : r.out) {
            if (e.to != s) {
                escape += e.p;
            }
        }
        if (Traits::is_zero(escape)) {
            // Absorbing: drop zero edges, pin the loop to 1.
            loop->p = Traits::one();
            return true;
        }
        // Dividing by the escape mass equals dividing by 1 - p_c for a
        // normalized distribution and avoids cancellation when p_c is near 1.
        const Num pc = loop->p;
        r.out.erase(loop);
        --transitions_;
        for (auto& e : r.out) {
            e.p = Num(e.p / escape);
        }
        const Num factor = pc / escape;
        r.reward_u += Num(r.reward_u * factor);
        r.reward_l += Num(r.reward_l * factor);
        return false;
    }

    bool is_absorbing(Slot s) const {
        const Record& r = records_[s];
        return r.out.size() == 1 && r.out.front().to == s;
    }

    // ── debug checks ───────────────────────────────────────────────────────

    /// Every fully explored live state has a distribution summing to 1.
    std::string check_conservation(double tolerance = 1e-6) const {
        for (Slot s = 0; s < records_.size(); ++s) {
            const Record& r = records_[s];
            if (!r.live || !r.done) {
                continue;
            }
            Num sum = Traits::zero();
            for (const auto& e : r.out) {
                sum += e.p;
            }
            if (!Traits::near(sum, Traits::one(), tolerance)) {
                return "state " + std::to_string(s) + " has outgoing mass " + Traits::to_string(sum);
            }
        }
        return {};
    }

    /// Predecessor lists equal the reverse of the live edges.
    std::string check_predecessors() const {
        std::unordered_map<Slot, std::vector<Slot>> expect;
        std::size_t edges = 0;
        for (Slot s = 0; s < records_.size(); ++s) {
            const Record& r = records_[s];
            if (!r.live) {
                continue;
            }
            for (const auto& e : r.out) {
                ++edges;
                if (!records_[e.to].live) {
                    return "edge to a removed state";
                }
                if (e.to != s) {
                    expect[e.to].push_back(s);
                }
            }
        }
        if (edges != transitions_) {
            return "transition counter out of sync";
        }
        for (Slot s = 0; s < records_.size(); ++s) {
            const Record& r = records_[s];
            if (!r.live) {
                continue;
            }
            std::vector<Slot> a = r.preds;
            std::vector<Slot> b = expect[s];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) {
                return "predecessor list of state " + std::to_string(s) + " out of sync";
            }
        }
        return {};
    }

    /// Listing of the live chain: rewards and outgoing edges per state.
    void print(std::ostream& os, const std::function<std::string(const StateCode&)>& name) const {
        for (Slot s = 0; s < records_.size(); ++s) {
            const Record& r = records_[s];
            if (!r.live) {
                continue;
            }
            os << "  " << name(r.code) << (s == initial_ ? "*" : "") << (r.done ? "" : " (frontier)");
            if (r.done) {
                os << " r=" << Traits::to_string(r.reward_u);
                os << " ->";
                for (const auto& e : r.out) {
                    os << " " << name(records_[e.to].code) << ":" << Traits::to_string(e.p);
                }
            }
            os << "\n";
        }
    }

private:
    void remove(Slot s) {
        Record& r = records_[s];
        for (const auto& e : r.out) {
            if (e.to == s) {
                continue;
            }
            auto& pl = records_[e.to].preds;
            auto it = std::find(pl.begin(), pl.end(), s);
            if (it != pl.end()) {
                pl.erase(it);
            }
        }
        transitions_ -= r.out.size();
        if (track_tombstones_) {
            tombstones_.insert(r.code);
        }
        index_.erase(r.code);
        r = Record{};
        free_.push_back(s);
        --live_;
        ++removals_;
    }

    void note_peak() {
        peak_states_ = std::max(peak_states_, live_);
        peak_transitions_ = std::max(peak_transitions_, transitions_);
    }

    std::vector<Record> records_;
    std::vector<Slot> free_;
    std::unordered_map<StateCode, Slot, lang::StateCodeHash> index_;
    std::unordered_set<StateCode, lang::StateCodeHash> tombstones_;
    bool track_tombstones_ = false;
    Slot initial_ = 0;
    std::size_t live_ = 0;
    std::size_t transitions_ = 0;
    std::size_t peak_states_ = 0;
    std::size_t peak_transitions_ = 0;
    std::uint64_t eliminations_ = 0;
    std::uint64_t removals_ = 0;
};

} // namespace symblicit::elim
