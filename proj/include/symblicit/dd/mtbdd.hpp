#pragma once

#include "symblicit/lang/state_code.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace symblicit::dd {

using lang::StateCode;

/// Handle to a diagram node. Terminals are encoded inline: bit 31 set, the
/// low 31 bits hold the count, and the all-ones value is the Unseen terminal.
using NodeRef = std::uint32_t;

inline constexpr NodeRef kTerminalBit = 0x80000000U;
inline constexpr NodeRef kUnseen = 0xFFFFFFFFU;
inline constexpr std::uint32_t kMaxCount = 0x7FFFFFFEU;

inline constexpr bool is_terminal(NodeRef r) { return (r & kTerminalBit) != 0; }
inline constexpr NodeRef terminal(std::uint32_t count) { return kTerminalBit | count; }
inline constexpr std::uint32_t terminal_value(NodeRef r) { return r & ~kTerminalBit; }

/// Result of a lookup: a count, or nullopt for Unseen.
using Count = std::optional<std::uint32_t>;

class DdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduced ordered MTBDD over the bits of a StateCode with non-negative
/// integer terminals and an Unseen terminal. Only point updates are offered;
/// every update is persistent (old roots keep their meaning until the next
/// garbage collection).
class MtbddManager {
public:
    struct Node {
        std::uint32_t level;
        NodeRef low;
        NodeRef high;
    };

    explicit MtbddManager(unsigned width) : width_(width) {
        if (width > StateCode::kMaxBits) {
            throw DdError("diagram width exceeds " + std::to_string(StateCode::kMaxBits) + " bits");
        }
        table_.assign(1024, kEmpty);
    }

    unsigned width() const { return width_; }

    /// Total nodes in the arena, live or garbage.
    std::size_t arena_size() const { return nodes_.size(); }
    std::size_t peak_arena_size() const { return peak_; }
    const Node& node(NodeRef r) const { return nodes_[r]; }

    /// The empty diagram: every state Unseen.
    static constexpr NodeRef empty() { return kUnseen; }

    Count lookup(NodeRef root, const StateCode& s) const {
        NodeRef r = root;
        while (!is_terminal(r)) {
            const Node& n = nodes_[r];
            r = s.bit(n.level) ? n.high : n.low;
        }
        if (r == kUnseen) {
            return std::nullopt;
        }
        return terminal_value(r);
    }

    /// Root of the diagram equal to `root` except that `s` maps to `count`.
    NodeRef set_count(NodeRef root, const StateCode& s, std::uint32_t count) {
        if (count > kMaxCount) {
            throw DdError("predecessor count overflow");
        }
        return set_path(root, s, terminal(count));
    }

    /// Root of the diagram equal to `root` except that `s` is Unseen again.
    NodeRef clear(NodeRef root, const StateCode& s) { return set_path(root, s, kUnseen); }

    NodeRef increment(NodeRef root, const StateCode& s) {
        const Count c = lookup(root, s);
        if (!c) {
            throw DdError("increment of an unseen state");
        }
        return set_count(root, s, *c + 1);
    }

    /// Hash-consed node constructor; returns `low` when both children agree.
    NodeRef make_node(std::uint32_t level, NodeRef low, NodeRef high) {
        if (low == high) {
            return low;
        }
        std::size_t mask = table_.size() - 1;
        std::size_t i = hash(level, low, high) & mask;
        while (table_[i] != kEmpty) {
            const Node& n = nodes_[table_[i]];
            if (n.level == level && n.low == low && n.high == high) {
                return table_[i];
            }
            i = (i + 1) & mask;
        }
        if (nodes_.size() >= kTerminalBit - 1) {
            throw DdError("diagram node arena exhausted");
        }
        const NodeRef id = static_cast<NodeRef>(nodes_.size());
        nodes_.push_back({level, low, high});
        table_[i] = id;
        if (nodes_.size() > peak_) {
            peak_ = nodes_.size();
        }
        if (nodes_.size() * 2 > table_.size()) {
            rehash(table_.size() * 2);
        }
        return id;
    }

    /// Internal nodes reachable from `root`.
    std::size_t node_count(NodeRef root) const {
        if (is_terminal(root)) {
            return 0;
        }
        std::vector<bool> seen(nodes_.size(), false);
        std::vector<NodeRef> stack{root};
        std::size_t count = 0;
        while (!stack.empty()) {
            const NodeRef r = stack.back();
            stack.pop_back();
            if (is_terminal(r) || seen[r]) {
                continue;
            }
            seen[r] = true;
            ++count;
            stack.push_back(nodes_[r].low);
            stack.push_back(nodes_[r].high);
        }
        return count;
    }

    /// Mark-and-compact: keeps only nodes reachable from `roots`, which are
    /// rewritten in place. All other roots become invalid.
    void collect(std::span<NodeRef> roots) {
        std::vector<NodeRef> remap(nodes_.size(), kEmpty);
        std::vector<NodeRef> order;
        // Post-order so children are placed before parents.
        std::vector<std::pair<NodeRef, bool>> stack;
        for (NodeRef r : roots) {
            if (!is_terminal(r)) {
                stack.push_back({r, false});
            }
        }
        std::vector<bool> visited(nodes_.size(), false);
        while (!stack.empty()) {
            auto [r, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                order.push_back(r);
                continue;
            }
            if (visited[r]) {
                continue;
            }
            visited[r] = true;
            stack.push_back({r, true});
            for (NodeRef c : {nodes_[r].high, nodes_[r].low}) {
                if (!is_terminal(c) && !visited[c]) {
                    stack.push_back({c, false});
                }
            }
        }
        std::vector<Node> fresh;
        fresh.reserve(order.size());
        auto map = [&](NodeRef r) { return is_terminal(r) ? r : remap[r]; };
        for (NodeRef r : order) {
            const Node& n = nodes_[r];
            remap[r] = static_cast<NodeRef>(fresh.size());
            fresh.push_back({n.level, map(n.low), map(n.high)});
        }
        for (NodeRef& r : roots) {
            r = map(r);
        }
        nodes_ = std::move(fresh);
        std::size_t cap = 1024;
        while (cap < nodes_.size() * 2 + 2) {
            cap *= 2;
        }
        rehash(cap);
        ++collections_;
    }

    std::size_t collections() const { return collections_; }

    /// Canonicity and ordering check over the whole arena; returns a
    /// description of the first violation, or an empty string.
    std::string check_canonical() const {
        std::unordered_map<std::uint64_t, std::vector<NodeRef>> buckets;
        for (NodeRef i = 0; i < nodes_.size(); ++i) {
            const Node& n = nodes_[i];
            if (n.low == n.high) {
                return "node " + std::to_string(i) + " has equal children";
            }
            if (n.level >= width_) {
                return "node " + std::to_string(i) + " has level outside the width";
            }
            for (NodeRef c : {n.low, n.high}) {
                if (!is_terminal(c) && nodes_[c].level <= n.level) {
                    return "node " + std::to_string(i) + " violates the variable order";
                }
            }
            auto& b = buckets[hash(n.level, n.low, n.high)];
            for (NodeRef j : b) {
                const Node& m = nodes_[j];
                if (m.level == n.level && m.low == n.low && m.high == n.high) {
                    return "nodes " + std::to_string(j) + " and " + std::to_string(i) + " are duplicates";
                }
            }
            b.push_back(i);
        }
        return {};
    }

    /// Graphviz rendering: internal nodes as circles labelled "bit k", dashed
    /// low edges, boxes for count terminals and the Unseen terminal.
    std::string to_dot(NodeRef root) const {
        std::ostringstream os;
        os << "digraph mtbdd {\n";
        auto name = [](NodeRef r) {
            if (r == kUnseen) {
                return std::string("tU");
            }
            if (is_terminal(r)) {
                return "t" + std::to_string(terminal_value(r));
            }
            return "n" + std::to_string(r);
        };
        std::vector<NodeRef> stack{root};
        std::unordered_set<NodeRef> done;
        while (!stack.empty()) {
            const NodeRef r = stack.back();
            stack.pop_back();
            if (!done.insert(r).second) {
                continue;
            }
            if (r == kUnseen) {
                os << "  tU [shape=box,label=\"unseen\"];\n";
            } else if (is_terminal(r)) {
                os << "  " << name(r) << " [shape=box,label=\"" << terminal_value(r) << "\"];\n";
            } else {
                const Node& n = nodes_[r];
                os << "  " << name(r) << " [shape=circle,label=\"bit " << n.level << "\"];\n";
                os << "  " << name(r) << " -> " << name(n.low) << " [style=dashed];\n";
                os << "  " << name(r) << " -> " << name(n.high) << ";\n";
                stack.push_back(n.low);
                stack.push_back(n.high);
            }
        }
        os << "}\n";
        return os.str();
    }

private:
    static constexpr NodeRef kEmpty = 0xFFFFFFFFU;

    static std::size_t hash(std::uint32_t level, NodeRef low, NodeRef high) {
        std::uint64_t h = (static_cast<std::uint64_t>(low) << 32) ^ high;
        h ^= static_cast<std::uint64_t>(level) * 0x9e3779b97f4a7c15ULL;
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        h *= 0xc4ceb9fe1a85ec53ULL;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }

    void rehash(std::size_t capacity) {
        table_.assign(capacity, kEmpty);
        const std::size_t mask = capacity - 1;
        for (NodeRef id = 0; id < nodes_.size(); ++id) {
            const Node& n = nodes_[id];
            std::size_t i = hash(n.level, n.low, n.high) & mask;
            while (table_[i] != kEmpty) {
                i = (i + 1) & mask;
            }
            table_[i] = id;
        }
    }

    // Rebuilds the path of `s` bottom-up with `leaf` at its end.
    NodeRef set_path(NodeRef root, const StateCode& s, NodeRef leaf) {
        // Children of the path at each level, top-down.
        thread_local std::vector<NodeRef> siblings;
        siblings.resize(width_);
        NodeRef r = root;
        for (unsigned k = 0; k < width_; ++k) {
            NodeRef low = r;
            NodeRef high = r;
            if (!is_terminal(r) && nodes_[r].level == k) {
                low = nodes_[r].low;
                high = nodes_[r].high;
            }
            const bool b = s.bit(k);
            siblings[k] = b ? low : high;
            r = b ? high : low;
        }
        NodeRef acc = leaf;
        for (unsigned k = width_; k-- > 0;) {
            acc = s.bit(k) ? make_node(k, siblings[k], acc) : make_node(k, acc, siblings[k]);
        }
        return acc;
    }

    unsigned width_;
    std::vector<Node> nodes_;
    std::vector<NodeRef> table_;
    std::size_t peak_ = 0;
    std::size_t collections_ = 0;
};

} // namespace symblicit::dd
