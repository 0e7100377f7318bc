#include "support/support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace symblicit;
using dd::MtbddManager;
using dd::NodeRef;
using lang::StateCode;

namespace {

StateCode code(std::uint64_t index, unsigned width) { return StateCode::from_index(index, width); }

/// Node count of the reduced diagram of a table over `width` bits, by
/// Shannon expansion: distinct sub-tables per level whose halves differ.
std::size_t shannon_nodes(const std::vector<std::int64_t>& table, unsigned width) {
    std::size_t total = 0;
    for (unsigned level = 0; level < width; ++level) {
        const std::size_t block = std::size_t{1} << (width - level);
        std::set<std::vector<std::int64_t>> distinct;
        for (std::size_t start = 0; start < table.size(); start += block) {
            std::vector<std::int64_t> sub(table.begin() + start, table.begin() + start + block);
            if (!std::equal(sub.begin(), sub.begin() + block / 2, sub.begin() + block / 2)) {
                distinct.insert(std::move(sub));
            }
        }
        total += distinct.size();
    }
    return total;
}

std::vector<std::int64_t> table_of(const MtbddManager& m, NodeRef root, unsigned width) {
    std::vector<std::int64_t> t(std::size_t{1} << width);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto c = m.lookup(root, code(i, width));
        t[i] = c ? static_cast<std::int64_t>(*c) : -1;
    }
    return t;
}

/// Zeroconf's predecessor map: 1..4, ok, bottom have one predecessor, i four.
NodeRef zeroconf_map(MtbddManager& m) {
    NodeRef r = MtbddManager::empty();
    for (std::uint64_t s : {1, 2, 3, 4, 6, 7}) {
        r = m.set_count(r, code(s, 3), 1);
    }
    return m.set_count(r, code(5, 3), 4);
}

std::map<std::uint32_t, int> levels(const MtbddManager& m, NodeRef root) {
    std::map<std::uint32_t, int> out;
    std::set<NodeRef> seen;
    std::vector<NodeRef> stack{root};
    while (!stack.empty()) {
        const NodeRef r = stack.back();
        stack.pop_back();
        if (dd::is_terminal(r) || !seen.insert(r).second) {
            continue;
        }
        ++out[m.node(r).level];
        stack.push_back(m.node(r).low);
        stack.push_back(m.node(r).high);
    }
    return out;
}

} // namespace

TEST(Dd, ZeroconfPredecessorDiagram) {
    MtbddManager m(3);
    const NodeRef root = zeroconf_map(m);
    EXPECT_EQ(m.lookup(root, code(5, 3)), 4u);
    EXPECT_EQ(m.lookup(root, code(3, 3)), 1u);
    EXPECT_EQ(m.lookup(root, code(0, 3)), std::nullopt);
    EXPECT_EQ(m.node_count(root), 5u);
    const std::map<std::uint32_t, int> want{{0, 1}, {1, 2}, {2, 2}};
    EXPECT_EQ(levels(m, root), want);
    EXPECT_EQ(m.node_count(root), shannon_nodes(table_of(m, root, 3), 3));
    EXPECT_EQ(m.check_canonical(), "");
}

TEST(Dd, ExplorationReproducesZeroconfDiagram) {
    const auto loaded = model::load<double>(support::read_model("zeroconf.pm"), R"(P=? [ F "ok" ])");
    MtbddManager m(3);
    const auto res = explore::explore(*loaded.analysis, m);
    MtbddManager ref(3);
    const NodeRef want = zeroconf_map(ref);
    EXPECT_EQ(table_of(m, res.pre, 3), table_of(ref, want, 3));
    EXPECT_EQ(m.node_count(res.pre), 5u);
}

TEST(Dd, EmptyDiagram) {
    MtbddManager m(4);
    for (std::uint64_t i = 0; i < 16; ++i) {
        EXPECT_EQ(m.lookup(MtbddManager::empty(), code(i, 4)), std::nullopt);
    }
    EXPECT_EQ(m.node_count(MtbddManager::empty()), 0u);
}

TEST(Dd, SetCountAndIncrement) {
    MtbddManager m(5);
    NodeRef r = m.set_count(MtbddManager::empty(), code(9, 5), 0);
    EXPECT_EQ(m.lookup(r, code(9, 5)), 0u);
    const NodeRef same = m.set_count(r, code(9, 5), 0);
    EXPECT_EQ(same, r);
    const std::size_t arena = m.arena_size();
    EXPECT_EQ(m.set_count(r, code(9, 5), 0), r);
    EXPECT_EQ(m.arena_size(), arena);
    r = m.increment(r, code(9, 5));
    r = m.increment(r, code(9, 5));
    EXPECT_EQ(m.lookup(r, code(9, 5)), 2u);
    EXPECT_THROW(m.increment(r, code(10, 5)), dd::DdError);
    EXPECT_THROW(m.set_count(r, code(1, 5), dd::kMaxCount + 1), dd::DdError);
    EXPECT_THROW(MtbddManager(StateCode::kMaxBits + 1), dd::DdError);
}

TEST(Dd, IncrementPreservesOtherStates) {
    std::mt19937_64 rng(5);
    const unsigned w = 10;
    MtbddManager m(w);
    NodeRef r = MtbddManager::empty();
    std::uniform_int_distribution<std::uint64_t> pick(0, (1U << w) - 1);
    for (int k = 0; k < 300; ++k) {
        r = m.set_count(r, code(pick(rng), w), 0);
    }
    for (int k = 0; k < 50; ++k) {
        auto before = table_of(m, r, w);
        std::uint64_t s;
        do {
            s = pick(rng);
        } while (before[s] < 0);
        r = m.increment(r, code(s, w));
        ++before[s];
        ASSERT_EQ(table_of(m, r, w), before);
    }
}

TEST(Dd, RandomFunctionsMatchShannonCounts) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<unsigned> wdist(1, 8);
        const unsigned w = wdist(rng);
        std::uniform_int_distribution<int> vdist(-1, trial % 4);
        std::vector<std::int64_t> table(std::size_t{1} << w);
        MtbddManager m(w);
        NodeRef r = MtbddManager::empty();
        for (std::size_t i = 0; i < table.size(); ++i) {
            table[i] = vdist(rng);
            if (table[i] >= 0) {
                r = m.set_count(r, code(i, w), static_cast<std::uint32_t>(table[i]));
            }
        }
        ASSERT_EQ(table_of(m, r, w), table);
        ASSERT_EQ(m.node_count(r), shannon_nodes(table, w));
        ASSERT_EQ(m.check_canonical(), "");
    }
}

TEST(Dd, ShadowMapCanonicityAndPersistence) {
    std::mt19937_64 rng(2024);
    const unsigned w = 12;
    MtbddManager m(w);
    NodeRef r = MtbddManager::empty();
    std::map<std::uint64_t, std::uint32_t> shadow;
    std::uniform_int_distribution<std::uint64_t> pick(0, (1U << w) - 1);
    std::uniform_int_distribution<std::uint32_t> val(0, 6);
    std::vector<std::pair<NodeRef, std::map<std::uint64_t, std::uint32_t>>> snapshots;
    for (int k = 0; k < 10000; ++k) {
        const std::uint64_t s = pick(rng);
        auto it = shadow.find(s);
        if (it != shadow.end() && k % 3 == 0) {
            r = m.increment(r, code(s, w));
            ++it->second;
        } else {
            const std::uint32_t v = val(rng);
            r = m.set_count(r, code(s, w), v);
            shadow[s] = v;
        }
        ASSERT_EQ(m.lookup(r, code(s, w)), shadow[s]);
        if (k % 1000 == 0) {
            snapshots.emplace_back(r, shadow);
        }
    }
    const auto table = table_of(m, r, w);
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto it = shadow.find(i);
        ASSERT_EQ(table[i], it == shadow.end() ? -1 : static_cast<std::int64_t>(it->second));
    }
    EXPECT_EQ(m.check_canonical(), "");
    EXPECT_EQ(m.node_count(r), shannon_nodes(table, w));
    for (const auto& [root, map] : snapshots) {
        const auto t = table_of(m, root, w);
        for (std::size_t i = 0; i < t.size(); ++i) {
            auto it = map.find(i);
            ASSERT_EQ(t[i], it == map.end() ? -1 : static_cast<std::int64_t>(it->second));
        }
    }
}

TEST(Dd, GarbageCollectionKeepsRoots) {
    MtbddManager m(8);
    NodeRef r = MtbddManager::empty();
    for (std::uint64_t i = 0; i < 256; i += 3) {
        r = m.set_count(r, code(i, 8), static_cast<std::uint32_t>(i % 5));
    }
    const auto before = table_of(m, r, 8);
    const std::size_t live = m.node_count(r);
    EXPECT_GT(m.arena_size(), live);
    m.collect(std::span<NodeRef>(&r, 1));
    EXPECT_EQ(m.arena_size(), live);
    EXPECT_EQ(table_of(m, r, 8), before);
    EXPECT_EQ(m.check_canonical(), "");
    // The unique table still finds existing nodes after compaction.
    EXPECT_EQ(m.set_count(r, code(3, 8), 3), r);
    EXPECT_EQ(m.arena_size(), live);
    EXPECT_EQ(m.collections(), 1u);
}

TEST(Dd, DotOutput) {
    MtbddManager m(3);
    const NodeRef root = zeroconf_map(m);
    const std::string dot = m.to_dot(root);
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("label=\"bit 0\""), std::string::npos);
    EXPECT_NE(dot.find("label=\"unseen\""), std::string::npos);
    EXPECT_NE(dot.find("label=\"4\""), std::string::npos);
    EXPECT_NE(dot.find("style=dashed"), std::string::npos);
}
