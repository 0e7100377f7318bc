#pragma once

#include "symblicit/arith/num_traits.hpp"
#include "symblicit/lang/compile.hpp"
#include "symblicit/lang/property.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace symblicit::model {

using lang::ModelKind;
using lang::PropertyKind;
using lang::StateCode;

/// One state's view under the active property: effective distribution P'(s)
/// and effective rewards r_u(s), r_l(s).
template <class Num>
struct Expansion {
    struct Edge {
        StateCode target;
        Num prob;
    };
    std::vector<Edge> succ;
    Num reward_u{};
    Num reward_l{};
    bool goal = false;
    bool deadlock = false;
};

/// Goal-absorbed, CTMC-embedded view of a compiled model.
template <class Num>
class AnalysisModel {
public:
    using Traits = arith::NumTraits<Num>;
    using Goal = std::function<bool(const StateCode&)>;

    AnalysisModel(std::shared_ptr<const lang::CompiledModel<Num>> model, PropertyKind kind)
        : model_(std::move(model)), kind_(kind) {}

    const lang::CompiledModel<Num>& compiled() const { return *model_; }
    std::shared_ptr<const lang::CompiledModel<Num>> compiled_ptr() const { return model_; }
    PropertyKind kind() const { return kind_; }
    const StateCode& initial() const { return model_->initial(); }
    unsigned width() const { return model_->width(); }
    bool embedded() const { return embedded_; }
    bool absorbing_goals() const { return static_cast<bool>(goal_); }

    bool is_goal(const StateCode& s) const { return goal_ && goal_(s); }
    const Goal& goal() const { return goal_; }

    std::optional<std::size_t> reward_index() const { return reward_; }

    void set_goal(Goal g) { goal_ = std::move(g); }
    void set_reward(std::optional<std::size_t> index) { reward_ = index; }
    void set_embedded(bool e) { embedded_ = e; }

    /// Number of deadlock states met so far (each expansion counts).
    std::uint64_t deadlocks_seen() const { return deadlocks_; }

    /// Effective successors of `s`. With `with_rewards` false the reward
    /// fields are left unspecified.
    void expand(const StateCode& s, Expansion<Num>& out, bool with_rewards = true) const {
        out.succ.clear();
        out.deadlock = false;
        out.goal = is_goal(s);
        if (out.goal) {
            out.succ.push_back({s, Traits::one()});
            if (with_rewards) {
                out.reward_u = Traits::zero();
                out.reward_l = Traits::one();
            }
            return;
        }
        thread_local std::vector<typename lang::CompiledModel<Num>::Successor> raw;
        out.deadlock = model_->successors(s, raw);
        if (out.deadlock) {
            ++deadlocks_;
        }
        Num exit = Traits::one();
        if (embedded_ && !out.deadlock) {
            exit = Traits::zero();
            for (const auto& e : raw) {
                exit += e.weight;
            }
        }
        const bool scale = !Traits::is_one(exit);
        for (auto& e : raw) {
            out.succ.push_back({e.target, scale ? Num(e.weight / exit) : e.weight});
        }
        if (with_rewards) {
            const Num r = reward_ ? model_->reward(*reward_, s) : Traits::zero();
            out.reward_u = scale ? Num(r / exit) : r;
            out.reward_l = scale ? Num(Traits::one() / exit) : Traits::one();
        }
    }

    std::string describe(const StateCode& s) const { return model_->describe(s); }

private:
    std::shared_ptr<const lang::CompiledModel<Num>> model_;
    PropertyKind kind_;
    Goal goal_;
    std::optional<std::size_t> reward_;
    bool embedded_ = false;
    mutable std::uint64_t deadlocks_ = 0;
};

/// Makes every state satisfying `goal` absorbing with reward 0. Idempotent.
template <class Num>
AnalysisModel<Num> absorb_goals(const AnalysisModel<Num>& m, typename AnalysisModel<Num>::Goal goal) {
    AnalysisModel<Num> out(m.compiled_ptr(), m.kind());
    out.set_embedded(m.embedded());
    out.set_reward(m.reward_index());
    if (m.absorbing_goals()) {
        auto prev = m.goal();
        out.set_goal([prev, goal](const StateCode& s) { return prev(s) || goal(s); });
    } else {
        out.set_goal(std::move(goal));
    }
    return out;
}

/// Normalizes CTMC rates into the embedded DTMC: P'(s)(t) = rate(s,t)/Q(s),
/// r_u = R/Q, r_l = 1/Q. Deadlocks get Q = 1. A DTMC is left unchanged.
template <class Num>
AnalysisModel<Num> embed_ctmc(const AnalysisModel<Num>& m) {
    AnalysisModel<Num> out(m.compiled_ptr(), m.kind());
    out.set_goal(m.goal());
    out.set_reward(m.reward_index());
    out.set_embedded(m.compiled().kind() == ModelKind::Ctmc);
    return out;
}

/// The analysis view for a property: rewards selected, goals absorbed for
/// ReachProb and ExpReward, CTMCs embedded.
template <class Num>
AnalysisModel<Num> make_analysis_model(std::shared_ptr<const lang::CompiledModel<Num>> model,
                                       const lang::PropertySpec& prop) {
    AnalysisModel<Num> m(model, prop.kind);
    if (prop.kind != PropertyKind::ReachProb) {
        auto r = model->reward_index(prop.reward);
        if (!r) {
            throw lang::ModelError(lang::ErrorKind::Property, {}, "unknown reward structure \"" + prop.reward + "\"");
        }
        m.set_reward(r);
    }
    m.set_embedded(model->kind() == ModelKind::Ctmc);
    if (prop.kind != PropertyKind::LongRunAvg) {
        auto g = model->label_index(prop.goal);
        if (!g) {
            throw lang::ModelError(lang::ErrorKind::Property, {}, "unknown label \"" + prop.goal + "\"");
        }
        const std::size_t gi = *g;
        m.set_goal([model, gi](const StateCode& s) { return model->label(gi, s); });
    }
    return m;
}

/// Parsed model, property and analysis view in one bundle.
template <class Num>
struct LoadedModel {
    lang::ModelAst ast;
    lang::PropertySpec property;
    std::shared_ptr<const lang::CompiledModel<Num>> compiled;
    std::shared_ptr<AnalysisModel<Num>> analysis;
};

template <class Num>
LoadedModel<Num> load(std::string_view model_text, std::string_view property_text,
                      const lang::ConstantOverrides& overrides = {}) {
    LoadedModel<Num> out;
    out.ast = lang::parse_model(model_text);
    out.property = lang::parse_property(property_text, out.ast);
    out.compiled = std::make_shared<const lang::CompiledModel<Num>>(
        lang::compile<Num>(lang::attach(out.ast, out.property), overrides));
    out.analysis = std::make_shared<AnalysisModel<Num>>(make_analysis_model<Num>(out.compiled, out.property));
    return out;
}

} // namespace symblicit::model
