#pragma once

#include "symblicit/lang/check.hpp"
#include "symblicit/lang/parser.hpp"
#include "symblicit/lang/printer.hpp"

#include <string>
#include <string_view>

namespace symblicit::lang {

enum class PropertyKind { ReachProb, ExpReward, LongRunAvg };

inline const char* property_kind_name(PropertyKind k) {
    switch (k) {
    case PropertyKind::ReachProb: return "ReachProb";
    case PropertyKind::ExpReward: return "ExpReward";
    case PropertyKind::LongRunAvg: return "LongRunAvg";
    }
    return "?";
}

/// A normalized property. Goals always refer to a label; inline state
/// formulas become synthesized labels, and `S=? [ phi ]` becomes a long-run
/// average over a synthesized 0/1 reward structure.
struct PropertySpec {
    PropertyKind kind = PropertyKind::ReachProb;
    std::string goal;   // label name (ReachProb, ExpReward)
    std::string reward; // reward structure name (ExpReward, LongRunAvg)
    std::vector<LabelDecl> extra_labels;
    std::vector<RewardStruct> extra_rewards;
    std::string text;

    friend bool operator==(const PropertySpec& a, const PropertySpec& b) {
        return a.kind == b.kind && a.goal == b.goal && a.reward == b.reward;
    }
};

inline constexpr std::string_view kSynthesizedGoal = "__goal";
inline constexpr std::string_view kSynthesizedReward = "__steady";

namespace detail {

inline std::string goal_label(Parser& p, const ModelAst& ast, PropertySpec& spec) {
    ExprPtr phi = p.parse_expr();
    Scope scope(ast);
    const Type t = scope.type_of(phi, true);
    if (t != Type::Bool) {
        throw ModelError(ErrorKind::Property, phi->pos, "goal must be a boolean state formula");
    }
    if (phi->op == Op::Label) {
        return phi->name;
    }
    spec.extra_labels.push_back(LabelDecl{std::string(kSynthesizedGoal), phi, phi->pos});
    return std::string(kSynthesizedGoal);
}

inline void parse_path(Parser& p, const ModelAst& ast, PropertySpec& spec) {
    if (p.is_keyword("F")) {
        p.take();
        spec.goal = goal_label(p, ast, spec);
        return;
    }
    // "true U phi" is the same as "F phi".
    if (p.is_keyword("true") && p.peek().kind == Tok::Ident && p.peek().text == "U") {
        p.take();
        p.take();
        spec.goal = goal_label(p, ast, spec);
        return;
    }
    Parser::fail(p.cur(), "expected 'F' or 'true U' path formula, found " + Parser::describe(p.cur()));
}

inline void expect_query(Parser& p) {
    p.expect(Tok::Assign, "'=?'");
    p.expect(Tok::Question, "'=?'");
}

} // namespace detail

/// Parses `P=? [ F phi ]`, `R{"r"}=? [ F phi ]`, `R=? [ S ]` or `S=? [ phi ]`
/// against a model, resolving label and reward names.
inline PropertySpec parse_property(std::string_view text, const ModelAst& ast) {
    using detail::Parser;
    Parser p(text);
    PropertySpec spec;
    spec.text = std::string(text);
    const Token head = p.expect(Tok::Ident, "'P', 'R' or 'S'");
    if (head.text == "P" || head.text == "Pmax" || head.text == "Pmin") {
        spec.kind = PropertyKind::ReachProb;
        detail::expect_query(p);
        p.expect(Tok::LBracket, "'['");
        detail::parse_path(p, ast, spec);
        p.expect(Tok::RBracket, "']'");
    } else if (head.text == "R" || head.text == "Rmax" || head.text == "Rmin") {
        std::optional<std::string> name;
        SourcePos name_pos = head.pos;
        if (p.accept(Tok::LBrace)) {
            name_pos = p.cur().pos;
            name = p.expect(Tok::String, "reward structure name").text;
            p.expect(Tok::RBrace, "'}'");
        }
        if (head.text == "R" && (p.is_keyword("max") || p.is_keyword("min"))) {
            p.take();
        }
        detail::expect_query(p);
        p.expect(Tok::LBracket, "'['");
        if (p.is_keyword("S")) {
            p.take();
            spec.kind = PropertyKind::LongRunAvg;
        } else {
            spec.kind = PropertyKind::ExpReward;
            detail::parse_path(p, ast, spec);
        }
        p.expect(Tok::RBracket, "']'");
        if (name) {
            if (!ast.find_reward(*name)) {
                throw ModelError(ErrorKind::Property, name_pos, "unknown reward structure \"" + *name + "\"");
            }
            spec.reward = *name;
        } else {
            if (ast.rewards.empty()) {
                throw ModelError(ErrorKind::Property, head.pos, "model has no reward structure");
            }
            spec.reward = ast.rewards.front().name;
        }
    } else if (head.text == "S") {
        spec.kind = PropertyKind::LongRunAvg;
        detail::expect_query(p);
        p.expect(Tok::LBracket, "'['");
        ExprPtr phi = p.parse_expr();
        Scope scope(ast);
        if (scope.type_of(phi, true) != Type::Bool) {
            throw ModelError(ErrorKind::Property, phi->pos, "steady-state formula must be boolean");
        }
        p.expect(Tok::RBracket, "']'");
        RewardStruct r;
        r.name = std::string(kSynthesizedReward);
        r.items.push_back(RewardItem{phi, Expr::int_lit(1), phi->pos});
        spec.extra_rewards.push_back(std::move(r));
        spec.reward = std::string(kSynthesizedReward);
    } else {
        Parser::fail(head, "expected 'P', 'R' or 'S', found " + Parser::describe(head));
    }
    p.expect(Tok::End, "end of property");
    return spec;
}

/// Canonical rendering of a property.
inline std::string to_string(const PropertySpec& spec) {
    auto goal = [&]() -> std::string {
        for (const auto& l : spec.extra_labels) {
            if (l.name == spec.goal) {
                return to_string(l.value);
            }
        }
        return "\"" + spec.goal + "\"";
    };
    switch (spec.kind) {
    case PropertyKind::ReachProb: return "P=? [ F " + goal() + " ]";
    case PropertyKind::ExpReward: return "R{\"" + spec.reward + "\"}=? [ F " + goal() + " ]";
    case PropertyKind::LongRunAvg:
        if (!spec.extra_rewards.empty()) {
            return "S=? [ " + to_string(spec.extra_rewards.front().items.front().guard) + " ]";
        }
        return "R{\"" + spec.reward + "\"}=? [ S ]";
    }
    return "?";
}

/// The model extended with a property's synthesized labels and rewards.
inline ModelAst attach(ModelAst ast, const PropertySpec& spec) {
    for (const auto& l : spec.extra_labels) {
        if (!ast.find_label(l.name)) {
            ast.labels.push_back(l);
        }
    }
    for (const auto& r : spec.extra_rewards) {
        if (!ast.find_reward(r.name)) {
            ast.rewards.push_back(r);
        }
    }
    return ast;
}

} // namespace symblicit::lang
