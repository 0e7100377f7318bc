#pragma once

#include "symblicit/arith/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symblicit::lang {

struct SourcePos {
    int line = 0;
    int col = 0;
};

enum class ErrorKind { Syntax, Undeclared, Type, Range, Probability, Constant, Evaluation, Property };

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Undeclared: return "undeclared identifier";
    case ErrorKind::Type: return "type error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Probability: return "probability error";
    case ErrorKind::Constant: return "constant error";
    case ErrorKind::Evaluation: return "evaluation error";
    case ErrorKind::Property: return "property error";
    }
    return "error";
}

/// Any problem with a model or property text. `what()` is "line:col: kind: message".
class ModelError : public std::runtime_error {
public:
    ModelError(ErrorKind kind, SourcePos pos, const std::string& message)
        : std::runtime_error(format(kind, pos, message)), kind_(kind), pos_(pos), message_(message) {}

    ErrorKind kind() const { return kind_; }
    SourcePos pos() const { return pos_; }
    const std::string& message() const { return message_; }

private:
    static std::string format(ErrorKind kind, SourcePos pos, const std::string& message) {
        std::string out;
        if (pos.line > 0) {
            out = std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": ";
        }
        return out + error_kind_name(kind) + ": " + message;
    }

    ErrorKind kind_;
    SourcePos pos_;
    std::string message_;
};

enum class Type { Int, Real, Bool };

inline const char* type_name(Type t) {
    switch (t) {
    case Type::Int: return "int";
    case Type::Real: return "double";
    case Type::Bool: return "bool";
    }
    return "?";
}

enum class Op {
    IntLit,
    RealLit,
    BoolLit,
    Ident,
    Label, // "name" inside an expression
    Neg,
    Not,
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    Implies,
    Iff,
    Ite,
    Min,
    Max,
    Floor,
    Ceil,
    Pow,
    Mod,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    Op op;
    SourcePos pos;
    arith::Rational value; // literals; booleans as 0/1
    std::string name;      // Ident, Label
    std::vector<ExprPtr> args;

    static ExprPtr literal(Op op, arith::Rational v, SourcePos pos = {}) {
        return std::make_shared<Expr>(Expr{op, pos, std::move(v), {}, {}});
    }
    static ExprPtr int_lit(long v, SourcePos pos = {}) { return literal(Op::IntLit, arith::Rational(v), pos); }
    static ExprPtr bool_lit(bool v, SourcePos pos = {}) { return literal(Op::BoolLit, arith::Rational(v ? 1 : 0), pos); }
    static ExprPtr ident(std::string n, SourcePos pos = {}) {
        return std::make_shared<Expr>(Expr{Op::Ident, pos, {}, std::move(n), {}});
    }
    static ExprPtr label(std::string n, SourcePos pos = {}) {
        return std::make_shared<Expr>(Expr{Op::Label, pos, {}, std::move(n), {}});
    }
    static ExprPtr node(Op op, std::vector<ExprPtr> args, SourcePos pos = {}) {
        return std::make_shared<Expr>(Expr{op, pos, {}, {}, std::move(args)});
    }
};

/// Structural equality, ignoring source positions.
inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) {
        return !a && !b;
    }
    if (a->op != b->op || a->value != b->value || a->name != b->name || a->args.size() != b->args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) {
            return false;
        }
    }
    return true;
}

enum class ModelKind { Dtmc, Ctmc };

struct ConstDecl {
    std::string name;
    Type type = Type::Int;
    ExprPtr value; // null: must be supplied as an override
    SourcePos pos;
};

struct FormulaDecl {
    std::string name;
    ExprPtr value;
    SourcePos pos;
};

struct VarDecl {
    std::string name;
    bool is_bool = false;
    ExprPtr lo, hi; // null for booleans
    ExprPtr init;   // null: lower bound / false
    SourcePos pos;
};

struct Update {
    std::string var;
    ExprPtr value;
    SourcePos pos;
};

struct Alternative {
    ExprPtr weight; // null: weight 1
    std::vector<Update> updates;
    SourcePos pos;
};

struct Command {
    std::string action;
    ExprPtr guard;
    std::vector<Alternative> alternatives;
    SourcePos pos;
};

struct RewardItem {
    ExprPtr guard;
    ExprPtr value;
    SourcePos pos;
};

struct RewardStruct {
    std::string name; // empty for an unnamed structure
    std::vector<RewardItem> items;
    SourcePos pos;
};

struct LabelDecl {
    std::string name;
    ExprPtr value;
    SourcePos pos;
};

struct ModelAst {
    ModelKind kind = ModelKind::Dtmc;
    std::vector<ConstDecl> constants;
    std::vector<FormulaDecl> formulas;
    std::string module_name;
    std::vector<VarDecl> variables;
    std::vector<Command> commands;
    std::vector<RewardStruct> rewards;
    std::vector<LabelDecl> labels;

    const ConstDecl* find_constant(const std::string& n) const {
        for (const auto& c : constants) {
            if (c.name == n) {
                return &c;
            }
        }
        return nullptr;
    }
    const FormulaDecl* find_formula(const std::string& n) const {
        for (const auto& f : formulas) {
            if (f.name == n) {
                return &f;
            }
        }
        return nullptr;
    }
    const VarDecl* find_variable(const std::string& n) const {
        for (const auto& v : variables) {
            if (v.name == n) {
                return &v;
            }
        }
        return nullptr;
    }
    const LabelDecl* find_label(const std::string& n) const {
        for (const auto& l : labels) {
            if (l.name == n) {
                return &l;
            }
        }
        return nullptr;
    }
    const RewardStruct* find_reward(const std::string& n) const {
        for (const auto& r : rewards) {
            if (r.name == n) {
                return &r;
            }
        }
        return nullptr;
    }
};

bool equal(const ModelAst& a, const ModelAst& b);

namespace detail {

template <class T, class F>
bool all_equal(const std::vector<T>& a, const std::vector<T>& b, F eq) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!eq(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

} // namespace detail

inline bool equal(const ModelAst& a, const ModelAst& b) {
    using detail::all_equal;
    return a.kind == b.kind && a.module_name == b.module_name &&
           all_equal(a.constants, b.constants,
                     [](const ConstDecl& x, const ConstDecl& y) {
                         return x.name == y.name && x.type == y.type && equal(x.value, y.value);
                     }) &&
           all_equal(a.formulas, b.formulas,
                     [](const FormulaDecl& x, const FormulaDecl& y) {
                         return x.name == y.name && equal(x.value, y.value);
                     }) &&
           all_equal(a.variables, b.variables,
                     [](const VarDecl& x, const VarDecl& y) {
                         return x.name == y.name && x.is_bool == y.is_bool && equal(x.lo, y.lo) &&
                                equal(x.hi, y.hi) && equal(x.init, y.init);
                     }) &&
           all_equal(a.commands, b.commands,
                     [](const Command& x, const Command& y) {
                         return x.action == y.action && equal(x.guard, y.guard) &&
                                all_equal(x.alternatives, y.alternatives,
                                          [](const Alternative& p, const Alternative& q) {
                                              return equal(p.weight, q.weight) &&
                                                     all_equal(p.updates, q.updates,
                                                               [](const Update& u, const Update& v) {
                                                                   return u.var == v.var && equal(u.value, v.value);
                                                               });
                                          });
                     }) &&
           all_equal(a.rewards, b.rewards,
                     [](const RewardStruct& x, const RewardStruct& y) {
                         return x.name == y.name &&
                                all_equal(x.items, y.items, [](const RewardItem& p, const RewardItem& q) {
                                    return equal(p.guard, q.guard) && equal(p.value, q.value);
                                });
                     }) &&
           all_equal(a.labels, b.labels, [](const LabelDecl& x, const LabelDecl& y) {
               return x.name == y.name && equal(x.value, y.value);
           });
}

} // namespace symblicit::lang
