#pragma once

#include "symblicit/lang/ast.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace symblicit::lang {

/// A typed compile-time value. Integers and booleans are stored as integral rationals.
struct ConstValue {
    Type type = Type::Int;
    arith::Rational value;

    bool as_bool() const { return value != 0; }
};

using ConstantOverrides = std::map<std::string, std::string>;

namespace detail {

inline bool is_numeric(Type t) { return t == Type::Int || t == Type::Real; }

inline Type numeric_join(Type a, Type b) { return (a == Type::Real || b == Type::Real) ? Type::Real : Type::Int; }

inline mpz_class floor_q(const arith::Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline mpz_class ceil_q(const arith::Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

} // namespace detail

/// Name resolution and typing for expressions of one model.
class Scope {
public:
    enum class Kind { Constant, Formula, Variable };

    explicit Scope(const ModelAst& ast) : ast_(ast) {}

    std::optional<Kind> kind_of(const std::string& name) const {
        if (ast_.find_variable(name)) {
            return Kind::Variable;
        }
        if (ast_.find_constant(name)) {
            return Kind::Constant;
        }
        if (ast_.find_formula(name)) {
            return Kind::Formula;
        }
        return std::nullopt;
    }

    const ModelAst& ast() const { return ast_; }

    /// Type of an expression; throws ModelError on undeclared names or ill-typed operators.
    /// `allow_labels` permits "label" references (labels and properties only).
    Type type_of(const ExprPtr& e, bool allow_labels = false, int depth = 0) const {
        using detail::is_numeric;
        if (depth > 4096) {
            throw ModelError(ErrorKind::Type, e->pos, "expression nesting too deep or cyclic formula");
        }
        auto sub = [&](std::size_t i) { return type_of(e->args[i], allow_labels, depth + 1); };
        auto need_numeric = [&](Type t, const ExprPtr& at) {
            if (!is_numeric(t)) {
                throw ModelError(ErrorKind::Type, at->pos, "expected a number, found bool");
            }
        };
        auto need_bool = [&](Type t, const ExprPtr& at) {
            if (t != Type::Bool) {
                throw ModelError(ErrorKind::Type, at->pos, std::string("expected bool, found ") + type_name(t));
            }
        };
        switch (e->op) {
        case Op::IntLit: return Type::Int;
        case Op::RealLit: return Type::Real;
        case Op::BoolLit: return Type::Bool;
        case Op::Ident: {
            if (const VarDecl* v = ast_.find_variable(e->name)) {
                return v->is_bool ? Type::Bool : Type::Int;
            }
            if (const ConstDecl* c = ast_.find_constant(e->name)) {
                return c->type;
            }
            if (const FormulaDecl* f = ast_.find_formula(e->name)) {
                return type_of(f->value, false, depth + 1);
            }
            throw ModelError(ErrorKind::Undeclared, e->pos, "undeclared identifier '" + e->name + "'");
        }
        case Op::Label: {
            if (!allow_labels) {
                throw ModelError(ErrorKind::Type, e->pos, "label reference \"" + e->name + "\" not allowed here");
            }
            const LabelDecl* l = ast_.find_label(e->name);
            if (!l && !extra_labels_.contains(e->name)) {
                throw ModelError(ErrorKind::Undeclared, e->pos, "unknown label \"" + e->name + "\"");
            }
            return Type::Bool;
        }
        case Op::Neg: {
            const Type t = sub(0);
            need_numeric(t, e->args[0]);
            return t;
        }
        case Op::Not: need_bool(sub(0), e->args[0]); return Type::Bool;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Min:
        case Op::Max: {
            const Type a = sub(0);
            const Type b = sub(1);
            need_numeric(a, e->args[0]);
            need_numeric(b, e->args[1]);
            return detail::numeric_join(a, b);
        }
        case Op::Div:
            need_numeric(sub(0), e->args[0]);
            need_numeric(sub(1), e->args[1]);
            return Type::Real;
        case Op::Pow: {
            const Type a = sub(0);
            const Type b = sub(1);
            need_numeric(a, e->args[0]);
            need_numeric(b, e->args[1]);
            return detail::numeric_join(a, b);
        }
        case Op::Mod: {
            const Type a = sub(0);
            const Type b = sub(1);
            if (a != Type::Int || b != Type::Int) {
                throw ModelError(ErrorKind::Type, e->pos, "mod expects integer arguments");
            }
            return Type::Int;
        }
        case Op::Floor:
        case Op::Ceil: need_numeric(sub(0), e->args[0]); return Type::Int;
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
            need_numeric(sub(0), e->args[0]);
            need_numeric(sub(1), e->args[1]);
            return Type::Bool;
        case Op::Eq:
        case Op::Ne: {
            const Type a = sub(0);
            const Type b = sub(1);
            if ((a == Type::Bool) != (b == Type::Bool)) {
                throw ModelError(ErrorKind::Type, e->pos, "cannot compare bool with a number");
            }
            return Type::Bool;
        }
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            need_bool(sub(0), e->args[0]);
            need_bool(sub(1), e->args[1]);
            return Type::Bool;
        case Op::Ite: {
            need_bool(sub(0), e->args[0]);
            const Type a = sub(1);
            const Type b = sub(2);
            if (a == Type::Bool && b == Type::Bool) {
                return Type::Bool;
            }
            if (a == Type::Bool || b == Type::Bool) {
                throw ModelError(ErrorKind::Type, e->pos, "branches of ?: have incompatible types");
            }
            return detail::numeric_join(a, b);
        }
        }
        throw ModelError(ErrorKind::Type, e->pos, "unknown operator");
    }

    void add_extra_label(const std::string& name) { extra_labels_.insert(name); }

private:
    const ModelAst& ast_;
    std::set<std::string> extra_labels_;
};

/// Evaluates constant expressions exactly. Constants resolve through their
/// declarations or overrides; variables make the expression non-constant.
class ConstEvaluator {
public:
    ConstEvaluator(const ModelAst& ast, const ConstantOverrides& overrides) : ast_(ast), scope_(ast) {
        for (const auto& [name, text] : overrides) {
            const ConstDecl* c = ast.find_constant(name);
            if (!c) {
                throw ModelError(ErrorKind::Constant, {}, "no constant named '" + name + "' to override");
            }
            auto q = arith::parse_rational(text);
            ConstValue v{c->type, {}};
            if (c->type == Type::Bool) {
                if (text == "true" || text == "false") {
                    v.value = text == "true" ? 1 : 0;
                } else {
                    throw ModelError(ErrorKind::Constant, {}, "constant '" + name + "' expects true or false");
                }
            } else if (!q) {
                throw ModelError(ErrorKind::Constant, {}, "bad value '" + text + "' for constant '" + name + "'");
            } else if (c->type == Type::Int && q->get_den() != 1) {
                throw ModelError(ErrorKind::Constant, {}, "constant '" + name + "' expects an integer");
            } else {
                v.value = *q;
            }
            overrides_[name] = v;
        }
    }

    /// Value of a named constant, or nullopt if it has no value.
    std::optional<ConstValue> constant(const std::string& name, int depth = 0) const {
        if (auto it = overrides_.find(name); it != overrides_.end()) {
            return it->second;
        }
        const ConstDecl* c = ast_.find_constant(name);
        if (!c || !c->value) {
            return std::nullopt;
        }
        auto v = eval(c->value, depth + 1);
        if (!v) {
            return std::nullopt;
        }
        return coerce(*v, c->type, c->pos, name);
    }

    /// Every constant without a value (after overrides).
    std::vector<std::string> unresolved() const {
        std::vector<std::string> out;
        for (const auto& c : ast_.constants) {
            if (!constant(c.name)) {
                out.push_back(c.name);
            }
        }
        return out;
    }

    /// Exact value of `e` if it depends only on constants with values.
    std::optional<ConstValue> eval(const ExprPtr& e, int depth = 0) const {
        if (depth > 4096) {
            throw ModelError(ErrorKind::Constant, e->pos, "cyclic constant definition");
        }
        const Type t = scope_.type_of(e, true);
        auto sub = [&](std::size_t i) { return eval(e->args[i], depth + 1); };
        switch (e->op) {
        case Op::IntLit: return ConstValue{Type::Int, e->value};
        case Op::RealLit: return ConstValue{Type::Real, e->value};
        case Op::BoolLit: return ConstValue{Type::Bool, e->value};
        case Op::Label: return std::nullopt;
        case Op::Ident: {
            if (ast_.find_variable(e->name)) {
                return std::nullopt;
            }
            if (ast_.find_constant(e->name)) {
                return constant(e->name, depth + 1);
            }
            if (const FormulaDecl* f = ast_.find_formula(e->name)) {
                return eval(f->value, depth + 1);
            }
            return std::nullopt;
        }
        default: break;
        }
        // Short-circuit forms first, so "false & x" folds.
        if (e->op == Op::And || e->op == Op::Or || e->op == Op::Implies) {
            auto a = sub(0);
            if (a) {
                if (e->op == Op::And && !a->as_bool()) {
                    return ConstValue{Type::Bool, 0};
                }
                if (e->op == Op::Or && a->as_bool()) {
                    return ConstValue{Type::Bool, 1};
                }
                if (e->op == Op::Implies && !a->as_bool()) {
                    return ConstValue{Type::Bool, 1};
                }
            }
            auto b = sub(1);
            if (!a || !b) {
                return std::nullopt;
            }
            return ConstValue{Type::Bool, b->as_bool() ? 1 : 0};
        }
        if (e->op == Op::Ite) {
            auto c = sub(0);
            if (!c) {
                return std::nullopt;
            }
            auto v = c->as_bool() ? sub(1) : sub(2);
            if (!v) {
                return std::nullopt;
            }
            return ConstValue{t, v->value};
        }
        std::vector<ConstValue> a;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            auto v = sub(i);
            if (!v) {
                return std::nullopt;
            }
            a.push_back(*v);
        }
        return ConstValue{t, apply(e, a)};
    }

    /// Evaluates `e`, failing if it is not constant.
    ConstValue require(const ExprPtr& e, const std::string& what) const {
        auto v = eval(e);
        if (!v) {
            throw ModelError(ErrorKind::Constant, e->pos, what + " must be a constant expression with a value");
        }
        return *v;
    }

    static arith::Rational apply(const ExprPtr& e, const std::vector<ConstValue>& a) {
        using arith::Rational;
        auto b = [](bool x) { return Rational(x ? 1 : 0); };
        switch (e->op) {
        case Op::Neg: return -a[0].value;
        case Op::Not: return b(!a[0].as_bool());
        case Op::Add: return a[0].value + a[1].value;
        case Op::Sub: return a[0].value - a[1].value;
        case Op::Mul: return a[0].value * a[1].value;
        case Op::Div:
            if (a[1].value == 0) {
                throw ModelError(ErrorKind::Evaluation, e->pos, "division by zero");
            }
            return a[0].value / a[1].value;
        case Op::Min: return a[0].value < a[1].value ? a[0].value : a[1].value;
        case Op::Max: return a[0].value < a[1].value ? a[1].value : a[0].value;
        case Op::Floor: return Rational(detail::floor_q(a[0].value));
        case Op::Ceil: return Rational(detail::ceil_q(a[0].value));
        case Op::Mod: {
            if (a[1].value == 0) {
                throw ModelError(ErrorKind::Evaluation, e->pos, "mod by zero");
            }
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), a[0].value.get_num_mpz_t(), a[1].value.get_num_mpz_t());
            return Rational(r);
        }
        case Op::Pow: return pow_q(e, a[0].value, a[1].value);
        case Op::Lt: return b(a[0].value < a[1].value);
        case Op::Le: return b(a[0].value <= a[1].value);
        case Op::Gt: return b(a[0].value > a[1].value);
        case Op::Ge: return b(a[0].value >= a[1].value);
        case Op::Eq: return b(a[0].value == a[1].value);
        case Op::Ne: return b(a[0].value != a[1].value);
        case Op::Iff: return b(a[0].as_bool() == a[1].as_bool());
        default: break;
        }
        throw ModelError(ErrorKind::Evaluation, e->pos, "cannot evaluate operator");
    }

    static arith::Rational pow_q(const ExprPtr& e, const arith::Rational& base, const arith::Rational& exp) {
        if (exp.get_den() != 1 || !exp.get_num().fits_slong_p()) {
            throw ModelError(ErrorKind::Evaluation, e->pos, "pow needs an integer exponent");
        }
        long n = exp.get_num().get_si();
        if (n < 0 && base == 0) {
            throw ModelError(ErrorKind::Evaluation, e->pos, "division by zero in pow");
        }
        const unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), k);
        mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), k);
        arith::Rational out(num, den);
        out.canonicalize();
        return n < 0 ? arith::Rational(1 / out) : out;
    }

    const Scope& scope() const { return scope_; }

private:
    static ConstValue coerce(ConstValue v, Type declared, SourcePos pos, const std::string& name) {
        if (declared == Type::Bool && v.type != Type::Bool) {
            throw ModelError(ErrorKind::Type, pos, "constant '" + name + "' declared bool");
        }
        if (declared != Type::Bool && v.type == Type::Bool) {
            throw ModelError(ErrorKind::Type, pos, "constant '" + name + "' declared numeric");
        }
        if (declared == Type::Int && v.value.get_den() != 1) {
            throw ModelError(ErrorKind::Type, pos, "constant '" + name + "' declared int has non-integer value");
        }
        v.type = declared;
        return v;
    }

    const ModelAst& ast_;
    Scope scope_;
    std::map<std::string, ConstValue> overrides_;
};

/// Static well-formedness checks that do not depend on constant overrides.
/// Checks that need a constant value are skipped when the value is missing and
/// repeated by `compile` once all constants are known.
inline void check_model(const ModelAst& ast, const ConstantOverrides& overrides) {
    std::set<std::string> names;
    auto declare = [&](const std::string& n, SourcePos pos) {
        if (!names.insert(n).second) {
            throw ModelError(ErrorKind::Type, pos, "duplicate declaration of '" + n + "'");
        }
    };
    for (const auto& c : ast.constants) {
        declare(c.name, c.pos);
    }
    for (const auto& f : ast.formulas) {
        declare(f.name, f.pos);
    }
    for (const auto& v : ast.variables) {
        declare(v.name, v.pos);
    }
    {
        std::set<std::string> labels;
        for (const auto& l : ast.labels) {
            if (!labels.insert(l.name).second) {
                throw ModelError(ErrorKind::Type, l.pos, "duplicate label \"" + l.name + "\"");
            }
        }
        std::set<std::string> rewards;
        for (const auto& r : ast.rewards) {
            if (!rewards.insert(r.name).second) {
                throw ModelError(ErrorKind::Type, r.pos, "duplicate reward structure \"" + r.name + "\"");
            }
        }
    }

    ConstEvaluator ev(ast, overrides);
    const Scope& scope = ev.scope();

    // Constants may only refer to constants.
    for (const auto& c : ast.constants) {
        if (!c.value) {
            continue;
        }
        std::function<void(const ExprPtr&)> only_constants = [&](const ExprPtr& e) {
            if (e->op == Op::Ident && scope.kind_of(e->name) == Scope::Kind::Variable) {
                throw ModelError(ErrorKind::Constant, e->pos, "constant '" + c.name + "' refers to variable '" + e->name + "'");
            }
            if (e->op == Op::Label) {
                throw ModelError(ErrorKind::Constant, e->pos, "constant '" + c.name + "' refers to a label");
            }
            for (const auto& a : e->args) {
                only_constants(a);
            }
        };
        only_constants(c.value);
        const Type t = scope.type_of(c.value);
        if ((c.type == Type::Bool) != (t == Type::Bool) || (c.type == Type::Int && t == Type::Real)) {
            throw ModelError(ErrorKind::Type, c.pos,
                             "constant '" + c.name + "' declared " + type_name(c.type) + " but defined as " + type_name(t));
        }
    }
    for (const auto& f : ast.formulas) {
        scope.type_of(f.value);
    }

    for (const auto& v : ast.variables) {
        if (v.is_bool) {
            if (v.init && scope.type_of(v.init) != Type::Bool) {
                throw ModelError(ErrorKind::Type, v.init->pos, "initial value of '" + v.name + "' must be bool");
            }
            continue;
        }
        for (const ExprPtr& bound : {v.lo, v.hi}) {
            if (scope.type_of(bound) != Type::Int) {
                throw ModelError(ErrorKind::Type, bound->pos, "bounds of '" + v.name + "' must be integers");
            }
        }
        if (v.init && scope.type_of(v.init) != Type::Int) {
            throw ModelError(ErrorKind::Type, v.init->pos, "initial value of '" + v.name + "' must be an integer");
        }
        auto lo = ev.eval(v.lo);
        auto hi = ev.eval(v.hi);
        if (lo && hi && lo->value > hi->value) {
            throw ModelError(ErrorKind::Range, v.pos,
                             "empty range [" + arith::to_string(lo->value) + ".." + arith::to_string(hi->value) + "] for '" + v.name + "'");
        }
        if (v.init && lo && hi) {
            if (auto init = ev.eval(v.init)) {
                if (init->value < lo->value || init->value > hi->value) {
                    throw ModelError(ErrorKind::Range, v.init->pos,
                                     "initial value " + arith::to_string(init->value) + " of '" + v.name + "' outside [" +
                                         arith::to_string(lo->value) + ".." + arith::to_string(hi->value) + "]");
                }
            }
        }
    }

    for (const auto& cmd : ast.commands) {
        if (scope.type_of(cmd.guard) != Type::Bool) {
            throw ModelError(ErrorKind::Type, cmd.guard->pos, "guard must be bool");
        }
        std::optional<arith::Rational> sum = arith::Rational(0);
        for (const auto& alt : cmd.alternatives) {
            if (alt.weight) {
                const Type wt = scope.type_of(alt.weight);
                if (!detail::is_numeric(wt)) {
                    throw ModelError(ErrorKind::Type, alt.weight->pos, "weight must be a number");
                }
                auto w = ev.eval(alt.weight);
                if (w && w->value < 0) {
                    throw ModelError(ErrorKind::Probability, alt.weight->pos, "negative weight " + arith::to_decimal_string(w->value));
                }
                if (w && ast.kind == ModelKind::Ctmc && w->value == 0) {
                    throw ModelError(ErrorKind::Probability, alt.weight->pos, "rate must be positive");
                }
                if (w && sum) {
                    *sum += w->value;
                } else {
                    sum.reset();
                }
            } else if (sum) {
                *sum += 1;
            }
            std::set<std::string> assigned;
            for (const auto& u : alt.updates) {
                const VarDecl* var = ast.find_variable(u.var);
                if (!var) {
                    throw ModelError(ErrorKind::Undeclared, u.pos, "update of undeclared variable '" + u.var + "'");
                }
                if (!assigned.insert(u.var).second) {
                    throw ModelError(ErrorKind::Type, u.pos, "variable '" + u.var + "' updated twice");
                }
                const Type t = scope.type_of(u.value);
                if (var->is_bool ? t != Type::Bool : t != Type::Int) {
                    throw ModelError(ErrorKind::Type, u.value->pos,
                                     "cannot assign " + std::string(type_name(t)) + " to '" + u.var + "'");
                }
            }
        }
        if (ast.kind == ModelKind::Dtmc && sum && *sum != 1) {
            throw ModelError(ErrorKind::Probability, cmd.pos, "probabilities sum to " + arith::to_decimal_string(*sum));
        }
    }

    for (const auto& r : ast.rewards) {
        for (const auto& item : r.items) {
            if (scope.type_of(item.guard) != Type::Bool) {
                throw ModelError(ErrorKind::Type, item.guard->pos, "reward guard must be bool");
            }
            if (!detail::is_numeric(scope.type_of(item.value))) {
                throw ModelError(ErrorKind::Type, item.value->pos, "reward must be a number");
            }
        }
    }
    for (const auto& l : ast.labels) {
        if (scope.type_of(l.value, true) != Type::Bool) {
            throw ModelError(ErrorKind::Type, l.value->pos, "label \"" + l.name + "\" must be bool");
        }
    }
    // Labels may refer to labels; reject cycles.
    std::function<void(const ExprPtr&, std::set<std::string>&)> acyclic = [&](const ExprPtr& e, std::set<std::string>& open) {
        if (e->op == Op::Label) {
            if (!open.insert(e->name).second) {
                throw ModelError(ErrorKind::Type, e->pos, "cyclic label \"" + e->name + "\"");
            }
            acyclic(ast.find_label(e->name)->value, open);
            open.erase(e->name);
        }
        for (const auto& a : e->args) {
            acyclic(a, open);
        }
    };
    for (const auto& l : ast.labels) {
        std::set<std::string> open{l.name};
        acyclic(l.value, open);
    }
}

inline void check_model(const ModelAst& ast) { check_model(ast, {}); }

} // namespace symblicit::lang
