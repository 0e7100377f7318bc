#pragma once

#include "symblicit/arith/num_traits.hpp"
#include "symblicit/lang/ast.hpp"
#include "symblicit/lang/check.hpp"
#include "symblicit/lang/state_code.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symblicit::lang {

using IntFn = std::function<std::int64_t(const std::int64_t*)>;
template <class Num>
using NumFn = std::function<Num(const std::int64_t*)>;

/// Placement of one variable in the state encoding.
struct VarLayout {
    std::string name;
    bool is_bool = false;
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    unsigned offset = 0;
    unsigned width = 0;
};

/// Bits needed for a range of `size` values: ceil(log2(size)).
inline unsigned bits_for(std::uint64_t size) {
    unsigned w = 0;
    while (w < 64 && (std::uint64_t{1} << w) < size) {
        ++w;
    }
    return w;
}

/// Executable form of a model over backend `Num`: successor weights
/// (probabilities for DTMCs, rates for CTMCs), rewards and labels.
template <class Num>
class CompiledModel {
public:
    using Traits = arith::NumTraits<Num>;

    struct Successor {
        StateCode target;
        Num weight;
    };

    ModelKind kind() const { return kind_; }
    const std::vector<VarLayout>& variables() const { return vars_; }
    unsigned width() const { return width_; }
    const StateCode& initial() const { return initial_; }

    StateCode encode(const std::int64_t* vals) const {
        StateCode c;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            c.set_field(vars_[i].offset, vars_[i].width, static_cast<std::uint64_t>(vals[i] - vars_[i].lo));
        }
        return c;
    }

    void decode(const StateCode& c, std::int64_t* vals) const {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            vals[i] = vars_[i].lo + static_cast<std::int64_t>(c.field(vars_[i].offset, vars_[i].width));
        }
    }

    std::vector<std::int64_t> valuation(const StateCode& c) const {
        std::vector<std::int64_t> v(vars_.size());
        decode(c, v.data());
        return v;
    }

    /// "(s=5,b=true)"
    std::string describe(const StateCode& c) const {
        const auto v = valuation(c);
        std::string out = "(";
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            out += (i ? "," : "") + vars_[i].name + "=";
            out += vars_[i].is_bool ? (v[i] ? "true" : "false") : std::to_string(v[i]);
        }
        return out + ")";
    }

    /// Fills `out` with the merged successor distribution of `s` in command
    /// order. Returns true if `s` is a deadlock, in which case `out` is the
    /// single self-loop {s -> 1}.
    bool successors(const StateCode& s, std::vector<Successor>& out) const {
        out.clear();
        thread_local std::vector<std::int64_t> vals;
        thread_local std::vector<std::int64_t> next;
        thread_local std::vector<const Cmd*> enabled;
        vals.resize(vars_.size());
        decode(s, vals.data());
        enabled.clear();
        for (const Cmd& cmd : commands_) {
            if (cmd.guard(vals.data())) {
                enabled.push_back(&cmd);
            }
        }
        if (enabled.empty()) {
            out.push_back({s, Traits::one()});
            return true;
        }
        const bool split = kind_ == ModelKind::Dtmc && enabled.size() > 1;
        const Num share = split ? Num(Traits::one() / Traits::from_int(static_cast<std::int64_t>(enabled.size())))
                                : Traits::one();
        for (const Cmd* cmd : enabled) {
            Num sum = Traits::zero();
            for (const Alt& alt : cmd->alternatives) {
                Num w = alt.weight(vals.data());
                if (w < Traits::zero()) {
                    throw ModelError(ErrorKind::Probability, alt.pos,
                                     "negative weight " + Traits::to_string(w) + " in state " + describe(s));
                }
                if (kind_ == ModelKind::Dtmc) {
                    sum += w;
                }
                if (Traits::is_zero(w)) {
                    continue;
                }
                next = vals;
                for (const Upd& u : alt.updates) {
                    next[u.var] = u.value(vals.data());
                }
                for (const Upd& u : alt.updates) {
                    const VarLayout& v = vars_[u.var];
                    if (next[u.var] < v.lo || next[u.var] > v.hi) {
                        throw ModelError(ErrorKind::Range, u.pos,
                                         "value " + std::to_string(next[u.var]) + " out of range [" + std::to_string(v.lo) +
                                             ".." + std::to_string(v.hi) + "] for '" + v.name + "' in state " + describe(s));
                    }
                }
                if (split) {
                    w *= share;
                }
                add(out, encode(next.data()), w);
            }
            if (kind_ == ModelKind::Dtmc && !Traits::near(sum, Traits::one(), 1e-9)) {
                throw ModelError(ErrorKind::Probability, cmd->pos,
                                 "probabilities sum to " + Traits::to_string(sum) + " in state " + describe(s));
            }
        }
        return false;
    }

    std::optional<std::size_t> label_index(const std::string& name) const { return find(label_names_, name); }
    std::optional<std::size_t> reward_index(const std::string& name) const { return find(reward_names_, name); }
    const std::vector<std::string>& label_names() const { return label_names_; }
    const std::vector<std::string>& reward_names() const { return reward_names_; }

    bool label(std::size_t index, const StateCode& s) const {
        thread_local std::vector<std::int64_t> vals;
        vals.resize(vars_.size());
        decode(s, vals.data());
        return labels_[index](vals.data()) != 0;
    }

    Num reward(std::size_t index, const StateCode& s) const {
        thread_local std::vector<std::int64_t> vals;
        vals.resize(vars_.size());
        decode(s, vals.data());
        Num r = Traits::zero();
        for (const auto& item : rewards_[index]) {
            if (item.guard(vals.data())) {
                r += item.value(vals.data());
            }
        }
        return r;
    }

    /// Predicate for an arbitrary boolean expression over this model's names.
    std::function<bool(const StateCode&)> predicate(const ExprPtr& e) const { return predicate_factory_(e); }

private:
    template <class N>
    friend CompiledModel<N> compile(const ModelAst&, const ConstantOverrides&);

    struct Upd {
        std::size_t var;
        IntFn value;
        SourcePos pos;
    };
    struct Alt {
        NumFn<Num> weight;
        std::vector<Upd> updates;
        SourcePos pos;
    };
    struct Cmd {
        IntFn guard;
        std::vector<Alt> alternatives;
        SourcePos pos;
    };
    struct RewardItemFn {
        IntFn guard;
        NumFn<Num> value;
    };

    static std::optional<std::size_t> find(const std::vector<std::string>& names, const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == n) {
                return i;
            }
        }
        return std::nullopt;
    }

    static void add(std::vector<Successor>& out, const StateCode& target, const Num& w) {
        for (auto& e : out) {
            if (e.target == target) {
                e.weight += w;
                return;
            }
        }
        out.push_back({target, w});
    }

    ModelKind kind_ = ModelKind::Dtmc;
    std::vector<VarLayout> vars_;
    unsigned width_ = 0;
    StateCode initial_;
    std::vector<Cmd> commands_;
    std::vector<std::string> label_names_;
    std::vector<IntFn> labels_;
    std::vector<std::string> reward_names_;
    std::vector<std::vector<RewardItemFn>> rewards_;
    std::function<std::function<bool(const StateCode&)>(const ExprPtr&)> predicate_factory_;
};

namespace detail {

template <class Num>
class ExprCompiler {
public:
    using Traits = arith::NumTraits<Num>;

    ExprCompiler(const ModelAst& ast, const ConstEvaluator& ev) : ast_(ast), ev_(ev), scope_(ev.scope()) {
        for (std::size_t i = 0; i < ast.variables.size(); ++i) {
            var_index_[ast.variables[i].name] = i;
        }
    }

    /// Integer- or bool-typed expression.
    IntFn int_fn(const ExprPtr& e) const {
        const Type t = scope_.type_of(e, true);
        if (t == Type::Real) {
            throw ModelError(ErrorKind::Type, e->pos, "expected an integer or bool expression");
        }
        if (auto c = ev_.eval(e)) {
            const std::int64_t v = c->value.get_num().get_si();
            return [v](const std::int64_t*) { return v; };
        }
        auto arg = [&](std::size_t i) { return int_fn(e->args[i]); };
        auto is_int = [&](std::size_t i) { return scope_.type_of(e->args[i], true) != Type::Real; };
        const SourcePos pos = e->pos;
        switch (e->op) {
        case Op::Ident: {
            if (auto it = var_index_.find(e->name); it != var_index_.end()) {
                const std::size_t idx = it->second;
                return [idx](const std::int64_t* v) { return v[idx]; };
            }
            if (const FormulaDecl* f = ast_.find_formula(e->name)) {
                return int_fn(f->value);
            }
            throw ModelError(ErrorKind::Constant, e->pos, "constant '" + e->name + "' has no value");
        }
        case Op::Label: {
            const LabelDecl* l = ast_.find_label(e->name);
            if (!l) {
                throw ModelError(ErrorKind::Undeclared, e->pos, "unknown label \"" + e->name + "\"");
            }
            return int_fn(l->value);
        }
        case Op::Neg: {
            auto a = arg(0);
            return [a](const std::int64_t* v) { return -a(v); };
        }
        case Op::Not: {
            auto a = arg(0);
            return [a](const std::int64_t* v) -> std::int64_t { return !a(v); };
        }
        case Op::Add: return bin(e, [](std::int64_t x, std::int64_t y) { return x + y; });
        case Op::Sub: return bin(e, [](std::int64_t x, std::int64_t y) { return x - y; });
        case Op::Mul: return bin(e, [](std::int64_t x, std::int64_t y) { return x * y; });
        case Op::Min: return bin(e, [](std::int64_t x, std::int64_t y) { return x < y ? x : y; });
        case Op::Max: return bin(e, [](std::int64_t x, std::int64_t y) { return x < y ? y : x; });
        case Op::Mod: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b, pos](const std::int64_t* v) -> std::int64_t {
                const std::int64_t d = b(v);
                if (d == 0) {
                    throw ModelError(ErrorKind::Evaluation, pos, "mod by zero");
                }
                const std::int64_t r = a(v) % d;
                return (r != 0 && ((r < 0) != (d < 0))) ? r + d : r;
            };
        }
        case Op::Pow: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b, pos](const std::int64_t* v) -> std::int64_t {
                std::int64_t base = a(v);
                std::int64_t n = b(v);
                if (n < 0) {
                    throw ModelError(ErrorKind::Evaluation, pos, "negative exponent in integer pow");
                }
                std::int64_t r = 1;
                while (n > 0) {
                    if (n & 1) {
                        r *= base;
                    }
                    base *= base;
                    n >>= 1;
                }
                return r;
            };
        }
        case Op::Floor:
        case Op::Ceil: {
            auto a = num_fn(e->args[0]);
            if (e->op == Op::Floor) {
                return [a](const std::int64_t* v) { return Traits::floor(a(v)); };
            }
            return [a](const std::int64_t* v) { return Traits::ceil(a(v)); };
        }
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
        case Op::Eq:
        case Op::Ne: {
            const Op op = e->op;
            if (is_int(0) && is_int(1)) {
                auto a = arg(0);
                auto b = arg(1);
                return [a, b, op](const std::int64_t* v) -> std::int64_t { return compare(op, a(v), b(v)); };
            }
            auto a = num_fn(e->args[0]);
            auto b = num_fn(e->args[1]);
            return [a, b, op](const std::int64_t* v) -> std::int64_t {
                const Num x = a(v);
                const Num y = b(v);
                return compare(op, x, y);
            };
        }
        case Op::And: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) -> std::int64_t { return a(v) && b(v); };
        }
        case Op::Or: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) -> std::int64_t { return a(v) || b(v); };
        }
        case Op::Implies: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) -> std::int64_t { return !a(v) || b(v); };
        }
        case Op::Iff: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) -> std::int64_t { return (a(v) != 0) == (b(v) != 0); };
        }
        case Op::Ite: {
            auto c = arg(0);
            auto a = arg(1);
            auto b = arg(2);
            return [c, a, b](const std::int64_t* v) { return c(v) ? a(v) : b(v); };
        }
        default: break;
        }
        throw ModelError(ErrorKind::Type, e->pos, "cannot compile integer expression");
    }

    /// Numeric expression evaluated in the backend.
    NumFn<Num> num_fn(const ExprPtr& e) const {
        const Type t = scope_.type_of(e, true);
        if (t == Type::Bool) {
            throw ModelError(ErrorKind::Type, e->pos, "expected a number");
        }
        if (auto c = ev_.eval(e)) {
            const Num v = Traits::from_rational(c->value);
            return [v](const std::int64_t*) { return v; };
        }
        if (t == Type::Int) {
            auto a = int_fn(e);
            return [a](const std::int64_t* v) { return Traits::from_int(a(v)); };
        }
        auto arg = [&](std::size_t i) { return num_fn(e->args[i]); };
        const SourcePos pos = e->pos;
        switch (e->op) {
        case Op::Ident: {
            if (const FormulaDecl* f = ast_.find_formula(e->name)) {
                return num_fn(f->value);
            }
            throw ModelError(ErrorKind::Constant, e->pos, "constant '" + e->name + "' has no value");
        }
        case Op::Neg: {
            auto a = arg(0);
            return [a](const std::int64_t* v) { return Num(-a(v)); };
        }
        case Op::Add: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) { return Num(a(v) + b(v)); };
        }
        case Op::Sub: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) { return Num(a(v) - b(v)); };
        }
        case Op::Mul: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b](const std::int64_t* v) { return Num(a(v) * b(v)); };
        }
        case Op::Div: {
            auto a = arg(0);
            auto b = arg(1);
            return [a, b, pos](const std::int64_t* v) {
                const Num d = b(v);
                if (Traits::is_zero(d)) {
                    throw ModelError(ErrorKind::Evaluation, pos, "division by zero");
                }
                return Num(a(v) / d);
            };
        }
        case Op::Min:
        case Op::Max: {
            auto a = arg(0);
            auto b = arg(1);
            const bool is_min = e->op == Op::Min;
            return [a, b, is_min](const std::int64_t* v) {
                Num x = a(v);
                Num y = b(v);
                return (x < y) == is_min ? x : y;
            };
        }
        case Op::Pow: {
            auto a = arg(0);
            if (scope_.type_of(e->args[1], true) != Type::Int) {
                throw ModelError(ErrorKind::Type, e->args[1]->pos, "pow needs an integer exponent");
            }
            auto b = int_fn(e->args[1]);
            return [a, b, pos](const std::int64_t* v) {
                Num base = a(v);
                std::int64_t n = b(v);
                const bool invert = n < 0;
                if (invert) {
                    n = -n;
                }
                Num r = Traits::one();
                while (n > 0) {
                    if (n & 1) {
                        r *= base;
                    }
                    base *= base;
                    n >>= 1;
                }
                if (invert) {
                    if (Traits::is_zero(r)) {
                        throw ModelError(ErrorKind::Evaluation, pos, "division by zero in pow");
                    }
                    r = Num(Traits::one() / r);
                }
                return r;
            };
        }
        case Op::Ite: {
            auto c = int_fn(e->args[0]);
            auto a = arg(1);
            auto b = arg(2);
            return [c, a, b](const std::int64_t* v) { return c(v) ? a(v) : b(v); };
        }
        default: break;
        }
        throw ModelError(ErrorKind::Type, e->pos, "cannot compile numeric expression");
    }

private:
    template <class F>
    IntFn bin(const ExprPtr& e, F f) const {
        auto a = int_fn(e->args[0]);
        auto b = int_fn(e->args[1]);
        return [a, b, f](const std::int64_t* v) { return f(a(v), b(v)); };
    }

    template <class T>
    static std::int64_t compare(Op op, const T& x, const T& y) {
        switch (op) {
        case Op::Lt: return x < y;
        case Op::Le: return x <= y;
        case Op::Gt: return x > y;
        case Op::Ge: return x >= y;
        case Op::Eq: return x == y;
        case Op::Ne: return !(x == y);
        default: return 0;
        }
    }

    const ModelAst& ast_;
    const ConstEvaluator& ev_;
    const Scope& scope_;
    std::map<std::string, std::size_t> var_index_;
};

} // namespace detail

/// Resolves constants, lays out the state encoding and compiles all
/// expressions of `ast` into closures over backend `Num`.
template <class Num>
CompiledModel<Num> compile(const ModelAst& ast_in, const ConstantOverrides& overrides) {
    auto ast_ptr = std::make_shared<const ModelAst>(ast_in);
    const ModelAst& ast = *ast_ptr;
    check_model(ast, overrides);
    auto ev = std::make_shared<const ConstEvaluator>(ast, overrides);
    if (auto missing = ev->unresolved(); !missing.empty()) {
        std::string list;
        for (const auto& m : missing) {
            list += (list.empty() ? "" : ", ") + m;
        }
        throw ModelError(ErrorKind::Constant, {}, "undefined constant(s): " + list);
    }
    detail::ExprCompiler<Num> cc(ast, *ev);

    CompiledModel<Num> m;
    m.kind_ = ast.kind;
    std::vector<std::int64_t> init;
    unsigned offset = 0;
    for (const auto& v : ast.variables) {
        VarLayout l;
        l.name = v.name;
        l.is_bool = v.is_bool;
        if (!v.is_bool) {
            const auto lo = ev->require(v.lo, "lower bound of '" + v.name + "'").value;
            const auto hi = ev->require(v.hi, "upper bound of '" + v.name + "'").value;
            if (!lo.get_num().fits_slong_p() || !hi.get_num().fits_slong_p()) {
                throw ModelError(ErrorKind::Range, v.pos, "bounds of '" + v.name + "' too large");
            }
            l.lo = lo.get_num().get_si();
            l.hi = hi.get_num().get_si();
        }
        l.width = l.is_bool ? 1 : bits_for(static_cast<std::uint64_t>(l.hi - l.lo) + 1);
        l.offset = offset;
        offset += l.width;
        if (offset > StateCode::kMaxBits) {
            throw ModelError(ErrorKind::Range, v.pos, "state encoding exceeds " + std::to_string(StateCode::kMaxBits) + " bits");
        }
        std::int64_t iv = l.lo;
        if (v.init) {
            iv = ev->require(v.init, "initial value of '" + v.name + "'").value.get_num().get_si();
            if (iv < l.lo || iv > l.hi) {
                throw ModelError(ErrorKind::Range, v.init->pos,
                                 "initial value " + std::to_string(iv) + " of '" + v.name + "' outside [" +
                                     std::to_string(l.lo) + ".." + std::to_string(l.hi) + "]");
            }
        }
        init.push_back(iv);
        m.vars_.push_back(l);
    }
    m.width_ = offset;
    m.initial_ = m.encode(init.data());

    for (const auto& cmd : ast.commands) {
        typename CompiledModel<Num>::Cmd c;
        c.guard = cc.int_fn(cmd.guard);
        c.pos = cmd.pos;
        for (const auto& alt : cmd.alternatives) {
            typename CompiledModel<Num>::Alt a;
            a.pos = alt.weight ? alt.weight->pos : alt.pos;
            if (alt.weight) {
                a.weight = cc.num_fn(alt.weight);
            } else {
                const Num one = arith::NumTraits<Num>::one();
                a.weight = [one](const std::int64_t*) { return one; };
            }
            for (const auto& u : alt.updates) {
                std::size_t idx = 0;
                while (ast.variables[idx].name != u.var) {
                    ++idx;
                }
                a.updates.push_back({idx, cc.int_fn(u.value), u.pos});
            }
            c.alternatives.push_back(std::move(a));
        }
        m.commands_.push_back(std::move(c));
    }
    for (const auto& l : ast.labels) {
        m.label_names_.push_back(l.name);
        m.labels_.push_back(cc.int_fn(l.value));
    }
    for (const auto& r : ast.rewards) {
        m.reward_names_.push_back(r.name);
        std::vector<typename CompiledModel<Num>::RewardItemFn> items;
        for (const auto& item : r.items) {
            items.push_back({cc.int_fn(item.guard), cc.num_fn(item.value)});
        }
        m.rewards_.push_back(std::move(items));
    }
    // The factory keeps the AST and constants alive for predicates built later.
    std::vector<VarLayout> layout = m.vars_;
    m.predicate_factory_ = [ast_ptr, ev, layout](const ExprPtr& e) -> std::function<bool(const StateCode&)> {
        detail::ExprCompiler<Num> local(*ast_ptr, *ev);
        IntFn f = local.int_fn(e);
        return [f, layout](const StateCode& s) {
            thread_local std::vector<std::int64_t> vals;
            vals.resize(layout.size());
            for (std::size_t i = 0; i < layout.size(); ++i) {
                vals[i] = layout[i].lo + static_cast<std::int64_t>(s.field(layout[i].offset, layout[i].width));
            }
            return f(vals.data()) != 0;
        };
    };
    return m;
}

} // namespace symblicit::lang
