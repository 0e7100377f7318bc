#pragma once

#include "symblicit/lang/ast.hpp"

#include <sstream>
#include <string>

namespace symblicit::lang {

namespace detail {

inline const char* binary_symbol(Op op) {
    switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Implies: return "=>";
    case Op::Iff: return "<=>";
    default: return nullptr;
    }
}

inline const char* function_name(Op op) {
    switch (op) {
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::Floor: return "floor";
    case Op::Ceil: return "ceil";
    case Op::Pow: return "pow";
    case Op::Mod: return "mod";
    default: return nullptr;
    }
}

} // namespace detail

/// Renders an expression with every compound subterm parenthesized, so the
/// output reparses to the same tree.
inline std::string to_string(const ExprPtr& e) {
    switch (e->op) {
    case Op::IntLit: return arith::to_string(e->value);
    case Op::RealLit: {
        std::string s = arith::to_decimal_string(e->value);
        if (s.find('.') == std::string::npos && s.find('/') == std::string::npos) {
            s += ".0";
        }
        // Non-terminating values cannot come from the parser; render as a quotient.
        if (s.find('/') != std::string::npos) {
            return "(" + arith::to_string(e->value.get_num()) + ".0/" + arith::to_string(e->value.get_den()) + ")";
        }
        return s;
    }
    case Op::BoolLit: return e->value != 0 ? "true" : "false";
    case Op::Ident: return e->name;
    case Op::Label: return "\"" + e->name + "\"";
    case Op::Neg: return "-(" + to_string(e->args[0]) + ")";
    case Op::Not: return "!(" + to_string(e->args[0]) + ")";
    case Op::Ite:
        return "(" + to_string(e->args[0]) + " ? " + to_string(e->args[1]) + " : " + to_string(e->args[2]) + ")";
    default: break;
    }
    if (const char* sym = detail::binary_symbol(e->op)) {
        return "(" + to_string(e->args[0]) + " " + sym + " " + to_string(e->args[1]) + ")";
    }
    std::string out = detail::function_name(e->op);
    out += "(";
    for (std::size_t i = 0; i < e->args.size(); ++i) {
        out += (i ? ", " : "") + to_string(e->args[i]);
    }
    return out + ")";
}

/// Renders a model in canonical layout.
inline std::string to_string(const ModelAst& ast) {
    std::ostringstream os;
    os << (ast.kind == ModelKind::Dtmc ? "dtmc" : "ctmc") << "\n\n";
    for (const auto& c : ast.constants) {
        os << "const " << type_name(c.type) << " " << c.name;
        if (c.value) {
            os << " = " << to_string(c.value);
        }
        os << ";\n";
    }
    for (const auto& f : ast.formulas) {
        os << "formula " << f.name << " = " << to_string(f.value) << ";\n";
    }
    os << "\nmodule " << ast.module_name << "\n";
    for (const auto& v : ast.variables) {
        os << "  " << v.name << " : ";
        if (v.is_bool) {
            os << "bool";
        } else {
            os << "[" << to_string(v.lo) << " .. " << to_string(v.hi) << "]";
        }
        if (v.init) {
            os << " init " << to_string(v.init);
        }
        os << ";\n";
    }
    for (const auto& c : ast.commands) {
        os << "  [" << c.action << "] " << to_string(c.guard) << " -> ";
        for (std::size_t i = 0; i < c.alternatives.size(); ++i) {
            const auto& a = c.alternatives[i];
            if (i) {
                os << " + ";
            }
            if (a.weight) {
                os << to_string(a.weight) << " : ";
            }
            if (a.updates.empty()) {
                os << "true";
            }
            for (std::size_t k = 0; k < a.updates.size(); ++k) {
                os << (k ? " & " : "") << "(" << a.updates[k].var << "' = " << to_string(a.updates[k].value) << ")";
            }
        }
        os << ";\n";
    }
    os << "endmodule\n";
    for (const auto& r : ast.rewards) {
        os << "\nrewards";
        if (!r.name.empty()) {
            os << " \"" << r.name << "\"";
        }
        os << "\n";
        for (const auto& item : r.items) {
            os << "  " << to_string(item.guard) << " : " << to_string(item.value) << ";\n";
        }
        os << "endrewards\n";
    }
    if (!ast.labels.empty()) {
        os << "\n";
    }
    for (const auto& l : ast.labels) {
        os << "label \"" << l.name << "\" = " << to_string(l.value) << ";\n";
    }
    return os.str();
}

} // namespace symblicit::lang
