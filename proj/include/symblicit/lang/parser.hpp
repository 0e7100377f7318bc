#pragma once

#include "symblicit/lang/ast.hpp"
#include "symblicit/lang/lexer.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace symblicit::lang {

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    ModelAst parse_model() {
        ModelAst ast;
        const Token& head = expect(Tok::Ident, "model type");
        if (head.text == "dtmc" || head.text == "probabilistic") {
            ast.kind = ModelKind::Dtmc;
        } else if (head.text == "ctmc" || head.text == "stochastic") {
            ast.kind = ModelKind::Ctmc;
        } else {
            fail(head, "expected 'dtmc' or 'ctmc'");
        }
        bool have_module = false;
        while (!at(Tok::End)) {
            const Token& t = cur();
            if (is_keyword("const")) {
                ast.constants.push_back(parse_const());
            } else if (is_keyword("formula")) {
                ast.formulas.push_back(parse_formula());
            } else if (is_keyword("module")) {
                if (have_module) {
                    fail(t, "only one module is supported");
                }
                have_module = true;
                parse_module(ast);
            } else if (is_keyword("rewards")) {
                ast.rewards.push_back(parse_rewards());
            } else if (is_keyword("label")) {
                ast.labels.push_back(parse_label());
            } else {
                fail(t, "unexpected " + describe(t));
            }
        }
        if (!have_module) {
            throw ModelError(ErrorKind::Syntax, cur().pos, "model has no module");
        }
        return ast;
    }

    ExprPtr parse_expression_only() {
        ExprPtr e = parse_expr();
        expect(Tok::End, "end of expression");
        return e;
    }

    // Used by the property parser.
    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek(std::size_t k = 1) const {
        return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
    }
    bool at(Tok k) const { return cur().kind == k; }
    bool is_keyword(std::string_view word) const { return at(Tok::Ident) && cur().text == word; }
    const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok k) {
        if (at(k)) {
            take();
            return true;
        }
        return false;
    }
    const Token& expect(Tok k, std::string_view what) {
        if (!at(k)) {
            fail(cur(), "expected " + std::string(what) + ", found " + describe(cur()));
        }
        return take();
    }
    void expect_keyword(std::string_view word) {
        if (!is_keyword(word)) {
            fail(cur(), "expected '" + std::string(word) + "', found " + describe(cur()));
        }
        take();
    }
    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ModelError(ErrorKind::Syntax, t.pos, msg);
    }
    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "'" + t.text + "'";
        case Tok::String: return "\"" + t.text + "\"";
        default: return t.text.empty() ? token_name(t.kind) : "'" + t.text + "'";
        }
    }

    ExprPtr parse_expr() { return parse_ite(); }

private:
    ConstDecl parse_const() {
        ConstDecl c;
        c.pos = cur().pos;
        expect_keyword("const");
        c.type = Type::Int;
        if (is_keyword("int")) {
            take();
        } else if (is_keyword("double")) {
            take();
            c.type = Type::Real;
        } else if (is_keyword("bool")) {
            take();
            c.type = Type::Bool;
        }
        c.name = expect(Tok::Ident, "constant name").text;
        if (accept(Tok::Assign)) {
            c.value = parse_expr();
        }
        expect(Tok::Semi, "';'");
        return c;
    }

    FormulaDecl parse_formula() {
        FormulaDecl f;
        f.pos = cur().pos;
        expect_keyword("formula");
        f.name = expect(Tok::Ident, "formula name").text;
        expect(Tok::Assign, "'='");
        f.value = parse_expr();
        expect(Tok::Semi, "';'");
        return f;
    }

    LabelDecl parse_label() {
        LabelDecl l;
        l.pos = cur().pos;
        expect_keyword("label");
        l.name = expect(Tok::String, "label name").text;
        expect(Tok::Assign, "'='");
        l.value = parse_expr();
        expect(Tok::Semi, "';'");
        return l;
    }

    RewardStruct parse_rewards() {
        RewardStruct r;
        r.pos = cur().pos;
        expect_keyword("rewards");
        if (at(Tok::String)) {
            r.name = take().text;
        }
        while (!is_keyword("endrewards")) {
            if (at(Tok::End)) {
                fail(cur(), "missing 'endrewards'");
            }
            if (at(Tok::LBracket)) {
                fail(cur(), "transition rewards are not supported");
            }
            RewardItem item;
            item.pos = cur().pos;
            item.guard = parse_expr();
            expect(Tok::Colon, "':'");
            item.value = parse_expr();
            expect(Tok::Semi, "';'");
            r.items.push_back(std::move(item));
        }
        take();
        return r;
    }

    void parse_module(ModelAst& ast) {
        expect_keyword("module");
        ast.module_name = expect(Tok::Ident, "module name").text;
        while (!is_keyword("endmodule")) {
            if (at(Tok::End)) {
                fail(cur(), "missing 'endmodule'");
            }
            if (at(Tok::LBracket)) {
                ast.commands.push_back(parse_command());
            } else if (at(Tok::Ident) && peek().kind == Tok::Colon) {
                ast.variables.push_back(parse_variable());
            } else {
                fail(cur(), "expected variable declaration or command, found " + describe(cur()));
            }
        }
        take();
    }

    VarDecl parse_variable() {
        VarDecl v;
        v.pos = cur().pos;
        v.name = take().text;
        expect(Tok::Colon, "':'");
        if (is_keyword("bool")) {
            take();
            v.is_bool = true;
        } else {
            expect(Tok::LBracket, "'[' or 'bool'");
            v.lo = parse_expr();
            expect(Tok::DotDot, "'..'");
            v.hi = parse_expr();
            expect(Tok::RBracket, "']'");
        }
        if (is_keyword("init")) {
            take();
            v.init = parse_expr();
        }
        expect(Tok::Semi, "';'");
        return v;
    }

    Command parse_command() {
        Command c;
        c.pos = cur().pos;
        expect(Tok::LBracket, "'['");
        if (at(Tok::Ident)) {
            c.action = take().text;
        }
        expect(Tok::RBracket, "']'");
        c.guard = parse_expr();
        expect(Tok::Arrow, "'->'");
        c.alternatives.push_back(parse_alternative());
        while (accept(Tok::Plus)) {
            c.alternatives.push_back(parse_alternative());
        }
        expect(Tok::Semi, "';'");
        return c;
    }

    bool at_update_start() const {
        if (at(Tok::LParen) && peek().kind == Tok::Ident && peek(2).kind == Tok::Prime) {
            return true;
        }
        if (at(Tok::Ident) && peek().kind == Tok::Prime) {
            return true;
        }
        if (is_keyword("true") && (peek().kind == Tok::Semi || peek().kind == Tok::Plus)) {
            return true;
        }
        return false;
    }

    Alternative parse_alternative() {
        Alternative a;
        a.pos = cur().pos;
        if (!at_update_start()) {
            a.weight = parse_expr();
            expect(Tok::Colon, "':'");
        }
        if (is_keyword("true")) {
            take();
            return a;
        }
        a.updates.push_back(parse_update());
        while (accept(Tok::Amp)) {
            a.updates.push_back(parse_update());
        }
        return a;
    }

    Update parse_update() {
        const bool paren = accept(Tok::LParen);
        Update u;
        u.pos = cur().pos;
        u.var = expect(Tok::Ident, "variable name").text;
        expect(Tok::Prime, "'''");
        expect(Tok::Assign, "'='");
        u.value = parse_expr();
        if (paren) {
            expect(Tok::RParen, "')'");
        }
        return u;
    }

    ExprPtr parse_ite() {
        ExprPtr cond = parse_implies();
        if (at(Tok::Question)) {
            const SourcePos p = take().pos;
            ExprPtr then_e = parse_ite();
            expect(Tok::Colon, "':'");
            ExprPtr else_e = parse_ite();
            return Expr::node(Op::Ite, {cond, then_e, else_e}, p);
        }
        return cond;
    }

    ExprPtr parse_implies() {
        ExprPtr lhs = parse_iff();
        if (at(Tok::Implies)) {
            const SourcePos p = take().pos;
            return Expr::node(Op::Implies, {lhs, parse_implies()}, p);
        }
        return lhs;
    }

    ExprPtr parse_iff() {
        ExprPtr lhs = parse_or();
        while (at(Tok::Iff)) {
            const SourcePos p = take().pos;
            lhs = Expr::node(Op::Iff, {lhs, parse_or()}, p);
        }
        return lhs;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (at(Tok::Bar)) {
            const SourcePos p = take().pos;
            lhs = Expr::node(Op::Or, {lhs, parse_and()}, p);
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (at(Tok::Amp)) {
            const SourcePos p = take().pos;
            lhs = Expr::node(Op::And, {lhs, parse_not()}, p);
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (at(Tok::Bang)) {
            const SourcePos p = take().pos;
            return Expr::node(Op::Not, {parse_not()}, p);
        }
        return parse_rel();
    }

    ExprPtr parse_rel() {
        ExprPtr lhs = parse_add();
        Op op;
        switch (cur().kind) {
        case Tok::Assign: op = Op::Eq; break;
        case Tok::Ne: op = Op::Ne; break;
        case Tok::Lt: op = Op::Lt; break;
        case Tok::Le: op = Op::Le; break;
        case Tok::Gt: op = Op::Gt; break;
        case Tok::Ge: op = Op::Ge; break;
        default: return lhs;
        }
        const SourcePos p = take().pos;
        return Expr::node(op, {lhs, parse_add()}, p);
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            // Inside a command, "+" followed by an alternative ends the expression.
            if (at(Tok::Plus) && alternative_follows()) {
                break;
            }
            const Op op = at(Tok::Plus) ? Op::Add : Op::Sub;
            const SourcePos p = take().pos;
            lhs = Expr::node(op, {lhs, parse_mul()}, p);
        }
        return lhs;
    }

    // True when the "+" at the cursor separates alternatives: "... : (x'=1) + (y'=2)" is already
    // handled by the update loop; the ambiguous case is "+ true;" and "+ (x'=...)".
    bool alternative_follows() const {
        const Token& n = peek();
        if (n.kind == Tok::LParen && peek(2).kind == Tok::Ident && peek(3).kind == Tok::Prime) {
            return true;
        }
        if (n.kind == Tok::Ident && n.text == "true" &&
            (peek(2).kind == Tok::Semi || peek(2).kind == Tok::Plus)) {
            return true;
        }
        return false;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            const Op op = at(Tok::Star) ? Op::Mul : Op::Div;
            const SourcePos p = take().pos;
            lhs = Expr::node(op, {lhs, parse_unary()}, p);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at(Tok::Minus)) {
            const SourcePos p = take().pos;
            return Expr::node(Op::Neg, {parse_unary()}, p);
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = cur();
        switch (t.kind) {
        case Tok::Int: {
            take();
            return Expr::literal(Op::IntLit, arith::Rational(mpz_class(t.text, 10)), t.pos);
        }
        case Tok::Real: {
            take();
            auto q = arith::parse_rational(t.text);
            if (!q) {
                fail(t, "malformed number '" + t.text + "'");
            }
            return Expr::literal(Op::RealLit, *q, t.pos);
        }
        case Tok::String: take(); return Expr::label(t.text, t.pos);
        case Tok::LParen: {
            take();
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::Ident: {
            take();
            if (t.text == "true" || t.text == "false") {
                return Expr::bool_lit(t.text == "true", t.pos);
            }
            if (at(Tok::LParen)) {
                return parse_call(t);
            }
            return Expr::ident(t.text, t.pos);
        }
        default: fail(t, "expected expression, found " + describe(t));
        }
    }

    ExprPtr parse_call(const Token& name) {
        struct Fn {
            std::string_view name;
            Op op;
            std::size_t min_args, max_args;
        };
        static constexpr Fn fns[] = {
            {"min", Op::Min, 2, 64}, {"max", Op::Max, 2, 64},  {"floor", Op::Floor, 1, 1},
            {"ceil", Op::Ceil, 1, 1}, {"pow", Op::Pow, 2, 2}, {"mod", Op::Mod, 2, 2},
        };
        const Fn* fn = nullptr;
        for (const auto& f : fns) {
            if (f.name == name.text) {
                fn = &f;
            }
        }
        if (!fn) {
            throw ModelError(ErrorKind::Undeclared, name.pos, "unknown function '" + name.text + "'");
        }
        expect(Tok::LParen, "'('");
        std::vector<ExprPtr> args;
        args.push_back(parse_expr());
        while (accept(Tok::Comma)) {
            args.push_back(parse_expr());
        }
        expect(Tok::RParen, "')'");
        if (args.size() < fn->min_args || args.size() > fn->max_args) {
            throw ModelError(ErrorKind::Syntax, name.pos, "wrong number of arguments to '" + name.text + "'");
        }
        // min/max with more than two arguments fold left.
        if ((fn->op == Op::Min || fn->op == Op::Max) && args.size() > 2) {
            ExprPtr acc = Expr::node(fn->op, {args[0], args[1]}, name.pos);
            for (std::size_t i = 2; i < args.size(); ++i) {
                acc = Expr::node(fn->op, {acc, args[i]}, name.pos);
            }
            return acc;
        }
        return Expr::node(fn->op, std::move(args), name.pos);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace detail

void check_model(const ModelAst& ast);

/// Parses model text and runs the static checks that do not need constant overrides.
inline ModelAst parse_model(std::string_view text) {
    detail::Parser p(text);
    ModelAst ast = p.parse_model();
    check_model(ast);
    return ast;
}

/// Parses a standalone expression (no static checks).
inline ExprPtr parse_expression(std::string_view text) {
    detail::Parser p(text);
    return p.parse_expression_only();
}

} // namespace symblicit::lang

#include "symblicit/lang/check.hpp"
