#pragma once

#include "symblicit/lang/ast.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace symblicit::lang {

enum class Tok {
    End,
    Ident,
    Int,
    Real,
    String,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Colon,
    Comma,
    Prime,
    Assign, // =
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Amp,
    Bar,
    Bang,
    Implies, // =>
    Iff,     // <=>
    Arrow,   // ->
    Question,
    DotDot,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

inline const char* token_name(Tok t) {
    switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Real: return "number";
    case Tok::String: return "string";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Prime: return "'''";
    case Tok::Assign: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::Implies: return "'=>'";
    case Tok::Iff: return "'<=>'";
    case Tok::Arrow: return "'->'";
    case Tok::Question: return "'?'";
    case Tok::DotDot: return "'..'";
    }
    return "token";
}

/// Splits model or property text into tokens. `//` starts a line comment.
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto peek = [&](std::size_t k) -> char { return i + k < src.size() ? src[i + k] : '\0'; };

    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token t;
        t.pos = {line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t n = 0;
            while (i + n < src.size() && (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_')) {
                ++n;
            }
            t.kind = Tok::Ident;
            t.text = std::string(src.substr(i, n));
            advance(n);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            std::size_t n = 0;
            bool real = false;
            while (std::isdigit(static_cast<unsigned char>(peek(n)))) {
                ++n;
            }
            // "0..5" is a range, not a real literal.
            if (peek(n) == '.' && peek(n + 1) != '.') {
                real = true;
                ++n;
                while (std::isdigit(static_cast<unsigned char>(peek(n)))) {
                    ++n;
                }
            }
            if (peek(n) == 'e' || peek(n) == 'E') {
                std::size_t m = n + 1;
                if (peek(m) == '+' || peek(m) == '-') {
                    ++m;
                }
                if (std::isdigit(static_cast<unsigned char>(peek(m)))) {
                    real = true;
                    n = m;
                    while (std::isdigit(static_cast<unsigned char>(peek(n)))) {
                        ++n;
                    }
                }
            }
            t.kind = real ? Tok::Real : Tok::Int;
            t.text = std::string(src.substr(i, n));
            advance(n);
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"') {
            std::size_t n = 1;
            while (i + n < src.size() && src[i + n] != '"' && src[i + n] != '\n') {
                ++n;
            }
            if (i + n >= src.size() || src[i + n] != '"') {
                throw ModelError(ErrorKind::Syntax, t.pos, "unterminated string");
            }
            t.kind = Tok::String;
            t.text = std::string(src.substr(i + 1, n - 1));
            advance(n + 1);
            out.push_back(std::move(t));
            continue;
        }
        auto emit = [&](Tok k, std::size_t n) {
            t.kind = k;
            t.text = std::string(src.substr(i, n));
            advance(n);
            out.push_back(t);
        };
        switch (c) {
        case '[': emit(Tok::LBracket, 1); break;
        case ']': emit(Tok::RBracket, 1); break;
        case '(': emit(Tok::LParen, 1); break;
        case ')': emit(Tok::RParen, 1); break;
        case '{': emit(Tok::LBrace, 1); break;
        case '}': emit(Tok::RBrace, 1); break;
        case ';': emit(Tok::Semi, 1); break;
        case ':': emit(Tok::Colon, 1); break;
        case ',': emit(Tok::Comma, 1); break;
        case '\'': emit(Tok::Prime, 1); break;
        case '+': emit(Tok::Plus, 1); break;
        case '*': emit(Tok::Star, 1); break;
        case '/': emit(Tok::Slash, 1); break;
        case '&': emit(Tok::Amp, 1); break;
        case '|': emit(Tok::Bar, 1); break;
        case '?': emit(Tok::Question, 1); break;
        case '-': peek(1) == '>' ? emit(Tok::Arrow, 2) : emit(Tok::Minus, 1); break;
        case '=': peek(1) == '>' ? emit(Tok::Implies, 2) : emit(Tok::Assign, 1); break;
        case '!': peek(1) == '=' ? emit(Tok::Ne, 2) : emit(Tok::Bang, 1); break;
        case '>': peek(1) == '=' ? emit(Tok::Ge, 2) : emit(Tok::Gt, 1); break;
        case '<':
            if (peek(1) == '=' && peek(2) == '>') {
                emit(Tok::Iff, 3);
            } else if (peek(1) == '=') {
                emit(Tok::Le, 2);
            } else {
                emit(Tok::Lt, 1);
            }
            break;
        case '.':
            if (peek(1) == '.') {
                emit(Tok::DotDot, 2);
                break;
            }
            [[fallthrough]];
        default:
            throw ModelError(ErrorKind::Syntax, t.pos, std::string("unexpected character '") + c + "'");
        }
    }
    Token end;
    end.kind = Tok::End;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

} // namespace symblicit::lang
