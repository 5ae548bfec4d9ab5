#include <algorithm>
#include <map>
#include <set>

#include "qif/dsl.hpp"
#include "qif/error.hpp"

namespace qif::dsl {

namespace {

// ---------------------------------------------------------------- lexing

enum class Tok {
    Ident, Int, KwVar, KwMap, KwInt, KwUniform, KwChoose, KwLeak,
    KwIf, KwThen, KwElse, KwFi, KwWhile, KwDo, KwOd, KwUnroll,
    KwSucc, KwPred, KwTrue, KwFalse, KwMod, KwDiv,
    LBrace, RBrace, LParen, RParen, LBracket, RBracket,
    Colon, Comma, At, Semi, DotDot, Arrow, LeftArrow,
    Plus, Minus, Star, Slash, EqEq, Ne, Lt, Le, Eof
};

struct Token {
    Tok kind;
    std::string text;
    long long num = 0;
    SrcPos pos;
};

const std::map<std::string, Tok>& keywords() {
    static const std::map<std::string, Tok> kw = {
        {"var", Tok::KwVar},       {"map", Tok::KwMap},     {"int", Tok::KwInt},
        {"uniform", Tok::KwUniform}, {"choose", Tok::KwChoose}, {"leak", Tok::KwLeak},
        {"if", Tok::KwIf},         {"then", Tok::KwThen},   {"else", Tok::KwElse},
        {"fi", Tok::KwFi},         {"while", Tok::KwWhile}, {"do", Tok::KwDo},
        {"od", Tok::KwOd},         {"unroll", Tok::KwUnroll},
        {"succ", Tok::KwSucc},     {"pred", Tok::KwPred},
        {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
        {"mod", Tok::KwMod},       {"div", Tok::KwDiv},
    };
    return kw;
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto peek = [&](std::size_t k = 0) -> char {
        return i + k < src.size() ? src[i + k] : '\0';
    };
    auto advance = [&]() {
        if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
        ++i;
    };
    while (i < src.size()) {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(); continue; }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        SrcPos pos{line, col};
        auto push = [&](Tok k, std::string text) {
            out.push_back(Token{k, std::move(text), 0, pos});
        };
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                word += peek();
                advance();
            }
            auto it = keywords().find(word);
            if (it != keywords().end()) push(it->second, word);
            else push(Tok::Ident, word);
            continue;
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (isdigit(static_cast<unsigned char>(peek()))) {
                num += peek();
                advance();
            }
            Token t{Tok::Int, num, std::stoll(num), pos};
            out.push_back(t);
            continue;
        }
        auto two = [&](char a, char b) { return c == a && peek(1) == b; };
        if (two('.', '.')) { advance(); advance(); push(Tok::DotDot, ".."); continue; }
        if (two('-', '>')) { advance(); advance(); push(Tok::Arrow, "->"); continue; }
        if (two('<', '-')) { advance(); advance(); push(Tok::LeftArrow, "<-"); continue; }
        if (two('=', '=')) { advance(); advance(); push(Tok::EqEq, "=="); continue; }
        if (two('!', '=')) { advance(); advance(); push(Tok::Ne, "!="); continue; }
        if (two('<', '=')) { advance(); advance(); push(Tok::Le, "<="); continue; }
        switch (c) {
        case '{': advance(); push(Tok::LBrace, "{"); continue;
        case '}': advance(); push(Tok::RBrace, "}"); continue;
        case '(': advance(); push(Tok::LParen, "("); continue;
        case ')': advance(); push(Tok::RParen, ")"); continue;
        case '[': advance(); push(Tok::LBracket, "["); continue;
        case ']': advance(); push(Tok::RBracket, "]"); continue;
        case ':': advance(); push(Tok::Colon, ":"); continue;
        case ',': advance(); push(Tok::Comma, ","); continue;
        case '@': advance(); push(Tok::At, "@"); continue;
        case ';': advance(); push(Tok::Semi, ";"); continue;
        case '+': advance(); push(Tok::Plus, "+"); continue;
        case '-': advance(); push(Tok::Minus, "-"); continue;
        case '*': advance(); push(Tok::Star, "*"); continue;
        case '/': advance(); push(Tok::Slash, "/"); continue;
        case '<': advance(); push(Tok::Lt, "<"); continue;
        default:
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::Eof, "", 0, SrcPos{line, col}});
    return out;
}

// --------------------------------------------------------------- parsing

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program parse_program() {
        Program p;
        while (at(Tok::KwVar) || at(Tok::KwMap)) {
            if (at(Tok::KwVar)) p.vars.push_back(parse_var(p));
            else p.maps.push_back(parse_map(p));
            skip_semis();
        }
        p.body = parse_stmts({Tok::Eof});
        expect(Tok::Eof, "end of input");
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;

    const Token& cur() const { return toks_[at_]; }
    bool at(Tok k) const { return cur().kind == k; }
    Token take() { return toks_[at_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().pos.line, cur().pos.col, msg);
    }
    Token expect(Tok k, const std::string& what) {
        if (!at(k)) fail("expected " + what + ", found '" + cur().text + "'");
        return take();
    }
    void skip_semis() {
        while (at(Tok::Semi)) take();
    }

    DomainDecl parse_domain(const Program& p) {
        DomainDecl d;
        if (at(Tok::KwInt)) {
            take();
            expect(Tok::LBracket, "'['");
            bool neg_lo = at(Tok::Minus);
            if (neg_lo) take();
            long long lo = expect(Tok::Int, "integer").num * (neg_lo ? -1 : 1);
            expect(Tok::DotDot, "'..'");
            bool neg_hi = at(Tok::Minus);
            if (neg_hi) take();
            long long hi = expect(Tok::Int, "integer").num * (neg_hi ? -1 : 1);
            expect(Tok::RBracket, "']'");
            if (hi < lo) fail("empty integer range");
            d.is_range = true;
            d.lo = lo;
            d.hi = hi;
            d.int_elems = true;
            for (long long v = lo; v <= hi; ++v) d.values.push_back(Value::integer(v));
            return d;
        }
        if (at(Tok::LBrace)) {
            take();
            bool any_sym = false, any_int = false;
            for (;;) {
                if (at(Tok::Ident)) {
                    d.values.push_back(Value::symbol(take().text));
                    any_sym = true;
                } else if (at(Tok::Int) || at(Tok::Minus)) {
                    bool neg = at(Tok::Minus);
                    if (neg) take();
                    d.values.push_back(Value::integer(expect(Tok::Int, "integer").num * (neg ? -1 : 1)));
                    any_int = true;
                } else {
                    fail("expected a domain element");
                }
                if (at(Tok::Comma)) { take(); continue; }
                break;
            }
            expect(Tok::RBrace, "'}'");
            if (any_sym && any_int) fail("domain mixes symbols and integers");
            d.int_elems = any_int;
            std::set<Value> seen(d.values.begin(), d.values.end());
            if (seen.size() != d.values.size()) fail("duplicate domain element");
            return d;
        }
        if (at(Tok::Ident)) {
            // reference to a declared variable's domain
            Token t = take();
            for (const auto& v : p.vars)
                if (v.name == t.text) return v.dom;
            throw ParseError(t.pos.line, t.pos.col,
                             "unknown domain reference '" + t.text + "'");
        }
        fail("expected a domain");
    }

    VarDecl parse_var(const Program& p) {
        Token kw = expect(Tok::KwVar, "'var'");
        VarDecl v;
        v.pos = kw.pos;
        v.name = expect(Tok::Ident, "variable name").text;
        for (const auto& prev : p.vars)
            if (prev.name == v.name)
                throw ParseError(kw.pos.line, kw.pos.col,
                                 "variable '" + v.name + "' redeclared");
        expect(Tok::Colon, "':'");
        v.dom = parse_domain(p);
        return v;
    }

    MapDecl parse_map(const Program& p) {
        Token kw = expect(Tok::KwMap, "'map'");
        MapDecl m;
        m.pos = kw.pos;
        m.name = expect(Tok::Ident, "map name").text;
        expect(Tok::Colon, "':'");
        m.from = parse_domain(p);
        expect(Tok::Arrow, "'->'");
        m.to = parse_domain(p);
        expect(Tok::LBrace, "'{'");
        std::map<std::size_t, std::size_t> entries;
        for (;;) {
            Value key = parse_literal(m.from);
            expect(Tok::Arrow, "'->'");
            Value val = parse_literal(m.to);
            std::size_t ki = index_of(m.from.values, key);
            if (entries.count(ki)) fail("duplicate map key " + key.to_string());
            entries[ki] = index_of(m.to.values, val);
            if (at(Tok::Comma)) { take(); continue; }
            break;
        }
        expect(Tok::RBrace, "'}'");
        if (entries.size() != m.from.values.size())
            throw ParseError(kw.pos.line, kw.pos.col,
                             "map '" + m.name + "' is not total over its domain");
        m.table.resize(m.from.values.size());
        for (auto& [k, v] : entries) m.table[k] = v;
        return m;
    }

    std::size_t index_of(const std::vector<Value>& vals, const Value& v) {
        auto it = std::find(vals.begin(), vals.end(), v);
        if (it == vals.end()) fail("literal " + v.to_string() + " not in domain");
        return static_cast<std::size_t>(it - vals.begin());
    }

    Value parse_literal(const DomainDecl& dom) {
        if (at(Tok::Ident)) return Value::symbol(take().text);
        bool neg = at(Tok::Minus);
        if (neg) take();
        if (at(Tok::Int)) return Value::integer(take().num * (neg ? -1 : 1));
        (void)dom;
        fail("expected a literal");
    }

    StmtList parse_stmts(std::initializer_list<Tok> stops) {
        StmtList out;
        auto stopped = [&] {
            for (Tok s : stops)
                if (at(s)) return true;
            return false;
        };
        skip_semis();
        while (!stopped()) {
            out.push_back(parse_stmt());
            skip_semis();
        }
        return out;
    }

    Stmt parse_stmt() {
        if (at(Tok::KwLeak)) {
            Token kw = take();
            Stmt s;
            s.kind = Stmt::Kind::Leak;
            s.pos = kw.pos;
            s.dist = parse_dist_expr();
            return s;
        }
        if (at(Tok::KwIf)) {
            Token kw = take();
            Stmt s;
            s.kind = Stmt::Kind::If;
            s.pos = kw.pos;
            s.guard = parse_expr();
            expect(Tok::KwThen, "'then'");
            s.then_body = parse_stmts({Tok::KwElse, Tok::KwFi});
            if (at(Tok::KwElse)) {
                take();
                s.else_body = parse_stmts({Tok::KwFi});
            }
            expect(Tok::KwFi, "'fi'");
            return s;
        }
        if (at(Tok::KwWhile)) {
            Token kw = take();
            Stmt s;
            s.kind = Stmt::Kind::While;
            s.pos = kw.pos;
            s.guard = parse_expr();
            expect(Tok::KwDo, "'do'");
            s.body = parse_stmts({Tok::KwOd});
            expect(Tok::KwOd, "'od'");
            expect(Tok::KwUnroll, "'unroll' (loops carry an explicit bound)");
            s.unroll = expect(Tok::Int, "unroll bound").num;
            return s;
        }
        if (at(Tok::Ident)) {
            Token name = take();
            expect(Tok::LeftArrow, "'<-'");
            Stmt s;
            s.kind = Stmt::Kind::Assign;
            s.pos = name.pos;
            s.var_name = name.text;
            s.dist = parse_dist_expr();
            return s;
        }
        fail("expected a statement");
    }

    DistExpr parse_dist_expr() {
        DistExpr d;
        d.pos = cur().pos;
        if (at(Tok::KwUniform)) {
            take();
            d.uniform = true;
            expect(Tok::LBrace, "'{'");
            std::vector<ExprPtr> exprs;
            for (;;) {
                exprs.push_back(parse_expr());
                if (at(Tok::Comma)) { take(); continue; }
                break;
            }
            expect(Tok::RBrace, "'}'");
            Rat w = rat(1, static_cast<long>(exprs.size()));
            for (auto& e : exprs) d.choices.push_back(DistChoice{e, w});
            return d;
        }
        if (at(Tok::KwChoose)) {
            take();
            expect(Tok::LBrace, "'{'");
            Rat total = 0;
            for (;;) {
                DistChoice c;
                c.value = parse_expr();
                expect(Tok::At, "'@'");
                c.weight = parse_rat();
                if (sgn(c.weight) <= 0)
                    fail("choice weights must be positive");
                total += c.weight;
                d.choices.push_back(std::move(c));
                if (at(Tok::Comma)) { take(); continue; }
                break;
            }
            expect(Tok::RBrace, "'}'");
            if (total != 1) fail("choice weights sum to " + rat_str(total) + ", not 1");
            return d;
        }
        fail("expected 'uniform {...}' or 'choose {...}'");
    }

    Rat parse_rat() {
        long long num = expect(Tok::Int, "weight").num;
        if (at(Tok::Slash)) {
            take();
            long long den = expect(Tok::Int, "weight denominator").num;
            if (den == 0) fail("weight with zero denominator");
            return rat(num, den);
        }
        return rat(num, 1);
    }

    ExprPtr parse_expr() { return parse_cmp(); }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_add();
        if (at(Tok::EqEq) || at(Tok::Ne) || at(Tok::Lt) || at(Tok::Le)) {
            Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Bin;
            e->pos = t.pos;
            e->op = t.kind == Tok::EqEq ? BinOp::Eq
                  : t.kind == Tok::Ne   ? BinOp::Ne
                  : t.kind == Tok::Lt   ? BinOp::Lt
                                        : BinOp::Le;
            e->a = lhs;
            e->b = parse_add();
            return e;
        }
        return lhs;
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Bin;
            e->pos = t.pos;
            e->op = t.kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
            e->a = lhs;
            e->b = parse_mul();
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (at(Tok::Star) || at(Tok::KwMod) || at(Tok::KwDiv)) {
            Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Bin;
            e->pos = t.pos;
            e->op = t.kind == Tok::Star ? BinOp::Mul
                  : t.kind == Tok::KwMod ? BinOp::Mod
                                         : BinOp::Div;
            e->a = lhs;
            e->b = parse_unary();
            lhs = e;
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at(Tok::KwSucc) || at(Tok::KwPred)) {
            Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = t.kind == Tok::KwSucc ? Expr::Kind::Succ : Expr::Kind::Pred;
            e->pos = t.pos;
            expect(Tok::LParen, "'('");
            e->a = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (at(Tok::LParen)) {
            take();
            ExprPtr inner = parse_expr();
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (at(Tok::Minus)) {
            Token t = take();
            Token n = expect(Tok::Int, "integer after unary minus");
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::IntLit;
            e->pos = t.pos;
            e->int_val = -n.num;
            return e;
        }
        if (at(Tok::Int)) {
            Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::IntLit;
            e->pos = t.pos;
            e->int_val = t.num;
            return e;
        }
        if (at(Tok::KwTrue) || at(Tok::KwFalse)) {
            Token t = take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::BoolLit;
            e->pos = t.pos;
            e->bool_val = t.kind == Tok::KwTrue;
            return e;
        }
        if (at(Tok::Ident)) {
            Token t = take();
            if (at(Tok::LParen)) {
                take();
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::MapApp;
                e->pos = t.pos;
                e->name = t.text;
                e->a = parse_expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Var; // may resolve to a symbol literal later
            e->pos = t.pos;
            e->name = t.text;
            return e;
        }
        fail("expected an expression");
    }
};

} // namespace

// the checker lives in dsl_check.cpp
Program check(Program p);

Program parse(const std::string& source) {
    Parser parser(lex(source));
    return check(parser.parse_program());
}

} // namespace qif::dsl
