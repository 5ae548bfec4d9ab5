#include <map>
#include <vector>

#include "qif/dsl.hpp"
#include "qif/error.hpp"

namespace qif::dsl {

// Static checking: resolve identifiers (variable vs enum literal vs map),
// type every expression against the finite domains, and enforce the
// statement-level restrictions (boolean guards, leak-free branches,
// explicit loop bounds). Runs once after parsing; compilation can then
// evaluate purely by index.

namespace {

struct Type {
    enum K { Int, Bool, Enum } k = Int;
    int enum_id = -1;
    bool operator==(const Type& o) const { return k == o.k && enum_id == o.enum_id; }
};

std::string type_name(const Type& t) {
    switch (t.k) {
    case Type::Int: return "int";
    case Type::Bool: return "bool";
    default: return "enum#" + std::to_string(t.enum_id);
    }
}

class Checker {
public:
    explicit Checker(Program& p) : p_(p) {
        for (std::size_t i = 0; i < p.vars.size(); ++i) {
            if (!p.vars[i].dom.int_elems && !p.vars[i].dom.is_range)
                intern_enum(p.vars[i].dom.values);
        }
        for (const auto& m : p.maps) {
            if (!m.from.int_elems && !m.from.is_range) intern_enum(m.from.values);
            if (!m.to.int_elems && !m.to.is_range) intern_enum(m.to.values);
        }
    }

    void run() {
        check_stmts(p_.body, false);
    }

    const std::vector<std::vector<Value>>& enums() const { return enums_; }

private:
    Program& p_;
    std::vector<std::vector<Value>> enums_;

    int intern_enum(const std::vector<Value>& values) {
        for (std::size_t i = 0; i < enums_.size(); ++i)
            if (enums_[i] == values) return static_cast<int>(i);
        enums_.push_back(values);
        return static_cast<int>(enums_.size()) - 1;
    }

    Type domain_type(const DomainDecl& d) {
        if (d.int_elems || d.is_range) return Type{Type::Int, -1};
        // safe: interned in the constructor
        Type t{Type::Enum, -1};
        for (std::size_t i = 0; i < enums_.size(); ++i)
            if (enums_[i] == d.values) t.enum_id = static_cast<int>(i);
        return t;
    }

    int find_var(const std::string& name) const {
        for (std::size_t i = 0; i < p_.vars.size(); ++i)
            if (p_.vars[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int find_map(const std::string& name) const {
        for (std::size_t i = 0; i < p_.maps.size(); ++i)
            if (p_.maps[i].name == name) return static_cast<int>(i);
        return -1;
    }

    [[noreturn]] static void fail(const SrcPos& pos, const std::string& msg) {
        throw ParseError(pos.line, pos.col, msg);
    }

    Type check_expr(Expr& e) {
        switch (e.kind) {
        case Expr::Kind::IntLit:
            return Type{Type::Int, -1};
        case Expr::Kind::BoolLit:
            return Type{Type::Bool, -1};
        case Expr::Kind::Var: {
            int vi = find_var(e.name);
            if (vi >= 0) {
                e.var_index = vi;
                return domain_type(p_.vars[vi].dom);
            }
            // not a variable: try to resolve as an enum literal
            Value sym = Value::symbol(e.name);
            int owner = -1, where = -1;
            for (std::size_t d = 0; d < enums_.size(); ++d)
                for (std::size_t i = 0; i < enums_[d].size(); ++i)
                    if (enums_[d][i] == sym) {
                        if (owner >= 0 && owner != static_cast<int>(d))
                            fail(e.pos, "literal '" + e.name +
                                            "' is ambiguous between enum domains");
                        owner = static_cast<int>(d);
                        where = static_cast<int>(i);
                    }
            if (owner < 0)
                fail(e.pos, "unknown identifier '" + e.name + "'");
            e.kind = Expr::Kind::SymLit;
            e.enum_id = owner;
            e.sym_index = where;
            return Type{Type::Enum, owner};
        }
        case Expr::Kind::SymLit:
            return Type{Type::Enum, e.enum_id};
        case Expr::Kind::Succ:
        case Expr::Kind::Pred: {
            Type t = check_expr(*e.a);
            if (t.k != Type::Enum)
                fail(e.pos, "succ/pred apply to enum values only (use +1/-1 on integers)");
            return t;
        }
        case Expr::Kind::MapApp: {
            int mi = find_map(e.name);
            if (mi < 0) fail(e.pos, "unknown map '" + e.name + "'");
            e.map_index = mi;
            Type arg = check_expr(*e.a);
            Type from = domain_type(p_.maps[mi].from);
            if (!(arg == from))
                fail(e.pos, "map '" + e.name + "' expects " + type_name(from) +
                                ", got " + type_name(arg));
            return domain_type(p_.maps[mi].to);
        }
        case Expr::Kind::Bin: {
            Type ta = check_expr(*e.a);
            Type tb = check_expr(*e.b);
            switch (e.op) {
            case BinOp::Add:
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Mod:
            case BinOp::Div:
                if (ta.k != Type::Int || tb.k != Type::Int)
                    fail(e.pos, "arithmetic needs integer operands");
                return Type{Type::Int, -1};
            case BinOp::Eq:
            case BinOp::Ne:
                if (!(ta == tb))
                    fail(e.pos, "comparison between " + type_name(ta) + " and " +
                                    type_name(tb));
                return Type{Type::Bool, -1};
            case BinOp::Lt:
            case BinOp::Le:
                if (!(ta == tb) || ta.k == Type::Bool)
                    fail(e.pos, "ordering needs two integers or two enums of one domain");
                return Type{Type::Bool, -1};
            }
            fail(e.pos, "unreachable");
        }
        }
        fail(e.pos, "unreachable");
    }

    Type check_dist(DistExpr& d) {
        Type t{};
        for (std::size_t i = 0; i < d.choices.size(); ++i) {
            Type ct = check_expr(*d.choices[i].value);
            if (i == 0) t = ct;
            else if (!(ct == t))
                fail(d.pos, "choices mix " + type_name(t) + " and " + type_name(ct));
        }
        return t;
    }

    static bool has_leak(const StmtList& stmts) {
        for (const auto& s : stmts) {
            switch (s.kind) {
            case Stmt::Kind::Leak: return true;
            case Stmt::Kind::If:
                if (has_leak(s.then_body) || has_leak(s.else_body)) return true;
                break;
            case Stmt::Kind::While:
                if (has_leak(s.body)) return true;
                break;
            default: break;
            }
        }
        return false;
    }

    void check_stmts(StmtList& stmts, bool inside_branch) {
        for (auto& s : stmts) {
            switch (s.kind) {
            case Stmt::Kind::Assign: {
                int vi = find_var(s.var_name);
                if (vi < 0) fail(s.pos, "assignment to undeclared variable '" + s.var_name + "'");
                s.var_index = vi;
                Type vt = domain_type(p_.vars[vi].dom);
                Type dt = check_dist(s.dist);
                if (!(vt == dt))
                    fail(s.pos, "assigning " + type_name(dt) + " to " + type_name(vt) +
                                    " variable '" + s.var_name + "'");
                // overflow that is visible statically: literal outside the domain
                for (const auto& c : s.dist.choices) {
                    if (c.value->kind == Expr::Kind::IntLit) {
                        Value v = Value::integer(c.value->int_val);
                        const auto& dom = p_.vars[vi].dom.values;
                        if (std::find(dom.begin(), dom.end(), v) == dom.end())
                            fail(c.value->pos, "literal " + v.to_string() +
                                                   " outside the domain of '" +
                                                   s.var_name + "'");
                    }
                }
                break;
            }
            case Stmt::Kind::Leak:
                if (inside_branch)
                    fail(s.pos, "leak statements are not allowed inside if branches");
                check_dist(s.dist);
                break;
            case Stmt::Kind::If: {
                Type g = check_expr(*s.guard);
                if (g.k != Type::Bool) fail(s.pos, "if guard must be boolean");
                if (has_leak(s.then_body) || has_leak(s.else_body))
                    fail(s.pos, "leak statements are not allowed inside if branches");
                check_stmts(s.then_body, true);
                check_stmts(s.else_body, true);
                break;
            }
            case Stmt::Kind::While: {
                Type g = check_expr(*s.guard);
                if (g.k != Type::Bool) fail(s.pos, "while guard must be boolean");
                if (s.unroll < 0) fail(s.pos, "unroll bound must be nonnegative");
                check_stmts(s.body, inside_branch);
                break;
            }
            }
        }
    }
};

} // namespace

Program check(Program p) {
    Checker checker(p);
    checker.run();
    return p;
}

} // namespace qif::dsl
