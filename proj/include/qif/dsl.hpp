#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qif/hmm.hpp"
#include "qif/rational.hpp"
#include "qif/value.hpp"

namespace qif::dsl {

struct SrcPos {
    int line = 0;
    int col = 0;
};

enum class BinOp { Add, Sub, Mul, Mod, Div, Eq, Ne, Lt, Le };

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

/// Expression node. The checker fills the resolution fields (variable/map
/// indices, enum ids) so evaluation is purely index-based.
struct Expr {
    enum class Kind { Var, IntLit, BoolLit, SymLit, Succ, Pred, MapApp, Bin };
    Kind kind{};
    SrcPos pos;
    std::string name;      // Var, SymLit, MapApp
    long long int_val = 0; // IntLit
    bool bool_val = false; // BoolLit
    ExprPtr a, b;          // operands
    BinOp op{};            // Bin

    // resolved by the checker
    int var_index = -1;  // Var
    int map_index = -1;  // MapApp
    int enum_id = -1;    // SymLit: owning enum domain
    int sym_index = -1;  // SymLit: index within it
};

struct DistChoice {
    ExprPtr value;
    Rat weight;
};

/// Weighted choice over expressions; `uniform {..}` fills equal weights.
struct DistExpr {
    SrcPos pos;
    bool uniform = false;
    std::vector<DistChoice> choices;
};

struct Stmt;
using StmtList = std::vector<Stmt>;

struct Stmt {
    enum class Kind { Assign, Leak, If, While };
    Kind kind{};
    SrcPos pos;
    std::string var_name; // Assign
    int var_index = -1;   // Assign (resolved)
    DistExpr dist;        // Assign, Leak
    ExprPtr guard;        // If, While
    StmtList then_body;   // If
    StmtList else_body;   // If
    StmtList body;        // While
    long long unroll = 0; // While
};

/// A declared finite domain: either a bounded integer range or an
/// enumeration of literals (symbols or integers).
struct DomainDecl {
    bool is_range = false;
    long long lo = 0, hi = 0;
    std::vector<Value> values; // ordered elements, both forms
    bool int_elems = false;    // all elements are integers
};

struct VarDecl {
    std::string name;
    SrcPos pos;
    DomainDecl dom;
};

/// A named total mapping between two declared domains, stored as an index
/// table aligned with the source domain.
struct MapDecl {
    std::string name;
    SrcPos pos;
    DomainDecl from, to;
    std::vector<std::size_t> table;
};

struct Program {
    std::vector<VarDecl> vars;
    std::vector<MapDecl> maps;
    StmtList body;
};

/// Parse and statically check a source text. Errors carry line:col.
Program parse(const std::string& source);

/// The ordered product of all declared variable domains (lexicographic,
/// first declaration most significant). One variable yields its bare
/// domain; several yield tuples. Cap-checked.
DomainPtr state_space(const Program& p);

struct CompileOptions {
    std::optional<long long> unroll_override; ///< replaces every loop bound
};

/// Compile to HMM steps: assignments become pure markovs, leaks pure
/// channels, conditionals merge their branch markovs under the guard, and
/// loops unroll their bound exactly (checked: the guard must be dead in
/// every state afterwards). Within each straight-line run, markov runs are
/// multiplied together and each channel captures the markov run after it.
HmmSteps compile(const Program& p, const CompileOptions& opts = {});

/// Built-in demonstration programs.
std::string demo_passwords_lax();
std::string demo_passwords_strict();
std::string demo_expmod(int bits, const std::vector<int>& divisors);

} // namespace qif::dsl
