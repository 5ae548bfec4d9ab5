#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "qif/caps.hpp"
#include "qif/dsl.hpp"
#include "qif/error.hpp"

namespace qif::dsl {

namespace {

// ------------------------------------------------------------- evaluation

struct RtVal {
    enum K { I, B, S } k = I;
    long long i = 0;
    bool b = false;
    int enum_id = -1;
    int idx = -1;

    bool same(const RtVal& o) const {
        if (k != o.k) return false;
        switch (k) {
        case I: return i == o.i;
        case B: return b == o.b;
        default: return enum_id == o.enum_id && idx == o.idx;
        }
    }
};

long long floordiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long floormod(long long a, long long b) {
    long long r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? r + b : r;
}

class Compiler {
public:
    Compiler(const Program& p, const CompileOptions& opts) : p_(p), opts_(opts) {
        for (const auto& v : p.vars) {
            if (!v.dom.int_elems && !v.dom.is_range) intern_enum(v.dom.values);
        }
        for (const auto& m : p.maps) {
            if (!m.from.int_elems && !m.from.is_range) intern_enum(m.from.values);
            if (!m.to.int_elems && !m.to.is_range) intern_enum(m.to.values);
        }
        build_state_space();
    }

    DomainPtr states() const { return states_; }

    HmmSteps compile() {
        HmmSteps steps = compile_stmts(p_.body);
        if (steps.empty())
            steps.push_back(HmmStep{null_channel(states_), identity_matrix(states_)});
        return steps;
    }

private:
    const Program& p_;
    const CompileOptions& opts_;
    std::vector<std::vector<Value>> enums_; // same interning order as the checker
    DomainPtr states_;
    std::vector<std::size_t> sizes_;   // per-variable domain size
    std::vector<std::size_t> strides_; // mixed-radix strides, first var major
    std::size_t nstates_ = 0;

    int intern_enum(const std::vector<Value>& values) {
        for (std::size_t i = 0; i < enums_.size(); ++i)
            if (enums_[i] == values) return static_cast<int>(i);
        enums_.push_back(values);
        return static_cast<int>(enums_.size()) - 1;
    }

    int enum_of(const DomainDecl& d) const {
        for (std::size_t i = 0; i < enums_.size(); ++i)
            if (enums_[i] == d.values) return static_cast<int>(i);
        return -1;
    }

    void build_state_space() {
        nstates_ = 1;
        sizes_.clear();
        for (const auto& v : p_.vars) {
            sizes_.push_back(v.dom.values.size());
            if (v.dom.values.empty()) throw DomainError("empty variable domain");
            nstates_ *= v.dom.values.size();
            if (nstates_ > caps().max_states)
                throw CapError("max-states", "state space exceeds the state cap");
        }
        strides_.assign(sizes_.size(), 1);
        for (std::size_t i = sizes_.size(); i-- > 1;)
            strides_[i - 1] = strides_[i] * sizes_[i];
        Domain d;
        d.reserve(nstates_);
        if (p_.vars.empty()) {
            d.push_back(Value::unit());
        } else if (p_.vars.size() == 1) {
            d = p_.vars[0].dom.values;
        } else {
            for (std::size_t s = 0; s < nstates_; ++s) {
                Value::Tuple parts;
                parts.reserve(sizes_.size());
                std::size_t rem = s;
                for (std::size_t v = 0; v < sizes_.size(); ++v) {
                    std::size_t k = rem / strides_[v];
                    rem %= strides_[v];
                    parts.push_back(p_.vars[v].dom.values[k]);
                }
                d.push_back(Value::tuple(std::move(parts)));
            }
        }
        states_ = std::make_shared<const Domain>(std::move(d));
    }

    void decode(std::size_t state, std::vector<std::size_t>& ix) const {
        std::size_t rem = state;
        for (std::size_t v = 0; v < sizes_.size(); ++v) {
            ix[v] = rem / strides_[v];
            rem %= strides_[v];
        }
    }

    RtVal var_value(std::size_t var, std::size_t value_index) const {
        const DomainDecl& dom = p_.vars[var].dom;
        if (dom.int_elems || dom.is_range) {
            RtVal r;
            r.k = RtVal::I;
            r.i = dom.values[value_index].as_int();
            return r;
        }
        RtVal r;
        r.k = RtVal::S;
        r.enum_id = enum_of(dom);
        r.idx = static_cast<int>(value_index);
        return r;
    }

    RtVal eval(const Expr& e, const std::vector<std::size_t>& ix) const {
        switch (e.kind) {
        case Expr::Kind::IntLit: {
            RtVal r; r.k = RtVal::I; r.i = e.int_val; return r;
        }
        case Expr::Kind::BoolLit: {
            RtVal r; r.k = RtVal::B; r.b = e.bool_val; return r;
        }
        case Expr::Kind::SymLit: {
            RtVal r; r.k = RtVal::S; r.enum_id = e.enum_id; r.idx = e.sym_index; return r;
        }
        case Expr::Kind::Var:
            return var_value(static_cast<std::size_t>(e.var_index), ix[e.var_index]);
        case Expr::Kind::Succ:
        case Expr::Kind::Pred: {
            RtVal a = eval(*e.a, ix);
            auto n = static_cast<int>(enums_[a.enum_id].size());
            RtVal r = a;
            r.idx = e.kind == Expr::Kind::Succ ? (a.idx + 1) % n : (a.idx + n - 1) % n;
            return r;
        }
        case Expr::Kind::MapApp: {
            const MapDecl& m = p_.maps[e.map_index];
            RtVal a = eval(*e.a, ix);
            std::size_t key;
            if (a.k == RtVal::S) {
                key = static_cast<std::size_t>(a.idx);
            } else {
                Value v = Value::integer(a.i);
                auto it = std::find(m.from.values.begin(), m.from.values.end(), v);
                if (it == m.from.values.end())
                    throw ParseError(e.pos.line, e.pos.col,
                                     "map '" + m.name + "' applied outside its domain at " +
                                         v.to_string());
                key = static_cast<std::size_t>(it - m.from.values.begin());
            }
            std::size_t out = m.table[key];
            const Value& v = m.to.values[out];
            if (v.is_int()) {
                RtVal r; r.k = RtVal::I; r.i = v.as_int(); return r;
            }
            RtVal r;
            r.k = RtVal::S;
            r.enum_id = enum_of(m.to);
            r.idx = static_cast<int>(out);
            return r;
        }
        case Expr::Kind::Bin: {
            RtVal a = eval(*e.a, ix);
            RtVal b = eval(*e.b, ix);
            RtVal r;
            switch (e.op) {
            case BinOp::Add: r.k = RtVal::I; r.i = a.i + b.i; return r;
            case BinOp::Sub: r.k = RtVal::I; r.i = a.i - b.i; return r;
            case BinOp::Mul: r.k = RtVal::I; r.i = a.i * b.i; return r;
            case BinOp::Mod:
                if (b.i == 0)
                    throw ParseError(e.pos.line, e.pos.col, "mod by zero");
                r.k = RtVal::I; r.i = floormod(a.i, b.i); return r;
            case BinOp::Div:
                if (b.i == 0)
                    throw ParseError(e.pos.line, e.pos.col, "div by zero");
                r.k = RtVal::I; r.i = floordiv(a.i, b.i); return r;
            case BinOp::Eq: r.k = RtVal::B; r.b = a.same(b); return r;
            case BinOp::Ne: r.k = RtVal::B; r.b = !a.same(b); return r;
            case BinOp::Lt:
                r.k = RtVal::B;
                r.b = a.k == RtVal::I ? a.i < b.i : a.idx < b.idx;
                return r;
            case BinOp::Le:
                r.k = RtVal::B;
                r.b = a.k == RtVal::I ? a.i <= b.i : a.idx <= b.idx;
                return r;
            }
            throw Error("unreachable");
        }
        }
        throw Error("unreachable");
    }

    Value to_value(const RtVal& v) const {
        switch (v.k) {
        case RtVal::I: return Value::integer(v.i);
        case RtVal::B: return Value::boolean(v.b);
        default: return enums_[v.enum_id][v.idx];
        }
    }

    // ------------------------------------------------------ statement units

    using Mask = std::vector<char>; // which states a region must be defined on

    Mask all_states() const { return Mask(nstates_, 1); }

    Mask image_of(const Mask& mask, const StochMatrix& m) const {
        Mask out(nstates_, 0);
        for (std::size_t st = 0; st < nstates_; ++st)
            if (mask[st])
                for (const auto& [c, v] : m.data[st]) out[c] = 1;
        return out;
    }

    /// Markov of one probabilistic assignment, defined on the masked states;
    /// states outside the mask keep an identity row (never selected).
    StochMatrix markov_of_assign(const Stmt& s, const Mask& mask) const {
        auto var = static_cast<std::size_t>(s.var_index);
        const DomainDecl& dom = p_.vars[var].dom;
        std::vector<SparseRow> data(nstates_);
        std::vector<std::size_t> ix(sizes_.size());
        for (std::size_t st = 0; st < nstates_; ++st) {
            if (!mask[st]) {
                data[st].emplace_back(static_cast<std::uint32_t>(st), Rat(1));
                continue;
            }
            decode(st, ix);
            std::map<std::uint32_t, Rat> row;
            for (const auto& c : s.dist.choices) {
                RtVal v = eval(*c.value, ix);
                std::size_t target;
                if (v.k == RtVal::S) {
                    target = static_cast<std::size_t>(v.idx);
                } else {
                    Value val = to_value(v);
                    auto it = std::find(dom.values.begin(), dom.values.end(), val);
                    if (it == dom.values.end())
                        throw ParseError(s.pos.line, s.pos.col,
                                         "value " + val.to_string() +
                                             " outside the domain of '" + s.var_name +
                                             "' (state " + (*states_)[st].to_string() + ")");
                    target = static_cast<std::size_t>(it - dom.values.begin());
                }
                std::size_t next = st - ix[var] * strides_[var] + target * strides_[var];
                row[static_cast<std::uint32_t>(next)] += c.weight;
            }
            SparseRow& out = data[st];
            out.reserve(row.size());
            for (auto& [cix, w] : row) out.emplace_back(cix, w);
        }
        return StochMatrix{states_, states_, std::move(data)};
    }

    StochMatrix channel_of_leak(const Stmt& s) const {
        // the observation alphabet is everything the expression can produce
        std::set<Value> attained;
        std::vector<std::size_t> ix(sizes_.size());
        for (std::size_t st = 0; st < nstates_; ++st) {
            decode(st, ix);
            for (const auto& c : s.dist.choices)
                attained.insert(to_value(eval(*c.value, ix)));
        }
        Domain obs(attained.begin(), attained.end());
        std::map<Value, std::uint32_t> obs_index;
        for (std::size_t i = 0; i < obs.size(); ++i)
            obs_index[obs[i]] = static_cast<std::uint32_t>(i);
        DomainPtr obs_dom = std::make_shared<const Domain>(std::move(obs));

        std::vector<SparseRow> data(nstates_);
        for (std::size_t st = 0; st < nstates_; ++st) {
            decode(st, ix);
            std::map<std::uint32_t, Rat> row;
            for (const auto& c : s.dist.choices)
                row[obs_index.at(to_value(eval(*c.value, ix)))] += c.weight;
            SparseRow& out = data[st];
            out.reserve(row.size());
            for (auto& [cix, w] : row) out.emplace_back(cix, w);
        }
        return StochMatrix{states_, std::move(obs_dom), std::move(data)};
    }

    Mask guard_mask(const Expr& guard, const Mask& where) const {
        Mask mask(nstates_, 0);
        std::vector<std::size_t> ix(sizes_.size());
        for (std::size_t st = 0; st < nstates_; ++st) {
            if (!where[st]) continue;
            decode(st, ix);
            mask[st] = eval(guard, ix).b ? 1 : 0;
        }
        return mask;
    }

    StochMatrix select_rows(const std::vector<char>& mask, const StochMatrix& m_true,
                            const StochMatrix& m_false) const {
        std::vector<SparseRow> data(nstates_);
        for (std::size_t st = 0; st < nstates_; ++st)
            data[st] = mask[st] ? m_true.data[st] : m_false.data[st];
        return StochMatrix{states_, states_, std::move(data)};
    }

    long long bound_of(const Stmt& s) const {
        return opts_.unroll_override ? *opts_.unroll_override : s.unroll;
    }

    // after `bound` repetitions of the body transition, no state reachable
    // from any start may satisfy the guard
    void check_residual(const Stmt& s, const StochMatrix& body_markov, long long bound) const {
        Mask mask = guard_mask(*s.guard, all_states());
        StochMatrix power = identity_matrix(states_);
        for (long long k = 0; k < bound; ++k) power = cascade(power, body_markov);
        for (std::size_t st = 0; st < nstates_; ++st)
            for (const auto& [c, v] : power.data[st])
                if (mask[c] && sgn(v) != 0)
                    throw ParseError(s.pos.line, s.pos.col,
                                     "unroll bound " + std::to_string(bound) +
                                         " is insufficient: the guard can still hold "
                                         "(e.g. from state " + (*states_)[st].to_string() + ")");
    }

    /// A leak-free statement region collapses to one markov, defined on the
    /// masked states. The mask follows the region's own state movement, so a
    /// branch is only evaluated where control can actually reach it.
    StochMatrix compile_markov(const StmtList& stmts, const Mask& mask_in) const {
        StochMatrix acc = identity_matrix(states_);
        Mask cur = mask_in;
        for (const auto& s : stmts) {
            StochMatrix unit = identity_matrix(states_);
            switch (s.kind) {
            case Stmt::Kind::Assign:
                unit = markov_of_assign(s, cur);
                break;
            case Stmt::Kind::If: {
                Mask guard = guard_mask(*s.guard, cur);
                Mask tmask(nstates_, 0), emask(nstates_, 0);
                for (std::size_t st = 0; st < nstates_; ++st) {
                    tmask[st] = cur[st] && guard[st];
                    emask[st] = cur[st] && !guard[st];
                }
                StochMatrix mt = compile_markov(s.then_body, tmask);
                StochMatrix mf = compile_markov(s.else_body, emask);
                unit = select_rows(guard, mt, mf);
                break;
            }
            case Stmt::Kind::While: {
                // a loop body must be defined from every state: iterations
                // can revisit arbitrary parts of the space
                StochMatrix body = compile_markov(s.body, all_states());
                long long bound = bound_of(s);
                check_residual(s, body, bound);
                for (long long k = 0; k < bound; ++k) unit = cascade(unit, body);
                break;
            }
            case Stmt::Kind::Leak:
                throw ParseError(s.pos.line, s.pos.col, "leak in a markov-only region");
            }
            acc = cascade(acc, unit);
            cur = image_of(cur, unit);
        }
        return acc;
    }

    HmmSteps compile_stmts(const StmtList& stmts) const {
        HmmSteps steps;
        std::optional<StochMatrix> pend_channel;
        std::optional<StochMatrix> pend_markov;
        auto flush = [&] {
            if (pend_channel) {
                steps.push_back(HmmStep{std::move(*pend_channel),
                                        pend_markov ? std::move(*pend_markov)
                                                    : identity_matrix(states_)});
            } else if (pend_markov) {
                steps.push_back(HmmStep{null_channel(states_), std::move(*pend_markov)});
            }
            pend_channel.reset();
            pend_markov.reset();
        };
        auto add_markov = [&](StochMatrix m) {
            pend_markov = pend_markov ? cascade(*pend_markov, m) : std::move(m);
        };
        for (const auto& s : stmts) {
            switch (s.kind) {
            case Stmt::Kind::Assign:
                add_markov(markov_of_assign(s, all_states()));
                break;
            case Stmt::Kind::If: {
                Mask guard = guard_mask(*s.guard, all_states());
                Mask inverse(nstates_, 0);
                for (std::size_t st = 0; st < nstates_; ++st) inverse[st] = !guard[st];
                StochMatrix mt = compile_markov(s.then_body, guard);
                StochMatrix mf = compile_markov(s.else_body, inverse);
                add_markov(select_rows(guard, mt, mf));
                break;
            }
            case Stmt::Kind::Leak:
                flush();
                pend_channel = channel_of_leak(s);
                break;
            case Stmt::Kind::While: {
                HmmSteps body = compile_stmts(s.body);
                StochMatrix body_markov = identity_matrix(states_);
                for (const auto& st : body) body_markov = cascade(body_markov, st.markov);
                long long bound = bound_of(s);
                check_residual(s, body_markov, bound);
                flush();
                for (long long k = 0; k < bound; ++k)
                    steps.insert(steps.end(), body.begin(), body.end());
                break;
            }
            }
        }
        flush();
        return steps;
    }
};

} // namespace

DomainPtr state_space(const Program& p) {
    CompileOptions opts;
    Compiler c(p, opts);
    return c.states();
}

HmmSteps compile(const Program& p, const CompileOptions& opts) {
    Compiler c(p, opts);
    return c.compile();
}

} // namespace qif::dsl
