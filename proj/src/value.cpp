#include "qif/value.hpp"

#include <algorithm>
#include <set>

#include "qif/caps.hpp"

namespace qif {

namespace {

int kind_rank(const Value& v) {
    if (v.is_bool()) return 0;
    if (v.is_int()) return 1;
    if (v.is_symbol()) return 2;
    return 3;
}

} // namespace

bool Value::operator<(const Value& o) const {
    int ra = kind_rank(*this), rb = kind_rank(o);
    if (ra != rb) return ra < rb;
    switch (ra) {
    case 0: return as_bool() < o.as_bool();
    case 1: return as_int() < o.as_int();
    case 2: return as_symbol() < o.as_symbol();
    default: return as_tuple() < o.as_tuple();
    }
}

std::string Value::to_string() const {
    if (is_bool()) return as_bool() ? "true" : "false";
    if (is_int()) return std::to_string(as_int());
    if (is_symbol()) return as_symbol();
    std::string out = "(";
    const auto& t = as_tuple();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += t[i].to_string();
    }
    out += ")";
    return out;
}

Value Value::parse(const std::string& s) {
    if (s.empty()) throw DomainError("empty value string");
    if (s == "true") return boolean(true);
    if (s == "false") return boolean(false);
    if (s.front() == '(') {
        if (s.back() != ')') throw DomainError("unbalanced tuple value: " + s);
        Tuple t;
        std::size_t depth = 0, start = 1;
        for (std::size_t i = 1; i + 1 <= s.size() - 1; ++i) {
            char c = s[i];
            if (c == '(') ++depth;
            else if (c == ')') --depth;
            else if (c == ',' && depth == 0) {
                t.push_back(parse(s.substr(start, i - start)));
                start = i + 1;
            }
        }
        if (start < s.size() - 1) t.push_back(parse(s.substr(start, s.size() - 1 - start)));
        return tuple(std::move(t));
    }
    bool numeric = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (i == 0 && c == '-' && s.size() > 1) continue;
        if (c < '0' || c > '9') { numeric = false; break; }
    }
    if (numeric) return integer(std::stoll(s));
    return symbol(s);
}

DomainPtr make_domain(Domain values) {
    std::set<Value> seen;
    for (const auto& v : values) {
        if (!seen.insert(v).second)
            throw DomainError("duplicate value in domain: " + v.to_string());
    }
    return std::make_shared<const Domain>(std::move(values));
}

DomainPtr unit_domain() {
    static const DomainPtr u = std::make_shared<const Domain>(Domain{Value::unit()});
    return u;
}

bool same_domain(const DomainPtr& a, const DomainPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

std::size_t index_of(const Domain& d, const Value& v) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] == v) return i;
    throw DomainError("value not in domain: " + v.to_string());
}

DomainPtr pair_domain(const DomainPtr& a, const DomainPtr& b) {
    if (a->size() * b->size() > caps().max_columns)
        throw CapError("max-columns", "pair space exceeds the column cap");
    Domain d;
    d.reserve(a->size() * b->size());
    for (const auto& x : *a)
        for (const auto& y : *b)
            d.push_back(Value::tuple({x, y}));
    return std::make_shared<const Domain>(std::move(d));
}

Value flatten_obs(const Value& a, const Value& b) {
    Value::Tuple parts;
    auto push = [&parts](const Value& v) {
        if (v.is_tuple()) {
            for (const auto& c : v.as_tuple()) parts.push_back(c);
        } else {
            parts.push_back(v);
        }
    };
    push(a);
    push(b);
    if (parts.empty()) return Value::unit();
    if (parts.size() == 1) return parts.front();
    return Value::tuple(std::move(parts));
}

DomainPtr flat_obs_domain(const DomainPtr& a, const DomainPtr& b) {
    if (a->size() * b->size() > caps().max_columns)
        throw CapError("max-columns", "observation alphabet exceeds the column cap");
    Domain d;
    d.reserve(a->size() * b->size());
    for (const auto& x : *a)
        for (const auto& y : *b)
            d.push_back(flatten_obs(x, y));
    std::set<Value> seen(d.begin(), d.end());
    if (seen.size() != d.size())
        throw DomainError("observation flattening produced colliding values");
    return std::make_shared<const Domain>(std::move(d));
}

} // namespace qif
