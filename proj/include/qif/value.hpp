#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qif/error.hpp"

namespace qif {

/// A point of a finite value space: boolean, integer, symbolic name, or a
/// tuple of values (program states are tuples; composite observations are
/// flattened tuples). Values carry a total order so that derived index sets
/// (leak alphabets, attained-value sets) are deterministic: booleans before
/// integers before symbols before tuples, natural order within each kind.
class Value {
public:
    using Tuple = std::vector<Value>;

    Value() : rep_(false) {}

    static Value boolean(bool b) { return Value(Rep(b)); }
    static Value integer(long long i) { return Value(Rep(i)); }
    static Value symbol(std::string s) { return Value(Rep(std::move(s))); }
    static Value tuple(Tuple t) { return Value(Rep(std::move(t))); }
    /// The unit observation of a silent channel: the empty tuple.
    static Value unit() { return tuple({}); }

    bool is_bool() const { return std::holds_alternative<bool>(rep_); }
    bool is_int() const { return std::holds_alternative<long long>(rep_); }
    bool is_symbol() const { return std::holds_alternative<std::string>(rep_); }
    bool is_tuple() const { return std::holds_alternative<Tuple>(rep_); }

    bool as_bool() const { return std::get<bool>(rep_); }
    long long as_int() const { return std::get<long long>(rep_); }
    const std::string& as_symbol() const { return std::get<std::string>(rep_); }
    const Tuple& as_tuple() const { return std::get<Tuple>(rep_); }

    bool operator==(const Value& o) const { return rep_ == o.rep_; }
    bool operator<(const Value& o) const;

    std::string to_string() const;
    /// Inverse of to_string: "(A,1)" -> tuple, "42" -> integer,
    /// "true"/"false" -> boolean, anything else -> symbol.
    static Value parse(const std::string& s);

private:
    using Rep = std::variant<bool, long long, std::string, Tuple>;
    explicit Value(Rep r) : rep_(std::move(r)) {}
    Rep rep_;
};

/// An ordered finite value set. The order is part of the data (declaration
/// order for program domains, construction order for derived spaces).
using Domain = std::vector<Value>;
using DomainPtr = std::shared_ptr<const Domain>;

/// Wrap a vector as a domain, checking distinctness.
DomainPtr make_domain(Domain values);

/// The singleton domain {()} used by the channel that leaks nothing.
DomainPtr unit_domain();

bool same_domain(const DomainPtr& a, const DomainPtr& b);

/// Position of v in d, or throw DomainError.
std::size_t index_of(const Domain& d, const Value& v);

/// Ordered pairs (a_i, b_j), left index major. Values stay 2-tuples: this is
/// the shape of initial/final state pairs and of collateral (z,x) pairs.
DomainPtr pair_domain(const DomainPtr& a, const DomainPtr& b);

/// Combine two observation values into one, flattening tuple structure
/// left-associatively and erasing units: () * y = y, (a,b) * c = (a,b,c).
Value flatten_obs(const Value& a, const Value& b);

/// Ordered flattened combinations of two observation alphabets (left major).
DomainPtr flat_obs_domain(const DomainPtr& a, const DomainPtr& b);

} // namespace qif
