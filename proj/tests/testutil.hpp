#pragma once

// Shared helpers for the test suites: compact constructors for domains,
// distributions and matrices, the password and two-bit-array fixtures, and
// seed-fixed random generators for the property suites.

#include <random>
#include <string>
#include <vector>

#include "qif/collateral.hpp"
#include "qif/dist.hpp"
#include "qif/hmm.hpp"
#include "qif/hyper.hpp"
#include "qif/matrix.hpp"
#include "qif/measures.hpp"
#include "qif/prob.hpp"

namespace qt {

using namespace qif;

inline DomainPtr syms(const std::vector<std::string>& names) {
    Domain d;
    for (const auto& n : names) d.push_back(Value::symbol(n));
    return make_domain(std::move(d));
}

inline DomainPtr ints(long lo, long hi) {
    Domain d;
    for (long v = lo; v <= hi; ++v) d.push_back(Value::integer(v));
    return make_domain(std::move(d));
}

inline DomainPtr abc() { return syms({"A", "B", "C"}); }

inline std::vector<Rat> rats(const std::vector<std::pair<long, long>>& fractions) {
    std::vector<Rat> out;
    for (auto [n, d] : fractions) out.push_back(rat(n, d));
    return out;
}

/// Rows given as fractions (num, den).
inline StochMatrix mat(DomainPtr rows, DomainPtr cols,
                       const std::vector<std::vector<std::pair<long, long>>>& entries) {
    std::vector<std::vector<Rat>> dense;
    for (const auto& row : entries) dense.push_back(rats(row));
    return StochMatrix::make(std::move(rows), std::move(cols), dense);
}

inline Joint joint(DomainPtr rows, DomainPtr cols,
                   const std::vector<std::vector<std::pair<long, long>>>& entries) {
    std::vector<std::vector<Rat>> dense;
    for (const auto& row : entries) dense.push_back(rats(row));
    return Joint::make(std::move(rows), std::move(cols), dense);
}

// ---- password example fixtures (three-letter alphabet) ----

/// Fresh uniform choice: every row uniform.
inline StochMatrix password_m_lax() {
    auto d = abc();
    return mat(d, d, {{{1, 3}, {1, 3}, {1, 3}},
                      {{1, 3}, {1, 3}, {1, 3}},
                      {{1, 3}, {1, 3}, {1, 3}}});
}

/// Forced change: uniform over the other two letters.
inline StochMatrix password_m_strict() {
    auto d = abc();
    return mat(d, d, {{{0, 1}, {1, 2}, {1, 2}},
                      {{1, 2}, {0, 1}, {1, 2}},
                      {{1, 2}, {1, 2}, {0, 1}}});
}

/// Over-the-shoulder glimpse: leaks one of the two letters the state is not.
inline StochMatrix password_c2() { return password_m_strict(); }

inline HmmMatrix lax_composite() {
    return seq(pure_markov(password_m_lax()), pure_channel(password_c2()));
}

inline HmmMatrix strict_composite() {
    return seq(pure_markov(password_m_strict()), pure_channel(password_c2()));
}

/// The skewed three-inner hyper on the initial state of the strict program
/// (canonical inner order).
inline Hyper skewed_initial_hyper() {
    auto d = abc();
    return Hyper::make(d, {
        {rat(1, 3), rats({{1, 2}, {1, 4}, {1, 4}})},
        {rat(1, 3), rats({{1, 4}, {1, 2}, {1, 4}})},
        {rat(1, 3), rats({{1, 4}, {1, 4}, {1, 2}})},
    });
}

// ---- two-bit array side-channel example fixtures ----

inline DomainPtr xs4() { return ints(0, 3); }

/// First update: keep with probability 1/3, flip both bits with 2/3.
inline StochMatrix appc_m1() {
    auto d = xs4();
    return mat(d, d, {{{1, 3}, {0, 1}, {0, 1}, {2, 3}},
                      {{0, 1}, {1, 3}, {2, 3}, {0, 1}},
                      {{0, 1}, {2, 3}, {1, 3}, {0, 1}},
                      {{2, 3}, {0, 1}, {0, 1}, {1, 3}}});
}

/// Leak of a fairly chosen bit of the two-bit array.
inline StochMatrix appc_c2() {
    return mat(xs4(), ints(0, 1), {{{1, 1}, {0, 1}},
                                   {{1, 2}, {1, 2}},
                                   {{1, 2}, {1, 2}},
                                   {{0, 1}, {1, 1}}});
}

/// Final update: keep or flip, fair.
inline StochMatrix appc_m2() {
    auto d = xs4();
    return mat(d, d, {{{1, 2}, {0, 1}, {0, 1}, {1, 2}},
                      {{0, 1}, {1, 2}, {1, 2}, {0, 1}},
                      {{0, 1}, {1, 2}, {1, 2}, {0, 1}},
                      {{1, 2}, {0, 1}, {0, 1}, {1, 2}}});
}

inline HmmSteps appc_steps() {
    return {HmmStep{null_channel(xs4()), appc_m1()}, HmmStep{appc_c2(), appc_m2()}};
}

// ---- seed-fixed random generation for the property suites ----

struct Gen {
    std::mt19937_64 rng;

    explicit Gen(std::uint64_t seed) : rng(seed) {}

    std::size_t pick(std::size_t lo, std::size_t hi) { // inclusive
        return lo + rng() % (hi - lo + 1);
    }

    /// Random exact distribution: small integer weights normalized.
    Dist dist(DomainPtr d, bool full_support = false) {
        std::size_t n = d->size();
        std::vector<long> weights(n, 0);
        long total = 0;
        while (total == 0) {
            total = 0;
            for (std::size_t i = 0; i < n; ++i) {
                weights[i] = static_cast<long>(full_support ? pick(1, 4) : pick(0, 4));
                total += weights[i];
            }
        }
        std::vector<Rat> w;
        for (long x : weights) w.push_back(rat(x, total));
        return Dist::make(std::move(d), std::move(w));
    }

    StochMatrix channel(DomainPtr rows, DomainPtr cols) {
        std::vector<std::vector<Rat>> dense;
        for (std::size_t r = 0; r < rows->size(); ++r) dense.push_back(dist(cols).w);
        return StochMatrix::make(std::move(rows), std::move(cols), dense);
    }

    StochMatrix markov(DomainPtr states) { return channel(states, states); }

    DomainPtr obs_domain(std::size_t n, const std::string& prefix) {
        Domain d;
        for (std::size_t i = 0; i < n; ++i)
            d.push_back(Value::symbol(prefix + std::to_string(i)));
        return make_domain(std::move(d));
    }

    HmmStep step_over(DomainPtr states, std::size_t nobs, const std::string& prefix) {
        return HmmStep{channel(states, obs_domain(nobs, prefix)), markov(states)};
    }

    HmmSteps steps_over(DomainPtr states, std::size_t max_steps) {
        std::size_t n = pick(1, max_steps);
        HmmSteps out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(step_over(states, pick(1, 3), "y" + std::to_string(i) + "_"));
        return out;
    }

    /// Random nonnegative gain function with at least one positive entry.
    GainFunction gain(DomainPtr domain, std::size_t nchoices) {
        Domain w;
        for (std::size_t i = 0; i < nchoices; ++i)
            w.push_back(Value::symbol("w" + std::to_string(i)));
        std::vector<std::vector<Rat>> table(nchoices, std::vector<Rat>(domain->size()));
        bool any = false;
        for (auto& row : table)
            for (auto& v : row) {
                v = rat(static_cast<long>(pick(0, 3)), static_cast<long>(pick(1, 3)));
                if (sgn(v) > 0) any = true;
            }
        if (!any) table[0][0] = 1;
        return GainFunction::make(make_domain(std::move(w)), std::move(domain),
                                  std::move(table));
    }

    /// Random correlation joint over fresh Z of size nz and the given X.
    Joint correlation(std::size_t nz, DomainPtr x) {
        DomainPtr z = obs_domain(nz, "z");
        std::size_t total_cells = nz * x->size();
        std::vector<long> weights(total_cells, 0);
        long total = 0;
        while (total == 0) {
            total = 0;
            for (auto& v : weights) {
                v = static_cast<long>(pick(0, 3));
                total += v;
            }
        }
        std::vector<std::vector<Rat>> dense(nz, std::vector<Rat>(x->size()));
        for (std::size_t i = 0; i < nz; ++i)
            for (std::size_t k = 0; k < x->size(); ++k)
                dense[i][k] = rat(weights[i * x->size() + k], total);
        return Joint::make(std::move(z), std::move(x), dense);
    }
};

/// Merge two observation columns of a channel: the canonical structural
/// post-processing used to manufacture refining pairs.
inline StochMatrix merge_first_two_obs(const StochMatrix& c) {
    if (c.ncols() < 2) return c;
    Domain obs;
    obs.push_back(Value::symbol("m"));
    for (std::size_t i = 2; i < c.ncols(); ++i) obs.push_back((*c.cols)[i]);
    std::vector<std::vector<Rat>> dense(c.nrows(), std::vector<Rat>(c.ncols() - 1, Rat(0)));
    for (std::size_t r = 0; r < c.nrows(); ++r)
        for (const auto& [col, v] : c.data[r])
            dense[r][col < 2 ? 0 : col - 1] += v;
    return StochMatrix::make(c.rows, make_domain(std::move(obs)), dense);
}

} // namespace qt
