#pragma once

#include <vector>

#include "qif/rational.hpp"
#include "qif/value.hpp"

namespace qif {

/// Exact probability distribution over a finite ordered domain.
/// Invariant: all weights nonnegative, summing to exactly 1.
struct Dist {
    DomainPtr domain;
    std::vector<Rat> w; ///< aligned with *domain

    std::size_t size() const { return w.size(); }
    const Rat& operator[](std::size_t i) const { return w[i]; }

    /// Validate the invariants; throws DomainError on violation.
    void check() const;

    static Dist uniform(DomainPtr d);
    static Dist point(DomainPtr d, std::size_t at);
    /// Validating constructor.
    static Dist make(DomainPtr d, std::vector<Rat> weights);
};

bool operator==(const Dist& a, const Dist& b);

} // namespace qif
