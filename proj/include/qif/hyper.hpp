#pragma once

#include <utility>
#include <vector>

#include "qif/dist.hpp"
#include "qif/matrix.hpp"

namespace qif {

/// Hyper-distribution: a distribution over distinct inner distributions that
/// share one domain. Canonical form: inners pairwise distinct, ordered
/// lexicographically by their weight vectors, with strictly positive outer
/// weights summing to 1. Canonicality makes hyper equality plain equality.
struct Hyper {
    DomainPtr domain;
    std::vector<Rat> outer;
    std::vector<std::vector<Rat>> inners; ///< dense weight vectors

    std::size_t size() const { return outer.size(); }
    Dist inner_dist(std::size_t i) const;

    void check() const;

    /// Canonicalizing constructor: drops zero-outer entries, merges equal
    /// inners (summing their outers) and sorts.
    static Hyper make(DomainPtr domain,
                      std::vector<std::pair<Rat, std::vector<Rat>>> weighted_inners);
};

bool operator==(const Hyper& a, const Hyper& b);

/// The certain hyper [pi]: point distribution on one inner.
Hyper point_hyper(const Dist& pi);

/// Outer-weighted average of the inners.
Dist barycenter(const Hyper& h);

enum class PairSide { Initial, Final };

/// For a hyper over a pair space, push every inner through the chosen
/// coordinate projection and re-amalgamate.
Hyper project_hyper(const Hyper& h, PairSide side);

} // namespace qif
