#pragma once

#include "qif/hyper.hpp"
#include "qif/matrix.hpp"

namespace qif {

/// Joint distribution pi |> C: entry (x,y) = pi(x) * C(x,y).
Joint push_prior(const Dist& prior, const StochMatrix& channel);

/// Abstract from the column index: normalize each positive-marginal column
/// of the joint into a posterior over the rows, drop zero-marginal columns,
/// and amalgamate equal posteriors (their outer weights add).
Hyper hyper_of_joint(const Joint& j);

/// Factor a joint over Z x X into its Z-marginal and the row conditional
/// Z -> X. Rows with zero marginal get the uniform row, a fixed convention
/// that keeps outputs deterministic; reconstruction marginal(z) * cond(z,x)
/// = joint(z,x) holds either way.
std::pair<Dist, StochMatrix> factor_joint_right(const Joint& j);

/// Symmetric factorization against the X-marginal: returns the column
/// marginal and the conditional X -> Z (uniform rows at zero marginals).
std::pair<Dist, StochMatrix> factor_joint_left(const Joint& j);

} // namespace qif
