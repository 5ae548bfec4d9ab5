#pragma once

#include "qif/hmm.hpp"
#include "qif/matrix.hpp"
#include "qif/measures.hpp"

namespace qif {

/// A known correlation between a fresh secret Z and the program state X,
/// held as a joint over Z x X with both factorizations cached.
struct Correlation {
    Joint joint;               ///< over Z x X
    Dist z_marginal;           ///< row sums
    StochMatrix z_conditional; ///< Z -> X (right conditional)
    Dist x_marginal;           ///< column sums
    StochMatrix x_conditional; ///< X -> Z (left conditional)

    const DomainPtr& z_domain() const { return joint.rows; }
    const DomainPtr& x_domain() const { return joint.cols; }

    static Correlation make(Joint j);
    /// Z = X with the prior on the diagonal: total correlation.
    static Correlation identity(const Dist& pi);
    /// Product joint: no correlation at all.
    static Correlation independent(const Dist& z, const Dist& x);
};

/// The Dalenius channel D = conditional(Pi) . C of type Z -> Y.
StochMatrix collateral_channel(const Correlation& corr, const StochMatrix& c);

/// Collateral leakage of an HMM: ordinary leakage of the Dalenius channel
/// built from its effective channel, measured at the Z-marginal.
LeakageReport collateral_leakage(const GainFunction& g, const Correlation& corr,
                                 const HmmMatrix& h);

/// Linear-cost upper bound on the collateral capacity of a step list:
///   ccap(<C,M>)        = mcap(C)
///   ccap(<C,M> :: t)   = mcap(C) + min(mcap(M), ccap(t))
/// with the markov treated as a channel. Exact form: a product of rationals
/// inside one log.
Bits ccap(const HmmSteps& steps);

/// The extremal gains realizing the fixed-correlation collateral capacity:
/// ghat over Z (diagonal a / marginal) and its X-side counterpart with the
/// same choices, obtained through the left conditional.
struct Thm1Gains {
    GainFunction ghat;      ///< choices Z, domain Z
    GainFunction ghat_join; ///< choices Z, domain X
};
Thm1Gains thm1_gains(const Correlation& corr);

/// Both sides of the uniform-prior collateral bound: lhs is the
/// fixed-prior capacity of the Dalenius channel at the Z-marginal, rhs the
/// min-capacity of the effective channel. lhs <= rhs always; equality at
/// identity correlations. support_rhs additionally reports the rhs
/// restricted to the support of the X-marginal.
struct Thm2Pair {
    Bits lhs;
    Bits rhs;
    Bits support_rhs;
};
Thm2Pair check_thm2(const Correlation& corr, const HmmMatrix& h);

} // namespace qif
