#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qif/collateral.hpp"
#include "qif/hmm.hpp"
#include "qif/hyper.hpp"
#include "qif/measures.hpp"

namespace qif {

enum class RefineReason {
    Holds,
    FailsGain,          ///< a counterexample gain function separates the hypers
    BarycenterMismatch, ///< the hypers average to different distributions
    FailsStructural,    ///< no observation post-processing exists (sound check only)
};

const char* refine_reason_name(RefineReason r);

/// Verdict of a refinement query, self-certifying in both directions:
/// a holding verdict carries a transport witness S with
///   sum_j S[i][j] = outer1[i]   and   sum_i S[i][j] inner1_i = outer2[j] inner2_j
/// exactly, and a failing one carries a gain function with
///   V_g(h1) < V_g(h2) exactly.
struct RefinementVerdict {
    bool holds = false;
    RefineReason reason = RefineReason::FailsGain;
    std::optional<std::vector<std::vector<Rat>>> witness;
    std::optional<GainFunction> counterexample;
    Rat counterexample_shift = 0; ///< nonnegativity shift applied, if any
    std::string note;
};

/// Decide h1 refined-by h2 (h2 at least as secure: V_g(h1) >= V_g(h2) for
/// every g) by exact feasibility of the transport system between the inners.
RefinementVerdict refine_hyper(const Hyper& h1, const Hyper& h2);

/// Which hypers an HMM comparison runs on.
enum class HmmOrder {
    Initial, ///< hypers of the effective channels: information about the initial state
    Full,    ///< denotation hypers over initial x final state pairs
};

/// Compare two HMMs at one prior. Sound at that prior only; the all-prior
/// order is approached through refine_structural.
RefinementVerdict refine_hmm(const HmmMatrix& h1, const HmmMatrix& h2,
                             const Dist& prior, HmmOrder order = HmmOrder::Full);

/// Sufficient all-prior check: does a row-stochastic post-processing R of the
/// observations turn h1 into h2, i.e. h2(x,y2,x') = sum_{y1} h1(x,y1,x') R(y1,y2)?
/// Holding implies refine_hmm holds at every prior.
RefinementVerdict refine_structural(const HmmMatrix& h1, const HmmMatrix& h2);

/// Extract a separating gain function from a failed refinement. Requires
/// matching barycenters; throws if the refinement actually holds. The result
/// is nonnegative (shifted if the raw certificate was not) and re-verified.
GainFunction counterexample_gain(const Hyper& h1, const Hyper& h2);

/// The correlation induced by a nonnegative gain g over W x X and a prior:
/// Pi(w,x) = pi(x) g(w,x) / N. Bayes leakage of any channel through Pi
/// equals the g-leakage of that channel at pi (the transfer identity).
Correlation dalenius_correlation(const GainFunction& g, const Dist& pi);

/// Outcome of the collateral Bayes-vulnerability refutation: when the
/// effective-channel hypers of two HMMs fail to refine, the separating gain
/// induces a correlation under which plain Bayes vulnerability ranks the two
/// programs strictly the wrong way around.
struct BayesRefutation {
    bool refuted = false;
    RefinementVerdict chan_verdict;
    std::optional<GainFunction> gain;
    std::optional<Correlation> correlation;
    Rat posterior_bayes_h1 = 0; ///< V of W through Pi^g . chan(h1)
    Rat posterior_bayes_h2 = 0;
    Rat prior_bayes = 0;        ///< V of the W marginal
};

BayesRefutation bayes_refutation(const HmmMatrix& h1, const HmmMatrix& h2,
                                 const Dist& prior);

} // namespace qif
