#pragma once

#include <vector>

#include "qif/hyper.hpp"
#include "qif/matrix.hpp"
#include "qif/prob.hpp"

namespace qif {

/// Concrete Hidden Markov Model: a row-stochastic matrix of type
/// X -> (Y x X'). Column index is observation-major: col = y * |X| + x'.
struct HmmMatrix {
    DomainPtr states;
    DomainPtr obs;
    std::vector<SparseRow> data;

    std::size_t nstates() const { return states->size(); }
    std::size_t nobs() const { return obs->size(); }
    std::size_t ncols() const { return nobs() * nstates(); }
    std::uint32_t col(std::size_t y, std::size_t xp) const {
        return static_cast<std::uint32_t>(y * nstates() + xp);
    }
    Rat at(std::size_t x, std::size_t y, std::size_t xp) const;

    void check() const;

    static HmmMatrix from_sparse(DomainPtr states, DomainPtr obs,
                                 std::vector<SparseRow> data);
};

bool operator==(const HmmMatrix& a, const HmmMatrix& b);

/// One leak plus one state update acting independently on the input state.
struct HmmStep {
    StochMatrix channel; ///< X -> Y
    StochMatrix markov;  ///< X -> X
};

using HmmSteps = std::vector<HmmStep>;

/// <C,M>: entry (x,(y,x')) = C(x,y) * M(x,x').
HmmMatrix step(const StochMatrix& channel, const StochMatrix& markov);

/// <C,Id>: leaks but never moves the state.
HmmMatrix pure_channel(const StochMatrix& channel);

/// <NC,M>: moves the state but emits only the unit observation.
HmmMatrix pure_markov(const StochMatrix& markov);

/// Sequential composition: (H1;H2)_{x,(y1,y2),x'} = sum over the
/// intermediate state of H1_{x,y1,x''} H2_{x'',y2,x'}. The composite
/// observation alphabet is the flattened pair alphabet.
HmmMatrix seq(const HmmMatrix& h1, const HmmMatrix& h2);

/// Fold a nonempty step list into a single composite HMM.
HmmMatrix seq_steps(const HmmSteps& steps);

/// Sum out the final state: (chan.H)_{x,y} = sum_{x'} H_{x,y,x'}.
StochMatrix effective_channel(const HmmMatrix& h);

/// Effective channel of a step list without building the composite matrix:
/// chan(<C,M> :: rest) = C || (M . chan(rest)). Agrees exactly with
/// effective_channel(seq_steps(steps)) under the shared flattening.
StochMatrix effective_channel_steps(const HmmSteps& steps);

/// Denotation: joint over (X x X') x Y from prior and H, then abstraction
/// from Y. The hyper retains the initial state alongside the final one.
Hyper denote(const HmmMatrix& h, const Dist& prior);

/// Matrix-backed abstract HMM: the denotation is realized by applying
/// priors to the backing matrix.
struct AbstractHmm {
    HmmMatrix backing;
    Hyper apply(const Dist& prior) const { return denote(backing, prior); }
};

/// Lift through a collateral correlation Pi over Z x X: factor Pi against
/// its X-marginal, run the HMM on that marginal, and push every inner of
/// the result through the conditional, from initial-state coordinates to Z.
Hyper lift(const AbstractHmm& h, const Joint& correlation);

/// Same, but with the factorization supplied by the caller (the choice of
/// conditional at zero-marginal states must not matter; tests rely on this
/// entry point to vary it).
Hyper lift_with(const AbstractHmm& h, const StochMatrix& left_conditional,
                const Dist& x_marginal);

/// Collateral extension: lift with the duplicated correlation over
/// (Z x X) x X whose only mass sits at ((z,x),x). The result carries (z,
/// initial x) jointly with the final state; the redundant unchanged copy of
/// z is not materialized.
Hyper extend(const AbstractHmm& h, const DomainPtr& z_space, const Joint& correlation);

/// Forward Kleisli composition of abstract HMMs, realized on the backing
/// matrices; denote(kleisli(h1,h2), pi) equals the two-stage semantic
/// route for every prior.
AbstractHmm kleisli(const AbstractHmm& h1, const AbstractHmm& h2);

/// The two-stage semantic route: run h1, then lift h2 across each inner of
/// the intermediate hyper (collateral space = initial state) and average.
Hyper kleisli_semantic(const AbstractHmm& h1, const AbstractHmm& h2, const Dist& prior);

} // namespace qif
