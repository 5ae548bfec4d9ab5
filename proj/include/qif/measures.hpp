#pragma once

#include <vector>

#include "qif/hmm.hpp"
#include "qif/hyper.hpp"
#include "qif/matrix.hpp"

namespace qif {

/// Finite gain function: table of rational gains indexed by a choice space W
/// and a secret domain S. The nonnegative flag is required by the capacity
/// and Dalenius constructions.
struct GainFunction {
    DomainPtr choices; ///< W
    DomainPtr domain;  ///< S
    std::vector<std::vector<Rat>> table; ///< table[w][s]
    bool nonnegative = false;

    const Rat& at(std::size_t w, std::size_t s) const { return table[w][s]; }
    void check() const;

    static GainFunction make(DomainPtr choices, DomainPtr domain,
                             std::vector<std::vector<Rat>> table);
};

/// Identity gain over S: gain 1 exactly on a correct guess. Induces Bayes
/// vulnerability.
GainFunction gid(DomainPtr s);

/// Shift every entry up by the same amount so the table is nonnegative.
/// Returns the shifted gain and the shift applied (0 if none was needed).
/// Shifting changes vulnerabilities by exactly the shift, so comparisons of
/// equal-barycenter hypers survive it; callers are expected to re-verify and
/// report when they rely on that.
std::pair<GainFunction, Rat> shift_to_nonnegative(const GainFunction& g);

/// V_g[pi] = max over choices of the expected gain.
Rat vulnerability(const GainFunction& g, const Dist& pi);

/// V_g of a hyper: outer-expected inner vulnerability.
Rat hyper_vulnerability(const GainFunction& g, const Hyper& h);

/// V_g[pi |> C] computed column-wise on the joint, avoiding hyper
/// construction: sum over observations of max over choices of the joint
/// column inner product with g.
Rat posterior_vulnerability(const GainFunction& g, const Dist& pi, const StochMatrix& c);

/// Multiplicative g-leakage report: exact vulnerabilities and ratio, with
/// bits = log2(ratio) at the float boundary.
struct LeakageReport {
    Rat prior_vulnerability;
    Rat posterior_vulnerability;
    Rat ratio;
    double bits = 0.0;
};

/// Leakage of prior pi through channel C under gain g.
/// Throws UndefinedLeakage when V_g[pi] is zero.
LeakageReport leakage(const GainFunction& g, const Dist& pi, const StochMatrix& c);

/// A bit quantity carried with the exact rational inside the log.
struct Bits {
    Rat ratio;   ///< the exact value whose log2 is reported
    double bits = 0.0;

    static Bits of(Rat r) { return Bits{r, log2_rat(r)}; }
};

/// Min-capacity: sup over priors and gain functions of the leakage;
/// log2 of the sum of column maxima.
Bits min_capacity(const StochMatrix& c);

/// Capacity at a fixed prior (sup over nonnegative gains): log2 of the sum
/// of column maxima restricted to the support of the prior. Coincides with
/// min_capacity at full support; 0 at a point prior.
Bits capacity_fixed_prior(const Dist& pi, const StochMatrix& c);

/// Shannon entropy in bits (reporting metric only).
double shannon(const Dist& pi);

/// Outer-expected Shannon entropy of the inners.
double shannon_hyper(const Hyper& h);

/// Gain transformation through an HMM: for g over initial/final state pairs
/// with choices W, the transformed gain ranges over strategies Y -> W:
///   g^H(sigma, (x,x')) = sum_{y,u} g(sigma(y), (x,u)) * H(x', y, u).
/// The strategy space has |W|^|Y| elements and is capped.
GainFunction gain_transformer(const GainFunction& g, const HmmMatrix& h);

/// The diagonal embedding of a distribution on X into X x X (mass of x at
/// (x,x)); the shape at which transformed gains are evaluated.
Dist diagonal_dist(const Dist& pi);

} // namespace qif
