#include "qif/refine.hpp"

#include "qif/lp.hpp"
#include "qif/prob.hpp"

namespace qif {

const char* refine_reason_name(RefineReason r) {
    switch (r) {
    case RefineReason::Holds: return "HOLDS";
    case RefineReason::FailsGain: return "FAILS_GAIN";
    case RefineReason::BarycenterMismatch: return "BARYCENTER_MISMATCH";
    case RefineReason::FailsStructural: return "FAILS_STRUCTURAL";
    }
    return "?";
}

namespace {

// Counterexample from the Farkas certificate of the transport system. The
// certificate rows split into one multiplier per h1-inner and one per
// (h2-inner, state) pair; the latter block, read as a gain table over
// choices = h2's inners, separates the hypers strictly.
GainFunction gain_from_certificate(const Hyper& h1, const Hyper& h2,
                                   const std::vector<Rat>& y, Rat& shift_out) {
    std::size_t m1 = h1.size(), m2 = h2.size(), ns = h1.domain->size();
    Domain ws;
    ws.reserve(m2);
    for (std::size_t j = 0; j < m2; ++j)
        ws.push_back(Value::integer(static_cast<long long>(j)));
    std::vector<std::vector<Rat>> table(m2, std::vector<Rat>(ns, Rat(0)));
    for (std::size_t j = 0; j < m2; ++j)
        for (std::size_t s = 0; s < ns; ++s)
            table[j][s] = y[m1 + j * ns + s];
    GainFunction g = GainFunction::make(make_domain(std::move(ws)), h1.domain,
                                        std::move(table));
    auto [gn, shift] = shift_to_nonnegative(g);
    shift_out = shift;
    // the separation must survive the shift; verify rather than trust
    if (!(hyper_vulnerability(gn, h1) < hyper_vulnerability(gn, h2)))
        throw Error("refine: certificate does not separate after shifting");
    return gn;
}

} // namespace

RefinementVerdict refine_hyper(const Hyper& h1, const Hyper& h2) {
    if (!same_domain(h1.domain, h2.domain))
        throw DomainError("refine_hyper: hypers over different domains");

    RefinementVerdict v;
    if (!(barycenter(h1) == barycenter(h2))) {
        v.holds = false;
        v.reason = RefineReason::BarycenterMismatch;
        v.note = "the hypers average to different distributions";
        return v;
    }

    std::size_t m1 = h1.size(), m2 = h2.size(), ns = h1.domain->size();
    // variables S[i][j] laid out row-major; constraints:
    //   (a) sum_j S[i][j] = outer1[i]                       (m1 rows)
    //   (b) sum_i S[i][j] inner1_i[s] = outer2[j] inner2_j[s]  (m2*ns rows)
    std::size_t nvars = m1 * m2, nrows = m1 + m2 * ns;
    std::vector<std::vector<Rat>> a(nrows, std::vector<Rat>(nvars, Rat(0)));
    std::vector<Rat> c(nrows, Rat(0));
    for (std::size_t i = 0; i < m1; ++i) {
        for (std::size_t j = 0; j < m2; ++j) a[i][i * m2 + j] = 1;
        c[i] = h1.outer[i];
    }
    for (std::size_t j = 0; j < m2; ++j)
        for (std::size_t s = 0; s < ns; ++s) {
            std::size_t r = m1 + j * ns + s;
            for (std::size_t i = 0; i < m1; ++i)
                a[r][i * m2 + j] = h1.inners[i][s];
            c[r] = h2.outer[j] * h2.inners[j][s];
        }

    LpResult lp = solve_eq_nonneg(a, c);
    if (lp.feasible) {
        std::vector<std::vector<Rat>> witness(m1, std::vector<Rat>(m2));
        for (std::size_t i = 0; i < m1; ++i)
            for (std::size_t j = 0; j < m2; ++j)
                witness[i][j] = lp.x[i * m2 + j];
        // exact self-certification of the witness equations
        for (std::size_t i = 0; i < m1; ++i) {
            Rat row = 0;
            for (std::size_t j = 0; j < m2; ++j) row += witness[i][j];
            if (row != h1.outer[i]) throw Error("refine: witness row sum broken");
        }
        for (std::size_t j = 0; j < m2; ++j)
            for (std::size_t s = 0; s < ns; ++s) {
                Rat mix = 0;
                for (std::size_t i = 0; i < m1; ++i)
                    mix += witness[i][j] * h1.inners[i][s];
                if (mix != h2.outer[j] * h2.inners[j][s])
                    throw Error("refine: witness mixture broken");
            }
        v.holds = true;
        v.reason = RefineReason::Holds;
        v.witness = std::move(witness);
        return v;
    }

    v.holds = false;
    v.reason = RefineReason::FailsGain;
    v.counterexample = gain_from_certificate(h1, h2, lp.farkas, v.counterexample_shift);
    return v;
}

RefinementVerdict refine_hmm(const HmmMatrix& h1, const HmmMatrix& h2,
                             const Dist& prior, HmmOrder order) {
    if (!same_domain(h1.states, h2.states))
        throw DomainError("refine_hmm: state spaces do not match");
    if (order == HmmOrder::Full)
        return refine_hyper(denote(h1, prior), denote(h2, prior));
    Hyper a = hyper_of_joint(push_prior(prior, effective_channel(h1)));
    Hyper b = hyper_of_joint(push_prior(prior, effective_channel(h2)));
    return refine_hyper(a, b);
}

RefinementVerdict refine_structural(const HmmMatrix& h1, const HmmMatrix& h2) {
    if (!same_domain(h1.states, h2.states))
        throw DomainError("refine_structural: state spaces do not match");
    std::size_t n = h1.nstates(), ny1 = h1.nobs(), ny2 = h2.nobs();
    // variables R[y1][y2]; constraints:
    //   (a) sum_{y1} h1(x,y1,x') R[y1][y2] = h2(x,y2,x')   for all x,y2,x'
    //   (b) sum_{y2} R[y1][y2] = 1                          for all y1
    std::size_t nvars = ny1 * ny2;
    std::size_t nrows = n * n * ny2 + ny1;
    std::vector<std::vector<Rat>> a(nrows, std::vector<Rat>(nvars, Rat(0)));
    std::vector<Rat> c(nrows, Rat(0));
    std::size_t r = 0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y2 = 0; y2 < ny2; ++y2)
            for (std::size_t xp = 0; xp < n; ++xp, ++r) {
                for (std::size_t y1 = 0; y1 < ny1; ++y1)
                    a[r][y1 * ny2 + y2] = h1.at(x, y1, xp);
                c[r] = h2.at(x, y2, xp);
            }
    for (std::size_t y1 = 0; y1 < ny1; ++y1, ++r) {
        for (std::size_t y2 = 0; y2 < ny2; ++y2) a[r][y1 * ny2 + y2] = 1;
        c[r] = 1;
    }

    LpResult lp = solve_eq_nonneg(a, c);
    RefinementVerdict v;
    if (lp.feasible) {
        std::vector<std::vector<Rat>> witness(ny1, std::vector<Rat>(ny2));
        for (std::size_t y1 = 0; y1 < ny1; ++y1)
            for (std::size_t y2 = 0; y2 < ny2; ++y2)
                witness[y1][y2] = lp.x[y1 * ny2 + y2];
        v.holds = true;
        v.reason = RefineReason::Holds;
        v.witness = std::move(witness);
        v.note = "observation post-processing found; holds at every prior";
    } else {
        v.holds = false;
        v.reason = RefineReason::FailsStructural;
        v.note = "no observation post-processing exists (sound check only; "
                 "not a proof of non-refinement)";
    }
    return v;
}

GainFunction counterexample_gain(const Hyper& h1, const Hyper& h2) {
    RefinementVerdict v = refine_hyper(h1, h2);
    if (v.holds) throw DomainError("counterexample_gain: the refinement holds");
    if (v.reason == RefineReason::BarycenterMismatch)
        throw DomainError("counterexample_gain: barycenter mismatch, "
                          "no gain-function certificate applies");
    return *v.counterexample;
}

Correlation dalenius_correlation(const GainFunction& g, const Dist& pi) {
    if (!g.nonnegative)
        throw DomainError("dalenius_correlation: gain function must be nonnegative");
    if (!same_domain(g.domain, pi.domain))
        throw DomainError("dalenius_correlation: gain domain does not match prior");
    std::size_t nw = g.choices->size(), nx = pi.size();
    Rat norm = 0;
    for (std::size_t w = 0; w < nw; ++w)
        for (std::size_t x = 0; x < nx; ++x) norm += pi[x] * g.table[w][x];
    if (sgn(norm) == 0)
        throw DomainError("dalenius_correlation: gain vanishes on the prior's support");
    std::vector<SparseRow> data(nw);
    for (std::size_t w = 0; w < nw; ++w)
        for (std::size_t x = 0; x < nx; ++x) {
            Rat v = pi[x] * g.table[w][x] / norm;
            if (sgn(v) != 0) data[w].emplace_back(static_cast<std::uint32_t>(x), v);
        }
    return Correlation::make(Joint{g.choices, pi.domain, std::move(data)});
}

BayesRefutation bayes_refutation(const HmmMatrix& h1, const HmmMatrix& h2,
                                 const Dist& prior) {
    BayesRefutation out;
    out.chan_verdict = refine_hmm(h1, h2, prior, HmmOrder::Initial);
    if (out.chan_verdict.holds || !out.chan_verdict.counterexample) {
        out.refuted = false;
        return out;
    }
    const GainFunction& g = *out.chan_verdict.counterexample;
    Correlation pig = dalenius_correlation(g, prior);

    // Bayes vulnerability of the induced W through each program's channel:
    // hyper of the joint Pi^g cascaded with the effective channel.
    auto bayes_through = [&pig](const HmmMatrix& h) {
        StochMatrix d = collateral_channel(pig, effective_channel(h));
        GainFunction bw = gid(pig.z_domain());
        return posterior_vulnerability(bw, pig.z_marginal, d);
    };
    out.posterior_bayes_h1 = bayes_through(h1);
    out.posterior_bayes_h2 = bayes_through(h2);
    out.prior_bayes = vulnerability(gid(pig.z_domain()), pig.z_marginal);
    out.gain = g;
    out.correlation = std::move(pig);
    out.refuted = out.posterior_bayes_h1 < out.posterior_bayes_h2;
    if (!out.refuted)
        throw Error("bayes_refutation: transfer identity failed to invert");
    return out;
}

} // namespace qif
