#include "qif/collateral.hpp"

namespace qif {

Correlation Correlation::make(Joint j) {
    j.check();
    auto [zm, zc] = factor_joint_right(j);
    auto [xm, xc] = factor_joint_left(j);
    return Correlation{std::move(j), std::move(zm), std::move(zc),
                       std::move(xm), std::move(xc)};
}

Correlation Correlation::identity(const Dist& pi) {
    std::vector<SparseRow> data(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        if (sgn(pi[i]) != 0)
            data[i].emplace_back(static_cast<std::uint32_t>(i), pi[i]);
    return make(Joint{pi.domain, pi.domain, std::move(data)});
}

Correlation Correlation::independent(const Dist& z, const Dist& x) {
    std::vector<SparseRow> data(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (sgn(z[i]) == 0) continue;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (sgn(x[k]) != 0)
                data[i].emplace_back(static_cast<std::uint32_t>(k), z[i] * x[k]);
    }
    return make(Joint{z.domain, x.domain, std::move(data)});
}

StochMatrix collateral_channel(const Correlation& corr, const StochMatrix& c) {
    return cascade(corr.z_conditional, c);
}

LeakageReport collateral_leakage(const GainFunction& g, const Correlation& corr,
                                 const HmmMatrix& h) {
    StochMatrix d = collateral_channel(corr, effective_channel(h));
    return leakage(g, corr.z_marginal, d);
}

Bits ccap(const HmmSteps& steps) {
    if (steps.empty()) throw DomainError("ccap: empty step list");
    Rat acc = min_capacity(steps.back().channel).ratio;
    for (std::size_t i = steps.size() - 1; i-- > 0;) {
        Rat m = min_capacity(steps[i].markov).ratio;
        acc = min_capacity(steps[i].channel).ratio * (m < acc ? m : acc);
    }
    return Bits::of(acc);
}

Thm1Gains thm1_gains(const Correlation& corr) {
    const Dist& zm = corr.z_marginal;
    std::size_t nz = zm.size();
    // a = smallest nonzero marginal probability
    Rat a = 0;
    for (const auto& p : zm.w)
        if (sgn(p) != 0 && (sgn(a) == 0 || p < a)) a = p;
    if (sgn(a) == 0) throw DomainError("thm1_gains: empty Z marginal");

    std::vector<std::vector<Rat>> ghat(nz, std::vector<Rat>(nz, Rat(0)));
    for (std::size_t z = 0; z < nz; ++z)
        if (sgn(zm[z]) != 0) ghat[z][z] = a / zm[z];
    GainFunction g_hat{zm.domain, zm.domain, std::move(ghat), true};
    g_hat.check();

    // push through the left conditional: ghat_join(w,x) = sum_z cond(x,z) ghat(w,z)
    const StochMatrix& xc = corr.x_conditional;
    std::size_t nx = xc.nrows();
    std::vector<std::vector<Rat>> join(nz, std::vector<Rat>(nx, Rat(0)));
    for (std::size_t x = 0; x < nx; ++x)
        for (const auto& [z, cv] : xc.data[x])
            for (std::size_t w = 0; w < nz; ++w)
                if (sgn(g_hat.table[w][z]) != 0)
                    join[w][x] += cv * g_hat.table[w][z];
    GainFunction g_join{zm.domain, corr.x_domain(), std::move(join), true};
    g_join.check();
    return Thm1Gains{std::move(g_hat), std::move(g_join)};
}

Thm2Pair check_thm2(const Correlation& corr, const HmmMatrix& h) {
    StochMatrix chan = effective_channel(h);
    StochMatrix d = collateral_channel(corr, chan);
    Bits lhs = capacity_fixed_prior(corr.z_marginal, d);
    Bits rhs = min_capacity(chan);
    Bits srhs = capacity_fixed_prior(corr.x_marginal, chan);
    if (lhs.ratio > rhs.ratio)
        throw DomainError("collateral bound violated (this should be impossible)");
    return Thm2Pair{lhs, rhs, srhs};
}

} // namespace qif
