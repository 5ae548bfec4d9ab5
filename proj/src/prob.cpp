#include "qif/prob.hpp"

namespace qif {

Joint push_prior(const Dist& prior, const StochMatrix& channel) {
    if (!same_domain(prior.domain, channel.rows))
        throw DomainError("push_prior: prior domain does not match channel rows");
    std::vector<SparseRow> data(channel.nrows());
    for (std::size_t x = 0; x < channel.nrows(); ++x) {
        if (sgn(prior[x]) == 0) continue;
        SparseRow row;
        row.reserve(channel.data[x].size());
        for (const auto& [y, p] : channel.data[x])
            row.emplace_back(y, prior[x] * p);
        data[x] = std::move(row);
    }
    return Joint{prior.domain, channel.cols, std::move(data)};
}

Hyper hyper_of_joint(const Joint& j) {
    std::size_t nr = j.nrows(), nc = j.ncols();
    std::vector<Rat> marginal(nc, Rat(0));
    for (const auto& row : j.data)
        for (const auto& [c, v] : row) marginal[c] += v;

    std::vector<std::pair<Rat, std::vector<Rat>>> posteriors;
    for (std::size_t y = 0; y < nc; ++y) {
        if (sgn(marginal[y]) == 0) continue; // omitted with its undefined posterior
        std::vector<Rat> w(nr, Rat(0));
        for (std::size_t r = 0; r < nr; ++r) {
            Rat v = j.at(r, y);
            if (sgn(v) != 0) w[r] = v / marginal[y];
        }
        posteriors.emplace_back(marginal[y], std::move(w));
    }
    return Hyper::make(j.rows, std::move(posteriors));
}

std::pair<Dist, StochMatrix> factor_joint_right(const Joint& j) {
    std::size_t nr = j.nrows(), nc = j.ncols();
    std::vector<Rat> marg(nr, Rat(0));
    for (std::size_t r = 0; r < nr; ++r)
        for (const auto& [c, v] : j.data[r]) marg[r] += v;

    std::vector<SparseRow> cond(nr);
    Rat unif = rat(1, static_cast<long>(nc));
    for (std::size_t r = 0; r < nr; ++r) {
        if (sgn(marg[r]) == 0) {
            for (std::size_t c = 0; c < nc; ++c)
                cond[r].emplace_back(static_cast<std::uint32_t>(c), unif);
        } else {
            cond[r].reserve(j.data[r].size());
            for (const auto& [c, v] : j.data[r])
                cond[r].emplace_back(c, v / marg[r]);
        }
    }
    return {Dist::make(j.rows, std::move(marg)),
            StochMatrix{j.rows, j.cols, std::move(cond)}};
}

std::pair<Dist, StochMatrix> factor_joint_left(const Joint& j) {
    std::size_t nr = j.nrows(), nc = j.ncols();
    std::vector<Rat> marg(nc, Rat(0));
    for (std::size_t r = 0; r < nr; ++r)
        for (const auto& [c, v] : j.data[r]) marg[c] += v;

    // conditional with rows indexed by the column space of j
    std::vector<SparseRow> cond(nc);
    Rat unif = rat(1, static_cast<long>(nr));
    for (std::size_t c = 0; c < nc; ++c) {
        if (sgn(marg[c]) == 0) {
            for (std::size_t r = 0; r < nr; ++r)
                cond[c].emplace_back(static_cast<std::uint32_t>(r), unif);
        }
    }
    for (std::size_t r = 0; r < nr; ++r)
        for (const auto& [c, v] : j.data[r])
            cond[c].emplace_back(static_cast<std::uint32_t>(r), v / marg[c]);
    return {Dist::make(j.cols, std::move(marg)),
            StochMatrix{j.cols, j.rows, std::move(cond)}};
}

} // namespace qif
