#include "qif/hmm.hpp"

#include <algorithm>
#include <map>

#include "qif/caps.hpp"

namespace qif {

Rat HmmMatrix::at(std::size_t x, std::size_t y, std::size_t xp) const {
    std::uint32_t c = col(y, xp);
    auto it = std::lower_bound(data[x].begin(), data[x].end(), c,
                               [](const auto& e, std::uint32_t cc) { return e.first < cc; });
    if (it != data[x].end() && it->first == c) return it->second;
    return Rat(0);
}

void HmmMatrix::check() const {
    if (!states || !obs || states->size() != data.size())
        throw DomainError("hmm shape mismatch");
    std::size_t nc = ncols();
    for (const auto& row : data) {
        Rat sum = 0;
        std::uint32_t prev = 0;
        bool first = true;
        for (const auto& [c, v] : row) {
            if (c >= nc) throw DomainError("hmm column out of range");
            if (!first && c <= prev) throw DomainError("hmm row not sorted");
            if (sgn(v) <= 0) throw DomainError("hmm rows must hold positive entries only");
            sum += v;
            prev = c;
            first = false;
        }
        if (sum != 1) throw DomainError("hmm row sums to " + rat_str(sum) + ", not 1");
    }
}

HmmMatrix HmmMatrix::from_sparse(DomainPtr states, DomainPtr obs,
                                 std::vector<SparseRow> data) {
    HmmMatrix out{std::move(states), std::move(obs), std::move(data)};
    out.check();
    return out;
}

bool operator==(const HmmMatrix& a, const HmmMatrix& b) {
    return same_domain(a.states, b.states) && same_domain(a.obs, b.obs) && a.data == b.data;
}

HmmMatrix step(const StochMatrix& channel, const StochMatrix& markov) {
    if (!same_domain(channel.rows, markov.rows) || !same_domain(markov.rows, markov.cols))
        throw DomainError("step: channel and markov must share one state space");
    std::size_t n = channel.nrows();
    if (channel.ncols() * n > caps().max_columns)
        throw CapError("max-columns", "hmm column space exceeds the column cap");
    std::vector<SparseRow> data(n);
    for (std::size_t x = 0; x < n; ++x) {
        SparseRow row;
        row.reserve(channel.data[x].size() * markov.data[x].size());
        for (const auto& [y, cv] : channel.data[x])
            for (const auto& [xp, mv] : markov.data[x])
                row.emplace_back(static_cast<std::uint32_t>(y * n + xp), cv * mv);
        data[x] = std::move(row);
    }
    return HmmMatrix{channel.rows, channel.cols, std::move(data)};
}

HmmMatrix pure_channel(const StochMatrix& channel) {
    return step(channel, identity_matrix(channel.rows));
}

HmmMatrix pure_markov(const StochMatrix& markov) {
    return step(null_channel(markov.rows), markov);
}

HmmMatrix seq(const HmmMatrix& h1, const HmmMatrix& h2) {
    if (!same_domain(h1.states, h2.states))
        throw DomainError("seq: state spaces do not match");
    DomainPtr obs = flat_obs_domain(h1.obs, h2.obs);
    std::size_t n = h1.nstates(), n2obs = h2.nobs();
    if (obs->size() * n > caps().max_columns)
        throw CapError("max-columns", "hmm column space exceeds the column cap");
    std::size_t nc = obs->size() * n;
    std::vector<SparseRow> data(n);
    std::vector<Rat> scratch(nc, Rat(0));
    std::vector<std::uint32_t> touched;
    for (std::size_t x = 0; x < n; ++x) {
        touched.clear();
        for (const auto& [c1, v1] : h1.data[x]) {
            std::size_t y1 = c1 / n, mid = c1 % n;
            for (const auto& [c2, v2] : h2.data[mid]) {
                std::size_t y2 = c2 / n, xp = c2 % n;
                auto c = static_cast<std::uint32_t>((y1 * n2obs + y2) * n + xp);
                if (sgn(scratch[c]) == 0) touched.push_back(c);
                scratch[c] += v1 * v2;
            }
        }
        std::sort(touched.begin(), touched.end());
        SparseRow row;
        row.reserve(touched.size());
        for (auto c : touched) {
            if (sgn(scratch[c]) != 0) row.emplace_back(c, scratch[c]);
            scratch[c] = 0;
        }
        data[x] = std::move(row);
    }
    return HmmMatrix{h1.states, std::move(obs), std::move(data)};
}

HmmMatrix seq_steps(const HmmSteps& steps) {
    if (steps.empty()) throw DomainError("seq_steps: empty step list");
    HmmMatrix acc = step(steps[0].channel, steps[0].markov);
    for (std::size_t i = 1; i < steps.size(); ++i)
        acc = seq(acc, step(steps[i].channel, steps[i].markov));
    return acc;
}

StochMatrix effective_channel(const HmmMatrix& h) {
    std::size_t n = h.nstates();
    std::vector<SparseRow> data(h.nstates());
    for (std::size_t x = 0; x < h.nstates(); ++x) {
        std::map<std::uint32_t, Rat> acc;
        for (const auto& [c, v] : h.data[x]) acc[static_cast<std::uint32_t>(c / n)] += v;
        SparseRow row;
        row.reserve(acc.size());
        for (auto& [y, v] : acc)
            if (sgn(v) != 0) row.emplace_back(y, v);
        data[x] = std::move(row);
    }
    return StochMatrix{h.states, h.obs, std::move(data)};
}

StochMatrix effective_channel_steps(const HmmSteps& steps) {
    if (steps.empty()) throw DomainError("effective_channel_steps: empty step list");
    StochMatrix chan = steps.back().channel;
    for (std::size_t i = steps.size() - 1; i-- > 0;)
        chan = parallel(steps[i].channel, cascade(steps[i].markov, chan));
    return chan;
}

Hyper denote(const HmmMatrix& h, const Dist& prior) {
    if (!same_domain(prior.domain, h.states))
        throw DomainError("denote: prior domain does not match state space");
    std::size_t n = h.nstates();
    DomainPtr pairs = pair_domain(h.states, h.states);
    // joint over (x,x') rows and y columns
    std::vector<SparseRow> jdata(pairs->size());
    for (std::size_t x = 0; x < n; ++x) {
        if (sgn(prior[x]) == 0) continue;
        for (const auto& [c, v] : h.data[x]) {
            std::size_t y = c / n, xp = c % n;
            jdata[x * n + xp].emplace_back(static_cast<std::uint32_t>(y), prior[x] * v);
        }
    }
    for (auto& row : jdata)
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    Joint j{std::move(pairs), h.obs, std::move(jdata)};
    return hyper_of_joint(j);
}

Hyper lift_with(const AbstractHmm& h, const StochMatrix& left_conditional,
                const Dist& x_marginal) {
    if (!same_domain(left_conditional.rows, h.backing.states))
        throw DomainError("lift: conditional rows do not match the state space");
    const DomainPtr& zdom = left_conditional.cols;
    Hyper base = h.apply(x_marginal);
    std::size_t n = h.backing.nstates();
    DomainPtr target = pair_domain(zdom, h.backing.states);
    std::vector<std::pair<Rat, std::vector<Rat>>> pushed;
    pushed.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        // delta over (x,x') -> sum_x cond(x,z) * delta(x,x') at (z,x')
        std::vector<Rat> w(target->size(), Rat(0));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t xp = 0; xp < n; ++xp) {
                const Rat& d = base.inners[i][x * n + xp];
                if (sgn(d) == 0) continue;
                for (const auto& [z, cv] : left_conditional.data[x])
                    w[z * n + xp] += cv * d;
            }
        pushed.emplace_back(base.outer[i], std::move(w));
    }
    return Hyper::make(std::move(target), std::move(pushed));
}

Hyper lift(const AbstractHmm& h, const Joint& correlation) {
    if (!same_domain(correlation.cols, h.backing.states))
        throw DomainError("lift: correlation right index does not match the state space");
    auto [x_marginal, left_conditional] = factor_joint_left(correlation);
    return lift_with(h, left_conditional, x_marginal);
}

Hyper extend(const AbstractHmm& h, const DomainPtr& z_space, const Joint& correlation) {
    if (!same_domain(correlation.rows, z_space))
        throw DomainError("extend: correlation left index does not match Z");
    if (!same_domain(correlation.cols, h.backing.states))
        throw DomainError("extend: correlation right index does not match the state space");
    // duplicated correlation over (Z x X) x X, mass only at ((z,x),x)
    DomainPtr zx = pair_domain(z_space, h.backing.states);
    std::size_t n = h.backing.nstates();
    std::vector<SparseRow> dup(zx->size());
    for (std::size_t z = 0; z < correlation.nrows(); ++z)
        for (const auto& [x, v] : correlation.data[z])
            dup[z * n + x].emplace_back(x, v);
    Joint dup_joint{std::move(zx), h.backing.states, std::move(dup)};
    return lift(h, dup_joint);
}

AbstractHmm kleisli(const AbstractHmm& h1, const AbstractHmm& h2) {
    return AbstractHmm{seq(h1.backing, h2.backing)};
}

Hyper kleisli_semantic(const AbstractHmm& h1, const AbstractHmm& h2, const Dist& prior) {
    Hyper first = h1.apply(prior);
    std::size_t n = h1.backing.nstates();
    std::vector<std::pair<Rat, std::vector<Rat>>> combined;
    for (std::size_t i = 0; i < first.size(); ++i) {
        // the i-th inner, a joint over initial x final, becomes the
        // collateral correlation carried into the second stage
        std::vector<SparseRow> rows(n);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t xp = 0; xp < n; ++xp) {
                const Rat& v = first.inners[i][x * n + xp];
                if (sgn(v) != 0) rows[x].emplace_back(static_cast<std::uint32_t>(xp), v);
            }
        Joint corr{h1.backing.states, h1.backing.states, std::move(rows)};
        Hyper second = lift(h2, corr);
        for (std::size_t k = 0; k < second.size(); ++k)
            combined.emplace_back(first.outer[i] * second.outer[k], second.inners[k]);
    }
    DomainPtr pairs = pair_domain(h1.backing.states, h1.backing.states);
    return Hyper::make(std::move(pairs), std::move(combined));
}

} // namespace qif
