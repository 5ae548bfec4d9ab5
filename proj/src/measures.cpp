#include "qif/measures.hpp"

#include <cmath>

#include "qif/caps.hpp"

namespace qif {

void GainFunction::check() const {
    if (!choices || !domain) throw DomainError("gain function without index sets");
    if (choices->empty()) throw DomainError("gain function with empty choice space");
    if (table.size() != choices->size()) throw DomainError("gain table height mismatch");
    for (const auto& row : table) {
        if (row.size() != domain->size()) throw DomainError("gain table width mismatch");
        if (nonnegative)
            for (const auto& v : row)
                if (sgn(v) < 0) throw DomainError("negative entry in nonnegative gain function");
    }
}

GainFunction GainFunction::make(DomainPtr choices, DomainPtr domain,
                                std::vector<std::vector<Rat>> table) {
    GainFunction g{std::move(choices), std::move(domain), std::move(table), false};
    bool nonneg = true;
    for (const auto& row : g.table)
        for (const auto& v : row)
            if (sgn(v) < 0) { nonneg = false; break; }
    g.nonnegative = nonneg;
    g.check();
    return g;
}

GainFunction gid(DomainPtr s) {
    std::size_t n = s->size();
    std::vector<std::vector<Rat>> table(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) table[i][i] = 1;
    GainFunction g{s, s, std::move(table), true};
    g.check();
    return g;
}

std::pair<GainFunction, Rat> shift_to_nonnegative(const GainFunction& g) {
    Rat lowest = 0;
    for (const auto& row : g.table)
        for (const auto& v : row)
            if (v < lowest) lowest = v;
    if (sgn(lowest) >= 0) return {g, Rat(0)};
    Rat shift = -lowest;
    GainFunction out = g;
    for (auto& row : out.table)
        for (auto& v : row) v += shift;
    out.nonnegative = true;
    return {out, shift};
}

Rat vulnerability(const GainFunction& g, const Dist& pi) {
    if (!same_domain(g.domain, pi.domain))
        throw DomainError("vulnerability: gain domain does not match distribution");
    bool first = true;
    Rat best = 0;
    for (const auto& row : g.table) {
        Rat e = 0;
        for (std::size_t s = 0; s < row.size(); ++s)
            if (sgn(pi[s]) != 0) e += pi[s] * row[s];
        if (first || e > best) { best = e; first = false; }
    }
    return best;
}

Rat hyper_vulnerability(const GainFunction& g, const Hyper& h) {
    if (!same_domain(g.domain, h.domain))
        throw DomainError("hyper_vulnerability: gain domain does not match hyper");
    Rat total = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
        total += h.outer[i] * vulnerability(g, h.inner_dist(i));
    return total;
}

Rat posterior_vulnerability(const GainFunction& g, const Dist& pi, const StochMatrix& c) {
    if (!same_domain(pi.domain, c.rows))
        throw DomainError("posterior vulnerability: prior does not match channel rows");
    if (!same_domain(g.domain, pi.domain))
        throw DomainError("posterior vulnerability: gain domain does not match prior");
    // column mass of the joint, by choice: scores[w][y]
    std::size_t ny = c.ncols();
    std::vector<std::vector<Rat>> scores(g.table.size(), std::vector<Rat>(ny, Rat(0)));
    for (std::size_t x = 0; x < c.nrows(); ++x) {
        if (sgn(pi[x]) == 0) continue;
        for (const auto& [y, v] : c.data[x]) {
            Rat jv = pi[x] * v;
            for (std::size_t w = 0; w < g.table.size(); ++w)
                if (sgn(g.table[w][x]) != 0) scores[w][y] += jv * g.table[w][x];
        }
    }
    Rat total = 0;
    for (std::size_t y = 0; y < ny; ++y) {
        Rat best = scores[0][y];
        for (std::size_t w = 1; w < scores.size(); ++w)
            if (scores[w][y] > best) best = scores[w][y];
        total += best;
    }
    return total;
}

LeakageReport leakage(const GainFunction& g, const Dist& pi, const StochMatrix& c) {
    Rat prior = vulnerability(g, pi);
    if (sgn(prior) == 0)
        throw UndefinedLeakage("leakage undefined: prior vulnerability is zero");
    Rat post = posterior_vulnerability(g, pi, c);
    Rat ratio = post / prior;
    LeakageReport r{prior, post, ratio, log2_rat(ratio)};
    return r;
}

Bits min_capacity(const StochMatrix& c) {
    Rat sum = 0;
    std::vector<Rat> colmax(c.ncols(), Rat(0));
    for (std::size_t x = 0; x < c.nrows(); ++x)
        for (const auto& [y, v] : c.data[x])
            if (v > colmax[y]) colmax[y] = v;
    for (const auto& m : colmax) sum += m;
    return Bits::of(sum);
}

Bits capacity_fixed_prior(const Dist& pi, const StochMatrix& c) {
    if (!same_domain(pi.domain, c.rows))
        throw DomainError("capacity: prior does not match channel rows");
    std::vector<Rat> colmax(c.ncols(), Rat(0));
    for (std::size_t x = 0; x < c.nrows(); ++x) {
        if (sgn(pi[x]) == 0) continue;
        for (const auto& [y, v] : c.data[x])
            if (v > colmax[y]) colmax[y] = v;
    }
    Rat sum = 0;
    for (const auto& m : colmax) sum += m;
    return Bits::of(sum);
}

double shannon(const Dist& pi) {
    double h = 0.0;
    for (const auto& p : pi.w) {
        if (sgn(p) == 0) continue;
        double d = to_double(p);
        h -= d * std::log2(d);
    }
    return h;
}

double shannon_hyper(const Hyper& h) {
    double total = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        total += to_double(h.outer[i]) * shannon(h.inner_dist(i));
    return total;
}

Dist diagonal_dist(const Dist& pi) {
    DomainPtr pairs = pair_domain(pi.domain, pi.domain);
    std::size_t n = pi.size();
    std::vector<Rat> w(pairs->size(), Rat(0));
    for (std::size_t x = 0; x < n; ++x) w[x * n + x] = pi[x];
    return Dist::make(std::move(pairs), std::move(w));
}

GainFunction gain_transformer(const GainFunction& g, const HmmMatrix& h) {
    DomainPtr pairs = pair_domain(h.states, h.states);
    if (!same_domain(g.domain, pairs))
        throw DomainError("gain_transformer: gain domain must be the state-pair space");
    std::size_t n = h.nstates(), ny = h.nobs(), nw = g.choices->size();
    double size = std::pow(static_cast<double>(nw), static_cast<double>(ny));
    if (size > static_cast<double>(caps().max_strategies))
        throw CapError("max-strategies", "strategy space exceeds the strategy cap");
    auto nsigma = static_cast<std::size_t>(size + 0.5);

    // strategy index is big-endian over the observation list: the first
    // observation picks the most significant digit
    Domain strategies;
    strategies.reserve(nsigma);
    std::vector<std::vector<std::size_t>> sigma_of(nsigma, std::vector<std::size_t>(ny, 0));
    for (std::size_t s = 0; s < nsigma; ++s) {
        std::size_t rem = s;
        Value::Tuple parts(ny);
        for (std::size_t y = ny; y-- > 0;) {
            sigma_of[s][y] = rem % nw;
            rem /= nw;
        }
        for (std::size_t y = 0; y < ny; ++y)
            parts[y] = (*g.choices)[sigma_of[s][y]];
        strategies.push_back(ny == 1 ? parts[0] : Value::tuple(parts));
    }

    std::vector<std::vector<Rat>> table(nsigma, std::vector<Rat>(pairs->size(), Rat(0)));
    for (std::size_t s = 0; s < nsigma; ++s) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t xp = 0; xp < n; ++xp) {
                Rat acc = 0;
                // sum over (y,u) weighted by H at row x'
                for (const auto& [c, v] : h.data[xp]) {
                    std::size_t y = c / n, u = c % n;
                    const Rat& gv = g.table[sigma_of[s][y]][x * n + u];
                    if (sgn(gv) != 0) acc += gv * v;
                }
                table[s][x * n + xp] = acc;
            }
    }
    GainFunction out{make_domain(std::move(strategies)), pairs, std::move(table),
                     g.nonnegative};
    out.check();
    return out;
}

} // namespace qif
