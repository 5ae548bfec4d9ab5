#include "qif/dist.hpp"

namespace qif {

void Dist::check() const {
    if (!domain || domain->size() != w.size())
        throw DomainError("distribution weights misaligned with domain");
    Rat sum = 0;
    for (const auto& p : w) {
        if (sgn(p) < 0) throw DomainError("negative probability in distribution");
        sum += p;
    }
    if (sum != 1) throw DomainError("distribution weights sum to " + rat_str(sum) + ", not 1");
}

Dist Dist::uniform(DomainPtr d) {
    if (d->empty()) throw DomainError("uniform distribution over empty domain");
    std::size_t n = d->size();
    Dist out{std::move(d), std::vector<Rat>(n, rat(1, static_cast<long>(n)))};
    return out;
}

Dist Dist::point(DomainPtr d, std::size_t at) {
    if (at >= d->size()) throw DomainError("point distribution index out of range");
    std::vector<Rat> w(d->size(), Rat(0));
    w[at] = 1;
    return Dist{std::move(d), std::move(w)};
}

Dist Dist::make(DomainPtr d, std::vector<Rat> weights) {
    Dist out{std::move(d), std::move(weights)};
    out.check();
    return out;
}

bool operator==(const Dist& a, const Dist& b) {
    return same_domain(a.domain, b.domain) && a.w == b.w;
}

} // namespace qif
