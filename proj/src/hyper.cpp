#include "qif/hyper.hpp"

#include <algorithm>
#include <map>

namespace qif {

Dist Hyper::inner_dist(std::size_t i) const {
    return Dist{domain, inners[i]};
}

void Hyper::check() const {
    if (!domain) throw DomainError("hyper without domain");
    if (outer.size() != inners.size()) throw DomainError("hyper outer/inner mismatch");
    Rat sum = 0;
    for (std::size_t i = 0; i < outer.size(); ++i) {
        if (sgn(outer[i]) <= 0) throw DomainError("hyper outer weights must be positive");
        sum += outer[i];
        Dist{domain, inners[i]}.check();
        if (i > 0 && !(inners[i - 1] < inners[i]))
            throw DomainError("hyper inners not in canonical order");
    }
    if (sum != 1) throw DomainError("hyper outer sums to " + rat_str(sum) + ", not 1");
}

Hyper Hyper::make(DomainPtr domain,
                  std::vector<std::pair<Rat, std::vector<Rat>>> weighted_inners) {
    std::map<std::vector<Rat>, Rat> merged;
    for (auto& [p, inner] : weighted_inners) {
        if (sgn(p) < 0) throw DomainError("negative outer weight");
        if (sgn(p) == 0) continue;
        merged[std::move(inner)] += p;
    }
    Hyper h;
    h.domain = std::move(domain);
    h.outer.reserve(merged.size());
    h.inners.reserve(merged.size());
    for (auto& [inner, p] : merged) {
        h.outer.push_back(p);
        h.inners.push_back(inner);
    }
    h.check();
    return h;
}

bool operator==(const Hyper& a, const Hyper& b) {
    return same_domain(a.domain, b.domain) && a.outer == b.outer && a.inners == b.inners;
}

Hyper point_hyper(const Dist& pi) {
    pi.check();
    return Hyper::make(pi.domain, {{Rat(1), pi.w}});
}

Dist barycenter(const Hyper& h) {
    std::vector<Rat> w(h.domain->size(), Rat(0));
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t s = 0; s < w.size(); ++s)
            w[s] += h.outer[i] * h.inners[i][s];
    return Dist::make(h.domain, std::move(w));
}

Hyper project_hyper(const Hyper& h, PairSide side) {
    // split the pair domain and build the index map onto the kept coordinate
    Domain kept;
    std::vector<std::size_t> to_kept(h.domain->size());
    for (std::size_t i = 0; i < h.domain->size(); ++i) {
        const Value& v = (*h.domain)[i];
        if (!v.is_tuple() || v.as_tuple().size() != 2)
            throw DomainError("project_hyper: domain is not a pair space");
        const Value& coord = v.as_tuple()[side == PairSide::Initial ? 0 : 1];
        auto it = std::find(kept.begin(), kept.end(), coord);
        if (it == kept.end()) {
            to_kept[i] = kept.size();
            kept.push_back(coord);
        } else {
            to_kept[i] = static_cast<std::size_t>(it - kept.begin());
        }
    }
    DomainPtr target = std::make_shared<const Domain>(std::move(kept));
    std::vector<std::pair<Rat, std::vector<Rat>>> pushed;
    pushed.reserve(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        std::vector<Rat> w(target->size(), Rat(0));
        for (std::size_t s = 0; s < h.inners[i].size(); ++s)
            w[to_kept[s]] += h.inners[i][s];
        pushed.emplace_back(h.outer[i], std::move(w));
    }
    return Hyper::make(std::move(target), std::move(pushed));
}

} // namespace qif
