#include "qif/json_io.hpp"

namespace qif {

json to_json(const Rat& r) { return rat_str(r); }

json to_json(const Domain& d) {
    json out = json::array();
    for (const auto& v : d) out.push_back(v.to_string());
    return out;
}

json to_json(const Dist& d) {
    json weights = json::object();
    for (std::size_t i = 0; i < d.size(); ++i)
        weights[(*d.domain)[i].to_string()] = rat_str(d[i]);
    return json{{"domain", to_json(*d.domain)}, {"weights", weights}};
}

namespace {

json dense_entries(const DomainPtr& cols, const std::vector<SparseRow>& data) {
    json rows = json::array();
    for (const auto& row : data) {
        std::vector<Rat> dense(cols->size(), Rat(0));
        for (const auto& [c, v] : row) dense[c] = v;
        json jr = json::array();
        for (const auto& v : dense) jr.push_back(rat_str(v));
        rows.push_back(std::move(jr));
    }
    return rows;
}

std::vector<std::vector<Rat>> entries_from_json(const json& j) {
    std::vector<std::vector<Rat>> out;
    for (const auto& row : j) {
        std::vector<Rat> r;
        for (const auto& cell : row) r.push_back(rat_parse(cell.get<std::string>()));
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

json to_json(const StochMatrix& m) {
    return json{{"rows", to_json(*m.rows)},
                {"cols", to_json(*m.cols)},
                {"entries", dense_entries(m.cols, m.data)}};
}

json to_json(const Joint& j) {
    return json{{"rows", to_json(*j.rows)},
                {"cols", to_json(*j.cols)},
                {"entries", dense_entries(j.cols, j.data)}};
}

json to_json(const Hyper& h) {
    json outer = json::array();
    for (const auto& p : h.outer) outer.push_back(rat_str(p));
    json inners = json::array();
    for (const auto& inner : h.inners) {
        json ji = json::array();
        for (const auto& v : inner) ji.push_back(rat_str(v));
        inners.push_back(std::move(ji));
    }
    return json{{"domain", to_json(*h.domain)}, {"outer", outer}, {"inners", inners}};
}

json to_json(const HmmMatrix& h) {
    json rows = json::array();
    for (const auto& row : h.data) {
        std::vector<Rat> dense(h.ncols(), Rat(0));
        for (const auto& [c, v] : row) dense[c] = v;
        json jr = json::array();
        for (const auto& v : dense) jr.push_back(rat_str(v));
        rows.push_back(std::move(jr));
    }
    return json{{"states", to_json(*h.states)}, {"obs", to_json(*h.obs)},
                {"entries", rows}};
}

json to_json(const HmmSteps& steps) {
    json out = json::array();
    for (const auto& s : steps)
        out.push_back(json{{"channel", to_json(s.channel)}, {"markov", to_json(s.markov)}});
    return out;
}

json to_json(const GainFunction& g) {
    json table = json::array();
    for (const auto& row : g.table) {
        json jr = json::array();
        for (const auto& v : row) jr.push_back(rat_str(v));
        table.push_back(std::move(jr));
    }
    return json{{"choices", to_json(*g.choices)},
                {"domain", to_json(*g.domain)},
                {"table", table}};
}

json to_json(const Correlation& c) {
    json j = to_json(c.joint);
    j["zDomain"] = to_json(*c.joint.rows);
    return j;
}

json to_json(const LeakageReport& r) {
    return json{{"priorVulnerability", rat_str(r.prior_vulnerability)},
                {"posteriorVulnerability", rat_str(r.posterior_vulnerability)},
                {"ratio", rat_str(r.ratio)},
                {"bits", r.bits}};
}

json to_json(const Bits& b) {
    return json{{"ratio", rat_str(b.ratio)}, {"bits", b.bits}};
}

json to_json(const RefinementVerdict& v) {
    json j{{"holds", v.holds}, {"reason", refine_reason_name(v.reason)}};
    if (!v.note.empty()) j["note"] = v.note;
    if (v.witness) {
        json w = json::array();
        for (const auto& row : *v.witness) {
            json jr = json::array();
            for (const auto& x : row) jr.push_back(rat_str(x));
            w.push_back(std::move(jr));
        }
        j["witness"] = std::move(w);
    }
    if (v.counterexample) {
        j["counterexample"] = to_json(*v.counterexample);
        if (sgn(v.counterexample_shift) != 0)
            j["counterexampleShift"] = rat_str(v.counterexample_shift);
    }
    return j;
}

Rat rat_from_json(const json& j) { return rat_parse(j.get<std::string>()); }

DomainPtr domain_from_json(const json& j) {
    Domain d;
    for (const auto& v : j) d.push_back(Value::parse(v.get<std::string>()));
    return make_domain(std::move(d));
}

Dist dist_from_json(const json& j) {
    DomainPtr dom = domain_from_json(j.at("domain"));
    std::vector<Rat> w(dom->size(), Rat(0));
    for (const auto& [key, val] : j.at("weights").items()) {
        Value v = Value::parse(key);
        w[index_of(*dom, v)] = rat_parse(val.get<std::string>());
    }
    return Dist::make(std::move(dom), std::move(w));
}

StochMatrix stoch_from_json(const json& j) {
    return StochMatrix::make(domain_from_json(j.at("rows")),
                             domain_from_json(j.at("cols")),
                             entries_from_json(j.at("entries")));
}

Joint joint_from_json(const json& j) {
    return Joint::make(domain_from_json(j.at("rows")), domain_from_json(j.at("cols")),
                       entries_from_json(j.at("entries")));
}

Hyper hyper_from_json(const json& j) {
    DomainPtr dom = domain_from_json(j.at("domain"));
    std::vector<std::pair<Rat, std::vector<Rat>>> weighted;
    const auto& outer = j.at("outer");
    const auto& inners = j.at("inners");
    if (outer.size() != inners.size())
        throw DomainError("hyper JSON outer/inners mismatch");
    for (std::size_t i = 0; i < outer.size(); ++i) {
        std::vector<Rat> w;
        for (const auto& cell : inners[i]) w.push_back(rat_parse(cell.get<std::string>()));
        weighted.emplace_back(rat_parse(outer[i].get<std::string>()), std::move(w));
    }
    return Hyper::make(std::move(dom), std::move(weighted));
}

HmmMatrix hmm_from_json(const json& j) {
    DomainPtr states = domain_from_json(j.at("states"));
    DomainPtr obs = domain_from_json(j.at("obs"));
    auto entries = entries_from_json(j.at("entries"));
    std::vector<SparseRow> data;
    for (const auto& row : entries) {
        if (row.size() != states->size() * obs->size())
            throw DomainError("hmm JSON row width mismatch");
        SparseRow r;
        for (std::size_t c = 0; c < row.size(); ++c)
            if (sgn(row[c]) != 0) r.emplace_back(static_cast<std::uint32_t>(c), row[c]);
        data.push_back(std::move(r));
    }
    return HmmMatrix::from_sparse(std::move(states), std::move(obs), std::move(data));
}

HmmSteps steps_from_json(const json& j) {
    HmmSteps steps;
    for (const auto& s : j)
        steps.push_back(HmmStep{stoch_from_json(s.at("channel")),
                                stoch_from_json(s.at("markov"))});
    return steps;
}

GainFunction gain_from_json(const json& j) {
    return GainFunction::make(domain_from_json(j.at("choices")),
                              domain_from_json(j.at("domain")),
                              entries_from_json(j.at("table")));
}

Correlation correlation_from_json(const json& j) {
    Joint joint = joint_from_json(j);
    if (j.contains("zDomain")) {
        DomainPtr z = domain_from_json(j.at("zDomain"));
        if (!same_domain(z, joint.rows))
            throw DomainError("correlation zDomain disagrees with its rows");
    }
    return Correlation::make(std::move(joint));
}

} // namespace qif
