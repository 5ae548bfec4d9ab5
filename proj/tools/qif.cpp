// qif: exact quantitative information flow analysis for small probabilistic
// programs. Programs compile to hidden-Markov step lists; every probability
// is an exact rational, and bits appear only in reports.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qif/caps.hpp"
#include "qif/dsl.hpp"
#include "qif/json_io.hpp"
#include "qif/refine.hpp"

namespace fs = std::filesystem;
using namespace qif;

namespace {

constexpr int kExitError = 1;
constexpr int kExitCap = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

std::string bits10(double b) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", b);
    return buf;
}

struct Common {
    std::string format = "text";
    std::string prior_spec = "uniform";
    std::string gain_spec = "gid";
    std::optional<long long> unroll_override;
    std::optional<std::uint64_t> seed;

    bool json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "output format (text|json)")
        ->check(CLI::IsMember({"text", "json"}));
}

void add_caps(CLI::App& app) {
    app.add_option("--max-states", caps().max_states, "state-space size cap");
    app.add_option("--max-columns", caps().max_columns, "matrix column cap");
    app.add_option("--max-strategies", caps().max_strategies, "strategy-space cap");
}

struct Compiled {
    dsl::Program program;
    DomainPtr states;
    HmmSteps steps;
};

Compiled load_program(const std::string& path, const Common& c) {
    Compiled out{dsl::parse(slurp(path)), nullptr, {}};
    out.states = dsl::state_space(out.program);
    dsl::CompileOptions opts;
    opts.unroll_override = c.unroll_override;
    out.steps = dsl::compile(out.program, opts);
    return out;
}

Dist load_prior(const Common& c, const DomainPtr& states) {
    if (c.prior_spec == "uniform") return Dist::uniform(states);
    Dist d = dist_from_json(json::parse(slurp(c.prior_spec)));
    if (!same_domain(d.domain, states))
        throw DomainError("prior domain does not match the program's state space");
    return d;
}

GainFunction load_gain(const Common& c, const DomainPtr& domain) {
    if (c.gain_spec == "gid") return gid(domain);
    GainFunction g = gain_from_json(json::parse(slurp(c.gain_spec)));
    if (!same_domain(g.domain, domain))
        throw DomainError("gain domain does not match the analysis domain");
    return g;
}

void emit(const Common& c, const json& j, const std::string& text) {
    if (c.json()) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

// ---------------------------------------------------------------- reports

std::string render_dist(const Dist& d) {
    std::string out = "[";
    bool first = true;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (sgn(d[i]) == 0) continue;
        if (!first) out += ", ";
        out += (*d.domain)[i].to_string() + "@" + rat_str(d[i]);
        first = false;
    }
    return out + "]";
}

std::string render_hyper(const Hyper& h) {
    std::ostringstream out;
    out << h.size() << " inner(s) over " << h.domain->size() << " value(s)\n";
    for (std::size_t i = 0; i < h.size(); ++i)
        out << "  " << rat_str(h.outer[i]) << " -> " << render_dist(h.inner_dist(i))
            << "\n";
    return out.str();
}

std::string render_leakage(const LeakageReport& r) {
    std::ostringstream out;
    out << "prior vulnerability     " << rat_str(r.prior_vulnerability) << "\n"
        << "posterior vulnerability " << rat_str(r.posterior_vulnerability) << "\n"
        << "ratio                   " << rat_str(r.ratio) << "\n"
        << "leakage                 " << bits10(r.bits) << " bits\n";
    return out.str();
}

std::string render_bits(const char* label, const Bits& b) {
    std::ostringstream out;
    out << label << " " << bits10(b.bits) << " bits  (log2 of " << rat_str(b.ratio)
        << ")\n";
    return out.str();
}

std::string render_verdict(const RefinementVerdict& v) {
    std::ostringstream out;
    out << refine_reason_name(v.reason) << "\n";
    if (!v.note.empty()) out << v.note << "\n";
    if (v.witness) {
        out << "witness:\n";
        for (const auto& row : *v.witness) {
            out << " ";
            for (const auto& x : row) out << " " << rat_str(x);
            out << "\n";
        }
    }
    if (v.counterexample) {
        out << "counterexample gain (choices x domain):\n";
        for (const auto& row : v.counterexample->table) {
            out << " ";
            for (const auto& x : row) out << " " << rat_str(x);
            out << "\n";
        }
        if (sgn(v.counterexample_shift) != 0)
            out << "(shifted to nonnegative by " << rat_str(v.counterexample_shift)
                << ")\n";
    }
    return out.str();
}

// --------------------------------------------------------------- commands

json program_ast_json(const dsl::Program& p);

int cmd_parse(const std::string& file, const Common& c) {
    dsl::Program p = dsl::parse(slurp(file));
    if (c.json()) {
        std::cout << program_ast_json(p).dump(2) << "\n";
    } else {
        std::cout << p.vars.size() << " variable(s), " << p.maps.size()
                  << " map(s), " << p.body.size() << " top-level statement(s)\n";
        for (const auto& v : p.vars) {
            std::cout << "  var " << v.name << " :";
            for (const auto& val : v.dom.values) std::cout << " " << val.to_string();
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_compile(const std::string& file, const Common& c, const std::string& out_path) {
    Compiled comp = load_program(file, c);
    json j = to_json(comp.steps);
    if (!out_path.empty()) {
        spit(out_path, j.dump(2) + "\n");
        std::cout << "wrote " << out_path << " (" << comp.steps.size() << " step(s), "
                  << comp.states->size() << " state(s))\n";
    } else if (c.json()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << comp.steps.size() << " step(s) over " << comp.states->size()
                  << " state(s); observation alphabet sizes:";
        for (const auto& s : comp.steps) std::cout << " " << s.channel.ncols();
        std::cout << "\n";
    }
    return 0;
}

int cmd_hyper(const std::string& file, const Common& c, const std::string& project) {
    Compiled comp = load_program(file, c);
    Dist prior = load_prior(c, comp.states);
    Hyper h = denote(seq_steps(comp.steps), prior);
    if (project == "initial") h = project_hyper(h, PairSide::Initial);
    else if (project == "final") h = project_hyper(h, PairSide::Final);
    emit(c, to_json(h), render_hyper(h));
    return 0;
}

int cmd_leakage(const std::string& file, const Common& c) {
    Compiled comp = load_program(file, c);
    Dist prior = load_prior(c, comp.states);
    GainFunction g = load_gain(c, comp.states);
    LeakageReport r = leakage(g, prior, effective_channel_steps(comp.steps));
    emit(c, to_json(r), render_leakage(r));
    return 0;
}

int cmd_capacity(const std::string& file, const Common& c) {
    Compiled comp = load_program(file, c);
    Bits b = min_capacity(effective_channel_steps(comp.steps));
    emit(c, to_json(b), render_bits("min-capacity", b));
    return 0;
}

int cmd_ccap(const std::string& file, const Common& c) {
    Compiled comp = load_program(file, c);
    Bits b = ccap(comp.steps);
    emit(c, to_json(b), render_bits("collateral-capacity bound", b));
    return 0;
}

int cmd_collateral(const std::string& file, const Common& c,
                   const std::string& corr_path) {
    Compiled comp = load_program(file, c);
    Correlation corr = correlation_from_json(json::parse(slurp(corr_path)));
    if (!same_domain(corr.x_domain(), comp.states))
        throw DomainError("correlation X side does not match the program's state space");
    HmmMatrix h = seq_steps(comp.steps);
    GainFunction g = load_gain(c, corr.z_domain());
    LeakageReport direct = collateral_leakage(g, corr, h);

    Thm1Gains extremal = thm1_gains(corr);
    StochMatrix chan = effective_channel(h);
    StochMatrix dal = collateral_channel(corr, chan);
    Bits sup = capacity_fixed_prior(corr.z_marginal, dal);
    LeakageReport via_ghat = leakage(extremal.ghat, corr.z_marginal, dal);
    LeakageReport via_join = leakage(extremal.ghat_join, corr.x_marginal, chan);
    Thm2Pair bound = check_thm2(corr, h);

    json j{{"leakage", to_json(direct)},
           {"capacityFixedPrior", to_json(sup)},
           {"extremalGainLeakage", to_json(via_ghat)},
           {"extremalJoinLeakage", to_json(via_join)},
           {"uniformBoundLhs", to_json(bound.lhs)},
           {"uniformBoundRhs", to_json(bound.rhs)},
           {"uniformBoundRhsOnSupport", to_json(bound.support_rhs)}};
    std::ostringstream text;
    text << "collateral leakage (given gain):\n" << render_leakage(direct);
    text << render_bits("collateral capacity at this correlation", sup);
    text << "  realized by the extremal gain: " << bits10(via_ghat.bits)
         << " bits, via the state-side gain: " << bits10(via_join.bits) << " bits\n";
    text << render_bits("uniform bound lhs", bound.lhs);
    text << render_bits("uniform bound rhs", bound.rhs);
    text << render_bits("uniform bound rhs on the marginal's support", bound.support_rhs);
    emit(c, j, text.str());
    return 0;
}

int cmd_refine(const std::string& file_p, const std::string& file_q, const Common& c,
               bool structural, bool bayes_refute, bool full) {
    Compiled cp = load_program(file_p, c);
    Compiled cq = load_program(file_q, c);
    if (!same_domain(cp.states, cq.states))
        throw DomainError("the two programs have different state spaces");
    HmmMatrix hp = seq_steps(cp.steps), hq = seq_steps(cq.steps);

    if (structural) {
        RefinementVerdict v = refine_structural(hp, hq);
        emit(c, to_json(v), render_verdict(v));
        return 0;
    }
    Dist prior = load_prior(c, cp.states);
    RefinementVerdict v =
        refine_hmm(hp, hq, prior, full ? HmmOrder::Full : HmmOrder::Initial);
    json j = to_json(v);
    std::ostringstream text;
    text << render_verdict(v);
    if (bayes_refute) {
        BayesRefutation r = bayes_refutation(hp, hq, prior);
        j["bayesRefutation"] = json{{"refuted", r.refuted}};
        if (r.refuted) {
            j["bayesRefutation"]["correlation"] = to_json(*r.correlation);
            j["bayesRefutation"]["gain"] = to_json(*r.gain);
            j["bayesRefutation"]["priorBayes"] = rat_str(r.prior_bayes);
            j["bayesRefutation"]["posteriorBayesLeft"] = rat_str(r.posterior_bayes_h1);
            j["bayesRefutation"]["posteriorBayesRight"] = rat_str(r.posterior_bayes_h2);
            text << "REFINEMENT DENIED: under the induced correlation, Bayes "
                    "vulnerability ranks the programs strictly the wrong way "
                    "around:\n  left  "
                 << rat_str(r.posterior_bayes_h1) << "\n  right "
                 << rat_str(r.posterior_bayes_h2) << "\n";
        } else {
            text << "no refutation: the initial-state comparison does not fail\n";
        }
    }
    emit(c, j, text.str());
    return 0;
}

int cmd_demo_passwords(const Common& c, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::string lax = dsl::demo_passwords_lax();
    std::string strict = dsl::demo_passwords_strict();
    spit(out_dir + "/passwords_lax.qif", lax);
    spit(out_dir + "/passwords_strict.qif", strict);
    std::cout << "wrote " << out_dir << "/passwords_lax.qif and "
              << out_dir << "/passwords_strict.qif\n";
    for (auto [name, src] : {std::pair{"lax", lax}, std::pair{"strict", strict}}) {
        dsl::Program p = dsl::parse(src);
        HmmSteps steps = dsl::compile(p);
        Hyper h = denote(seq_steps(steps), Dist::uniform(dsl::state_space(p)));
        std::cout << "\n" << name << ", joint initial/final hyper:\n"
                  << render_hyper(h);
        std::cout << name << ", initial-state hyper:\n"
                  << render_hyper(project_hyper(h, PairSide::Initial));
    }
    (void)c;
    return 0;
}

int cmd_demo_expmod(const Common& c, const std::string& out_dir,
                    const std::string& bits_range,
                    const std::vector<std::string>& divisor_sets) {
    int lo = 4, hi = 8;
    if (!bits_range.empty()) {
        auto dots = bits_range.find("..");
        if (dots == std::string::npos) {
            lo = hi = std::stoi(bits_range);
        } else {
            lo = std::stoi(bits_range.substr(0, dots));
            hi = std::stoi(bits_range.substr(dots + 2));
        }
    }
    std::vector<std::vector<int>> sets;
    for (const auto& s : divisor_sets) {
        std::vector<int> ds;
        for (char ch : s)
            if (ch >= '0' && ch <= '9') ds.push_back(ch - '0');
        sets.push_back(ds);
    }
    if (sets.empty()) sets = {{2}, {2, 3}, {2, 3, 5}};

    fs::create_directories(out_dir);
    std::printf("%-8s", "bits");
    for (const auto& ds : sets) {
        std::string label = "{";
        for (std::size_t i = 0; i < ds.size(); ++i)
            label += (i ? "," : "") + std::to_string(ds[i]);
        label += "}";
        std::printf("%12s", label.c_str());
    }
    std::printf("\n");
    json rows = json::array();
    for (int bits = lo; bits <= hi; ++bits) {
        std::printf("%-8d", bits);
        json row{{"bits", bits}};
        for (const auto& ds : sets) {
            std::string name = out_dir + "/expmod_" + std::to_string(bits) + "_";
            for (int d : ds) name += std::to_string(d);
            name += ".qif";
            std::string src = dsl::demo_expmod(bits, ds);
            spit(name, src);
            HmmSteps steps = dsl::compile(dsl::parse(src));
            Bits cap = min_capacity(effective_channel_steps(steps));
            std::printf("%12.2f", cap.bits);
            row[name] = cap.bits;
        }
        std::printf("\n");
        rows.push_back(std::move(row));
    }
    if (c.json()) std::cout << rows.dump(2) << "\n";
    return 0;
}

int cmd_demo_correlation(const Common& c, const std::string& program_path,
                         std::size_t z_size, const std::string& out_path) {
    Compiled comp = load_program(program_path, c);
    std::mt19937_64 rng(c.seed.value_or(0));
    std::size_t nx = comp.states->size();
    Domain z;
    for (std::size_t i = 0; i < z_size; ++i)
        z.push_back(Value::symbol("z" + std::to_string(i)));
    std::vector<long> weights(z_size * nx, 0);
    long total = 0;
    while (total == 0) {
        total = 0;
        for (auto& w : weights) {
            w = static_cast<long>(rng() % 4);
            total += w;
        }
    }
    std::vector<std::vector<Rat>> dense(z_size, std::vector<Rat>(nx));
    for (std::size_t i = 0; i < z_size; ++i)
        for (std::size_t k = 0; k < nx; ++k)
            dense[i][k] = rat(weights[i * nx + k], total);
    Correlation corr = Correlation::make(
        Joint::make(make_domain(std::move(z)), comp.states, dense));
    std::string payload = to_json(corr).dump(2) + "\n";
    if (out_path.empty()) std::cout << payload;
    else {
        spit(out_path, payload);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

// a structured dump of the checked AST, enough to diff programs and to see
// what the front end resolved
json expr_json(const dsl::ExprPtr& e);

json dist_json(const dsl::DistExpr& d) {
    json choices = json::array();
    for (const auto& c : d.choices)
        choices.push_back(json{{"value", expr_json(c.value)}, {"weight", rat_str(c.weight)}});
    return json{{"uniform", d.uniform}, {"choices", choices}};
}

json stmts_json(const dsl::StmtList& body);

json stmt_json(const dsl::Stmt& s) {
    switch (s.kind) {
    case dsl::Stmt::Kind::Assign:
        return json{{"assign", s.var_name}, {"dist", dist_json(s.dist)}};
    case dsl::Stmt::Kind::Leak:
        return json{{"leak", dist_json(s.dist)}};
    case dsl::Stmt::Kind::If:
        return json{{"if", expr_json(s.guard)},
                    {"then", stmts_json(s.then_body)},
                    {"else", stmts_json(s.else_body)}};
    default:
        return json{{"while", expr_json(s.guard)},
                    {"body", stmts_json(s.body)},
                    {"unroll", s.unroll}};
    }
}

json stmts_json(const dsl::StmtList& body) {
    json out = json::array();
    for (const auto& s : body) out.push_back(stmt_json(s));
    return out;
}

json expr_json(const dsl::ExprPtr& e) {
    using K = dsl::Expr::Kind;
    switch (e->kind) {
    case K::Var: return json{{"var", e->name}};
    case K::IntLit: return json{{"int", e->int_val}};
    case K::BoolLit: return json{{"bool", e->bool_val}};
    case K::SymLit: return json{{"sym", e->name}};
    case K::Succ: return json{{"succ", expr_json(e->a)}};
    case K::Pred: return json{{"pred", expr_json(e->a)}};
    case K::MapApp: return json{{"map", e->name}, {"arg", expr_json(e->a)}};
    default: {
        static const char* names[] = {"+", "-", "*", "mod", "div", "==", "!=", "<", "<="};
        return json{{"op", names[static_cast<int>(e->op)]},
                    {"lhs", expr_json(e->a)},
                    {"rhs", expr_json(e->b)}};
    }
    }
}

json program_ast_json(const dsl::Program& p) {
    json vars = json::array();
    for (const auto& v : p.vars) {
        json dom = json::array();
        for (const auto& val : v.dom.values) dom.push_back(val.to_string());
        vars.push_back(json{{"name", v.name}, {"domain", dom}});
    }
    json maps = json::array();
    for (const auto& m : p.maps) maps.push_back(json{{"name", m.name}});
    return json{{"vars", vars}, {"maps", maps}, {"body", stmts_json(p.body)}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact quantitative information flow analyzer"};
    app.require_subcommand(1);
    add_caps(app);

    Common common;
    app.add_option("--unroll-override", common.unroll_override,
                   "replace every loop's unroll bound");
    app.add_option("--seed", common.seed, "seed for generated fixtures");

    std::string file, file_q, out_path, project, corr_path, bits_range, prog_path;
    std::string demo_dir = "demo", corr_out;
    std::vector<std::string> divisor_sets;
    bool structural = false, bayes_refute = false, full = false;
    std::size_t z_size = 2;

    auto* parse_cmd = app.add_subcommand("parse", "parse and type-check a program");
    parse_cmd->add_option("file", file)->required();
    add_common(parse_cmd, common);

    auto* compile_cmd = app.add_subcommand("compile", "compile a program to HMM steps");
    compile_cmd->add_option("file", file)->required();
    compile_cmd->add_option("-o,--out", out_path, "write the steps JSON here");
    add_common(compile_cmd, common);

    auto* hyper_cmd = app.add_subcommand("hyper", "posterior hyper over initial x final state");
    hyper_cmd->add_option("file", file)->required();
    hyper_cmd->add_option("--prior", common.prior_spec, "uniform or a dist JSON path");
    hyper_cmd->add_option("--project", project, "initial|final")
        ->check(CLI::IsMember({"initial", "final"}));
    add_common(hyper_cmd, common);

    auto* leakage_cmd = app.add_subcommand("leakage", "g-leakage about the initial state");
    leakage_cmd->add_option("file", file)->required();
    leakage_cmd->add_option("--prior", common.prior_spec);
    leakage_cmd->add_option("--gain", common.gain_spec, "gid or a gain JSON path");
    add_common(leakage_cmd, common);

    auto* capacity_cmd = app.add_subcommand("capacity", "min-capacity of the effective channel");
    capacity_cmd->add_option("file", file)->required();
    add_common(capacity_cmd, common);

    auto* ccap_cmd = app.add_subcommand("ccap", "linear-cost collateral capacity bound");
    ccap_cmd->add_option("file", file)->required();
    add_common(ccap_cmd, common);

    auto* coll_cmd = app.add_subcommand("collateral", "leakage about a correlated secret");
    coll_cmd->add_option("file", file)->required();
    coll_cmd->add_option("--correlation", corr_path, "correlation JSON")->required();
    coll_cmd->add_option("--gain", common.gain_spec, "gid or a gain JSON path");
    add_common(coll_cmd, common);

    auto* refine_cmd = app.add_subcommand("refine", "decide secure refinement between two programs");
    refine_cmd->add_option("fileP", file)->required();
    refine_cmd->add_option("fileQ", file_q)->required();
    refine_cmd->add_option("--prior", common.prior_spec);
    refine_cmd->add_flag("--structural", structural,
                         "all-prior observation post-processing check");
    refine_cmd->add_flag("--bayes-refute", bayes_refute,
                         "on failure, build the correlation that inverts Bayes vulnerability");
    refine_cmd->add_flag("--full", full,
                         "compare joint initial/final hypers instead of initial-state ones");
    add_common(refine_cmd, common);

    auto* demo_cmd = app.add_subcommand("demo", "write example programs and summaries");
    demo_cmd->require_subcommand(1);
    auto* demo_pw = demo_cmd->add_subcommand("passwords", "the two password programs");
    demo_pw->add_option("--out", demo_dir, "output directory");
    auto* demo_exp = demo_cmd->add_subcommand("expmod", "obfuscated exponentiation sweep");
    demo_exp->add_option("--out", demo_dir, "output directory");
    demo_exp->add_option("--bits", bits_range, "bit range, e.g. 4..8");
    demo_exp->add_option("--divisors", divisor_sets,
                         "divisor sets, e.g. 2 2,3 2,3,5");
    add_common(demo_exp, common);
    auto* demo_corr = demo_cmd->add_subcommand("correlation", "random correlation fixture");
    demo_corr->add_option("--program", prog_path, "program whose state space to use")
        ->required();
    demo_corr->add_option("--z", z_size, "collateral alphabet size");
    demo_corr->add_option("--out", corr_out, "output path (stdout if omitted)");

    // global flags (caps, unroll override, seed) may follow a subcommand
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*parse_cmd) return cmd_parse(file, common);
        if (*compile_cmd) return cmd_compile(file, common, out_path);
        if (*hyper_cmd) return cmd_hyper(file, common, project);
        if (*leakage_cmd) return cmd_leakage(file, common);
        if (*capacity_cmd) return cmd_capacity(file, common);
        if (*ccap_cmd) return cmd_ccap(file, common);
        if (*coll_cmd) return cmd_collateral(file, common, corr_path);
        if (*refine_cmd)
            return cmd_refine(file, file_q, common, structural, bayes_refute, full);
        if (*demo_pw) return cmd_demo_passwords(common, demo_dir);
        if (*demo_exp) return cmd_demo_expmod(common, demo_dir, bits_range, divisor_sets);
        if (*demo_corr) return cmd_demo_correlation(common, prog_path, z_size, corr_out);
    } catch (const CapError& e) {
        std::cerr << "error: " << e.what() << " (cap: " << e.cap
                  << "; raise it with --" << e.cap << ")\n";
        return kExitCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
