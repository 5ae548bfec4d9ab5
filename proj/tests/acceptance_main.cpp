// Acceptance suite: end-to-end checks of the five headline results, one
// pass/fail line each. Exits nonzero if any criterion fails.
//
//   1. the divisor-obfuscation capacity table (three divisor sets, 4..8 bits)
//   2. the password example: matrices, hypers, projections, entropy numbers
//   3. the two-bit array example: leakages, the linear bound, the exact gap
//   4. the refinement verdicts between the password programs, with the
//      collateral Bayes refutation
//   5. the randomized property families (seed-fixed, 200+ cases each)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qif/dsl.hpp"
#include "qif/refine.hpp"
#include "property_suites.hpp"

using namespace qif;
using namespace qt;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

struct Check {
    bool ok = true;
    std::string why;

    void require(bool cond, const std::string& msg) {
        if (ok && !cond) {
            ok = false;
            why = msg;
        }
    }
};

// ---------------------------------------------------------- criterion 1

void criterion_table() {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    Check c;

    const std::vector<std::vector<int>> sets{{2}, {2, 3}, {2, 3, 5}};
    const double expected23[] = {2.80, 3.32, 3.83, 4.34, 4.88};
    const double expected235[] = {2.22, 2.61, 2.92, 3.21, 3.51};
    for (int bits = 4; bits <= 8; ++bits) {
        for (std::size_t k = 0; k < sets.size(); ++k) {
            HmmSteps steps = dsl::compile(dsl::parse(dsl::demo_expmod(bits, sets[k])));
            Bits cap = min_capacity(effective_channel_steps(steps));
            std::ostringstream at;
            at << "bits=" << bits << " divisors index " << k;
            if (k == 0) {
                // the full exponent leaks: exactly 2^bits inside the log
                Rat expect = 1;
                for (int i = 0; i < bits; ++i) expect *= 2;
                c.require(cap.ratio == expect, at.str() + ": not the whole secret");
            } else {
                double want = (k == 1 ? expected23 : expected235)[bits - 4];
                c.require(std::abs(cap.bits - want) <= 0.01,
                          at.str() + ": got " + std::to_string(cap.bits));
            }
        }
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    c.require(secs < 10.0, "sweep took " + std::to_string(secs) + "s");
    std::ostringstream detail;
    detail.setf(std::ios::fixed);
    detail.precision(2);
    detail << "15 capacities matched (" << secs << "s)";
    report(1, "obfuscated exponentiation capacity table", c.ok,
           c.ok ? detail.str() : c.why);
}

// ---------------------------------------------------------- criterion 2

Hyper expected_lax_hyper() {
    auto d = pair_domain(abc(), abc());
    auto inner = [&](const char* missing) {
        std::vector<Rat> w(9, Rat(0));
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t xp = 0; xp < 3; ++xp) {
                const char* names[] = {"A", "B", "C"};
                if (names[xp][0] == missing[0]) continue;
                w[x * 3 + xp] = rat(1, 6);
            }
        return w;
    };
    return Hyper::make(d, {{rat(1, 3), inner("A")},
                           {rat(1, 3), inner("B")},
                           {rat(1, 3), inner("C")}});
}

Hyper expected_strict_hyper() {
    auto d = pair_domain(abc(), abc());
    auto at = [&](const char* x, const char* xp) {
        return index_of(*d, Value::tuple({Value::symbol(x), Value::symbol(xp)}));
    };
    auto inner = [&](std::initializer_list<std::pair<const char*, const char*>> pts) {
        std::vector<Rat> w(9, Rat(0));
        for (auto [x, xp] : pts) w[at(x, xp)] = rat(1, 4);
        return w;
    };
    return Hyper::make(
        d, {{rat(1, 3), inner({{"A", "B"}, {"A", "C"}, {"B", "C"}, {"C", "B"}})},
            {rat(1, 3), inner({{"A", "C"}, {"B", "A"}, {"B", "C"}, {"C", "A"}})},
            {rat(1, 3), inner({{"A", "B"}, {"B", "A"}, {"C", "A"}, {"C", "B"}})}});
}

void criterion_passwords() {
    Check c;
    HmmSteps lax_steps = dsl::compile(dsl::parse(dsl::demo_passwords_lax()));
    HmmSteps strict_steps = dsl::compile(dsl::parse(dsl::demo_passwords_strict()));
    HmmMatrix lax = seq_steps(lax_steps), strict = seq_steps(strict_steps);

    // composite matrices, entry for entry
    for (std::size_t x = 0; x < 3 && c.ok; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t xp = 0; xp < 3; ++xp)
                c.require(lax.at(x, y, xp) == (y == xp ? Rat(0) : rat(1, 6)),
                          "lax composite matrix mismatch");
    auto strict_expect = [&](std::size_t x, std::size_t y, std::size_t xp) {
        // the state moves somewhere else, then a value other than the new
        // state is glimpsed: mass 1/4 exactly when xp != x and y != xp
        return (xp != x && y != xp) ? rat(1, 4) : Rat(0);
    };
    for (std::size_t x = 0; x < 3 && c.ok; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t xp = 0; xp < 3; ++xp)
                c.require(strict.at(x, y, xp) == strict_expect(x, y, xp),
                          "strict composite matrix mismatch");

    Dist uniform = Dist::uniform(abc());
    Hyper lax_h = denote(lax, uniform);
    Hyper strict_h = denote(strict, uniform);
    c.require(lax_h == expected_lax_hyper(), "lax joint hyper mismatch");
    c.require(strict_h == expected_strict_hyper(), "strict joint hyper mismatch");

    Hyper lax_initial = project_hyper(lax_h, PairSide::Initial);
    Hyper strict_initial = project_hyper(strict_h, PairSide::Initial);
    c.require(lax_initial == point_hyper(uniform), "lax initial projection mismatch");
    c.require(strict_initial == skewed_initial_hyper(),
              "strict initial projection mismatch");

    c.require(std::abs(shannon_hyper(lax_initial) - std::log2(3.0)) < 1e-9,
              "lax Shannon entropy");
    c.require(std::abs(shannon_hyper(strict_initial) - 1.5) < 1e-9,
              "strict Shannon entropy");
    c.require(hyper_vulnerability(gid(abc()), lax_initial) == rat(1, 3),
              "lax Bayes vulnerability");
    c.require(hyper_vulnerability(gid(abc()), strict_initial) == rat(1, 2),
              "strict Bayes vulnerability");
    report(2, "password example (matrices, hypers, entropies)", c.ok,
           c.ok ? "exact rational equality throughout" : c.why);
}

// ---------------------------------------------------------- criterion 3

void criterion_two_bit_array() {
    Check c;
    dsl::Program p = dsl::parse(
        "var XS : int[0..3]\n"
        "map flip : XS -> XS { 0->3, 1->2, 2->1, 3->0 }\n"
        "map hi : XS -> int[0..1] { 0->0, 1->0, 2->1, 3->1 }\n"
        "map lo : XS -> int[0..1] { 0->0, 1->1, 2->0, 3->1 }\n"
        "XS <- choose { XS @ 1/3, flip(XS) @ 2/3 }\n"
        "leak choose { hi(XS) @ 1/2, lo(XS) @ 1/2 }\n"
        "XS <- choose { XS @ 1/2, flip(XS) @ 1/2 }\n");
    HmmSteps steps = dsl::compile(p);
    c.require(steps.size() == 2 && steps[0].markov == appc_m1() &&
                  steps[1].channel == appc_c2() && steps[1].markov == appc_m2(),
              "compiled steps do not match the worked matrices");

    Dist u4 = Dist::uniform(xs4());
    LeakageReport lm1 = leakage(gid(xs4()), u4, appc_m1());
    c.require(lm1.ratio == rat(8, 3), "markov-as-channel leakage ratio");
    c.require(std::abs(lm1.bits - std::log2(8.0 / 3.0)) < 1e-9,
              "markov-as-channel leakage bits");

    LeakageReport lc2 = leakage(gid(xs4()), u4, appc_c2());
    c.require(lc2.ratio == 2 && lc2.bits == 1.0, "bit-leak channel leakage");

    Bits bound = ccap(steps);
    c.require(bound.ratio == 2 && bound.bits == 1.0, "linear capacity bound");

    Bits exact = min_capacity(effective_channel_steps(steps));
    c.require(exact.ratio == rat(4, 3), "exact effective-channel capacity ratio");
    c.require(std::abs(exact.bits - std::log2(4.0 / 3.0)) < 1e-9,
              "exact effective-channel capacity bits");
    c.require(exact.ratio < bound.ratio, "the bound must exceed the exact value");
    report(3, "two-bit array example (leakages and capacity gap)", c.ok,
           c.ok ? "lg(8/3), 1 bit, bound 1 > exact lg(4/3)" : c.why);
}

// ---------------------------------------------------------- criterion 4

void criterion_refinement() {
    Check c;
    HmmMatrix lax = seq_steps(dsl::compile(dsl::parse(dsl::demo_passwords_lax())));
    HmmMatrix strict = seq_steps(dsl::compile(dsl::parse(dsl::demo_passwords_strict())));
    Dist uniform = Dist::uniform(abc());

    RefinementVerdict fwd = refine_hmm(strict, lax, uniform, HmmOrder::Initial);
    c.require(fwd.holds && fwd.witness.has_value(), "strict-to-lax verdict");
    if (fwd.witness) {
        // verify the witness equations independently
        Hyper h1 = project_hyper(denote(strict, uniform), PairSide::Initial);
        Hyper h2 = project_hyper(denote(lax, uniform), PairSide::Initial);
        const auto& w = *fwd.witness;
        for (std::size_t i = 0; i < h1.size() && c.ok; ++i) {
            Rat row = 0;
            for (std::size_t j = 0; j < h2.size(); ++j) row += w[i][j];
            c.require(row == h1.outer[i], "witness row sums");
        }
        for (std::size_t j = 0; j < h2.size() && c.ok; ++j)
            for (std::size_t s = 0; s < 3; ++s) {
                Rat mix = 0;
                for (std::size_t i = 0; i < h1.size(); ++i)
                    mix += w[i][j] * h1.inners[i][s];
                c.require(mix == h2.outer[j] * h2.inners[j][s], "witness mixtures");
            }
    }

    RefinementVerdict bwd = refine_hmm(lax, strict, uniform, HmmOrder::Initial);
    c.require(!bwd.holds && bwd.counterexample.has_value(), "lax-to-strict verdict");
    if (bwd.counterexample) {
        Hyper h1 = project_hyper(denote(lax, uniform), PairSide::Initial);
        Hyper h2 = project_hyper(denote(strict, uniform), PairSide::Initial);
        c.require(hyper_vulnerability(*bwd.counterexample, h1) <
                      hyper_vulnerability(*bwd.counterexample, h2),
                  "counterexample does not separate");
    }

    BayesRefutation r = bayes_refutation(lax, strict, uniform);
    c.require(r.refuted, "no Bayes refutation produced");
    c.require(r.posterior_bayes_h1 < r.posterior_bayes_h2,
              "collateral Bayes vulnerabilities not inverted");
    std::string detail = c.ok
        ? "holds with verified witness / fails with verified gain; Bayes " +
              rat_str(r.posterior_bayes_h1) + " < " + rat_str(r.posterior_bayes_h2)
        : c.why;
    report(4, "refinement suite (password programs)", c.ok, detail);
}

// ---------------------------------------------------------- criterion 5

void criterion_properties() {
    struct Family {
        const char* name;
        std::function<PropResult()> run;
    };
    const std::vector<Family> families{
        {"effective-channel dual route", [] { return prop_effective_channel_dual_route(1001, 220); }},
        {"pure-step algebra", [] { return prop_pure_step_algebra(1003, 220); }},
        {"Kleisli dual route", [] { return prop_kleisli_dual_route(1005, 220); }},
        {"conditional invariance", [] { return prop_lift_conditional_invariance(1007, 220); }},
        {"linear capacity bound", [] { return prop_ccap_bound(1009, 220); }},
        {"extremal-gain equalities", [] { return prop_extremal_gain_equalities(1011, 220); }},
        {"uniform collateral bound", [] { return prop_uniform_bound(1013, 220); }},
        {"miracle bound", [] { return prop_miracle_bound(1017, 240); }},
        {"Dalenius transfer identity", [] { return prop_dalenius_transfer(1019, 240); }},
        {"gain transformation", [] { return prop_gain_transformation(1021, 220); }},
        {"sequencing monotonicity", [] { return prop_seq_monotone(1023, 220); }},
        {"lifting preserves refinement", [] { return prop_lift_preserves_refinement(1027, 220); }},
        {"extension failures refute", [] { return prop_extension_refutes(1029, 200); }},
    };
    bool ok = true;
    std::string why;
    int total_cases = 0;
    for (const auto& f : families) {
        PropResult r = f.run();
        total_cases += r.cases;
        if (!r.ok()) {
            ok = false;
            why = std::string(f.name) + ": " +
                  (r.failures ? r.what : "only " + std::to_string(r.cases) + " cases");
            break;
        }
    }
    report(5, "randomized property families", ok,
           ok ? std::to_string(families.size()) + " families, " +
                    std::to_string(total_cases) + " cases, all exact"
              : why);
}

} // namespace

int main() {
    criterion_table();
    criterion_passwords();
    criterion_two_bit_array();
    criterion_refinement();
    criterion_properties();
    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
