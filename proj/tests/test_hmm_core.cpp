#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qif/caps.hpp"
#include "testutil.hpp"

using namespace qif;
using namespace qt;

namespace {

Value pair_of(const char* a, const char* b) {
    return Value::tuple({Value::symbol(a), Value::symbol(b)});
}

} // namespace

TEST_CASE("step: the glimpse channel as a pure channel") {
    HmmMatrix h = pure_channel(password_c2());
    // from A: leak B and stay in A, or leak C and stay in A
    auto d = abc();
    std::size_t iA = 0, iB = 1, iC = 2;
    CHECK(h.at(iA, iB, iA) == rat(1, 2));
    CHECK(h.at(iA, iC, iA) == rat(1, 2));
    CHECK(h.at(iA, iB, iB) == 0);
    CHECK(h.at(iA, iA, iA) == 0);
    CHECK(h.nobs() == 3);
    CHECK(same_domain(h.states, d));
}

TEST_CASE("step: a markov embeds with the unit observation") {
    StochMatrix m = password_m_strict();
    HmmMatrix h = pure_markov(m);
    CHECK(h.nobs() == 1);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t xp = 0; xp < 3; ++xp)
            CHECK(h.at(x, 0, xp) == m.at(x, xp));
}

TEST_CASE("step: identity HMM") {
    HmmMatrix h = step(null_channel(abc()), identity_matrix(abc()));
    CHECK(denote(h, Dist::uniform(abc())).size() == 1);
    CHECK_THROWS_AS(step(password_c2(), identity_matrix(ints(0, 1))), DomainError);
}

TEST_CASE("pure algebra: channel then markov is one step") {
    StochMatrix c = password_c2();
    StochMatrix m = password_m_lax();
    CHECK(seq(pure_channel(c), pure_markov(m)) == step(c, m));
}

TEST_CASE("pure algebra: channels in sequence compose in parallel") {
    Gen gen(29);
    for (int round = 0; round < 20; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 3)));
        StochMatrix c1 = gen.channel(d, gen.obs_domain(gen.pick(1, 3), "a"));
        StochMatrix c2 = gen.channel(d, gen.obs_domain(gen.pick(1, 3), "b"));
        CHECK(seq(pure_channel(c1), pure_channel(c2)) == pure_channel(parallel(c1, c2)));
    }
}

TEST_CASE("pure algebra: markovs in sequence multiply") {
    Gen gen(31);
    for (int round = 0; round < 20; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 3)));
        StochMatrix m1 = gen.markov(d), m2 = gen.markov(d);
        CHECK(seq(pure_markov(m1), pure_markov(m2)) == pure_markov(cascade(m1, m2)));
    }
}

TEST_CASE("seq: the lax composite has identical rows") {
    HmmMatrix lax = lax_composite();
    REQUIRE(lax.nobs() == 3);
    // every row: 1/6 at AB, AC, BA, BC, CA, CB and 0 on the diagonal pairs
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t xp = 0; xp < 3; ++xp)
                CHECK(lax.at(x, y, xp) == (y == xp ? Rat(0) : rat(1, 6)));
}

TEST_CASE("seq: the strict composite rows differ by input") {
    HmmMatrix strict = strict_composite();
    // row A: 1/4 at (A,B),(A,C),(B,C),(C,B)
    CHECK(strict.at(0, 0, 1) == rat(1, 4));
    CHECK(strict.at(0, 0, 2) == rat(1, 4));
    CHECK(strict.at(0, 1, 2) == rat(1, 4));
    CHECK(strict.at(0, 2, 1) == rat(1, 4));
    CHECK(strict.at(0, 0, 0) == 0);
    CHECK(strict.at(0, 1, 0) == 0);
    // row B: 1/4 at (A,C),(B,A),(B,C),(C,A)
    CHECK(strict.at(1, 0, 2) == rat(1, 4));
    CHECK(strict.at(1, 1, 0) == rat(1, 4));
    CHECK(strict.at(1, 1, 2) == rat(1, 4));
    CHECK(strict.at(1, 2, 0) == rat(1, 4));
    // row C: 1/4 at (A,B),(B,A),(C,A),(C,B)
    CHECK(strict.at(2, 0, 1) == rat(1, 4));
    CHECK(strict.at(2, 1, 0) == rat(1, 4));
    CHECK(strict.at(2, 2, 0) == rat(1, 4));
    CHECK(strict.at(2, 2, 1) == rat(1, 4));
}

TEST_CASE("seq: composing with the identity step relabels only") {
    Gen gen(37);
    auto d = ints(0, 2);
    HmmMatrix h = seq_steps(gen.steps_over(d, 2));
    HmmMatrix ident = step(null_channel(d), identity_matrix(d));
    HmmMatrix right = seq(h, ident);
    // unit flattening keeps the observation alphabet, so this is equality
    CHECK(right == h);
}

TEST_CASE("seq is associative up to tuple flattening") {
    Gen gen(41);
    for (int round = 0; round < 15; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 2)));
        HmmMatrix a = seq_steps({gen.step_over(d, gen.pick(1, 2), "a")});
        HmmMatrix b = seq_steps({gen.step_over(d, gen.pick(1, 2), "b")});
        HmmMatrix c = seq_steps({gen.step_over(d, gen.pick(1, 2), "c")});
        CHECK(seq(seq(a, b), c) == seq(a, seq(b, c)));
    }
}

TEST_CASE("effective_channel: of a step it is the channel") {
    Gen gen(43);
    for (int round = 0; round < 20; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 3)));
        StochMatrix c = gen.channel(d, gen.obs_domain(gen.pick(1, 3), "y"));
        StochMatrix m = gen.markov(d);
        CHECK(effective_channel(step(c, m)) == c);
    }
}

TEST_CASE("effective_channel: strict composite sums its final margins") {
    StochMatrix chan = effective_channel(strict_composite());
    CHECK(chan.dense_row(0) == rats({{1, 2}, {1, 4}, {1, 4}}));
    CHECK(chan.dense_row(1) == rats({{1, 4}, {1, 2}, {1, 4}}));
    CHECK(chan.dense_row(2) == rats({{1, 4}, {1, 4}, {1, 2}}));
}

TEST_CASE("effective_channel: pure markovs leak nothing") {
    StochMatrix chan = effective_channel(pure_markov(password_m_strict()));
    CHECK(chan == null_channel(abc()));
}

TEST_CASE("effective_channel_steps: single step, and the two-step law") {
    Gen gen(47);
    for (int round = 0; round < 20; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 3)));
        HmmStep s1 = gen.step_over(d, gen.pick(1, 3), "a");
        HmmStep s2 = gen.step_over(d, gen.pick(1, 3), "b");
        CHECK(effective_channel_steps({s1}) == s1.channel);
        CHECK(effective_channel_steps({s1, s2}) ==
              parallel(s1.channel, cascade(s1.markov, s2.channel)));
    }
    CHECK_THROWS_AS(effective_channel_steps({}), DomainError);
}

TEST_CASE("effective_channel_steps agrees with the composite route") {
    Gen gen(53);
    for (int round = 0; round < 30; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 3)));
        HmmSteps steps = gen.steps_over(d, 3);
        CHECK(effective_channel_steps(steps) == effective_channel(seq_steps(steps)));
    }
}

TEST_CASE("denote: strict and lax composites at the uniform prior") {
    Hyper strict = denote(strict_composite(), Dist::uniform(abc()));
    Hyper lax = denote(lax_composite(), Dist::uniform(abc()));
    CHECK(strict.size() == 3);
    CHECK(lax.size() == 3);
    CHECK(project_hyper(strict, PairSide::Initial) == skewed_initial_hyper());
    CHECK(project_hyper(lax, PairSide::Initial) == point_hyper(Dist::uniform(abc())));
}

TEST_CASE("denote: identity markov yields the diagonal point hyper") {
    Dist pi = Dist::make(abc(), rats({{1, 2}, {1, 3}, {1, 6}}));
    Hyper h = denote(pure_markov(identity_matrix(abc())), pi);
    REQUIRE(h.size() == 1);
    CHECK(h.outer[0] == 1);
    auto idx = [&](const char* a, const char* b) {
        return index_of(*h.domain, pair_of(a, b));
    };
    CHECK(h.inners[0][idx("A", "A")] == rat(1, 2));
    CHECK(h.inners[0][idx("B", "B")] == rat(1, 3));
    CHECK(h.inners[0][idx("C", "C")] == rat(1, 6));
}

TEST_CASE("denote: point priors give single-support initial margins") {
    Gen gen(97);
    for (int round = 0; round < 10; ++round) {
        auto d = ints(0, 2);
        HmmMatrix h = seq_steps(gen.steps_over(d, 2));
        std::size_t x0 = gen.pick(0, 2);
        Hyper hy = denote(h, Dist::point(d, x0));
        for (const auto& inner : hy.inners)
            for (std::size_t x = 0; x < 3; ++x)
                for (std::size_t xp = 0; xp < 3; ++xp)
                    if (x != x0) CHECK(inner[x * 3 + xp] == 0);
    }
}

TEST_CASE("denote: barycenter's initial marginal is the prior") {
    Gen gen(59);
    for (int round = 0; round < 30; ++round) {
        auto d = ints(0, static_cast<long>(gen.pick(1, 3)));
        Dist pi = gen.dist(d);
        HmmMatrix h = seq_steps(gen.steps_over(d, 3));
        Dist bary = barycenter(denote(h, pi));
        std::size_t n = d->size();
        for (std::size_t x = 0; x < n; ++x) {
            Rat marg = 0;
            for (std::size_t xp = 0; xp < n; ++xp) marg += bary[x * n + xp];
            CHECK(marg == pi[x]);
        }
    }
}

TEST_CASE("lift: diagonal correlation reproduces the denotation") {
    Dist pi = Dist::make(abc(), rats({{1, 2}, {1, 4}, {1, 4}}));
    AbstractHmm h{strict_composite()};
    Hyper direct = h.apply(pi);
    Hyper lifted = lift(h, Correlation::identity(pi).joint);
    CHECK(lifted.outer == direct.outer);
    CHECK(lifted.inners == direct.inners); // Z relabels the initial coordinate
}

TEST_CASE("lift: independent correlation carries nothing about Z") {
    Gen gen(61);
    auto z = gen.obs_domain(3, "z");
    Dist pz = Dist::make(z, rats({{1, 2}, {1, 3}, {1, 6}}));
    Correlation corr = Correlation::independent(pz, Dist::uniform(abc()));
    AbstractHmm h{strict_composite()};
    Hyper lifted = lift(h, corr.joint);
    // every inner's Z-marginal equals pz
    std::size_t n = 3;
    for (const auto& inner : lifted.inners)
        for (std::size_t zi = 0; zi < 3; ++zi) {
            Rat marg = 0;
            for (std::size_t xp = 0; xp < n; ++xp) marg += inner[zi * n + xp];
            CHECK(marg == pz[zi]);
        }
}

TEST_CASE("lift: strict with identity correlation projects to the skewed hyper") {
    AbstractHmm h{strict_composite()};
    Hyper lifted = lift(h, Correlation::identity(Dist::uniform(abc())).joint);
    CHECK(project_hyper(lifted, PairSide::Initial) == skewed_initial_hyper());
}

TEST_CASE("lift is insensitive to the conditional at zero-marginal states") {
    // correlation whose X-marginal misses state B
    auto z = ints(0, 1);
    Joint corr = joint(z, abc(), {{{1, 2}, {0, 1}, {0, 1}}, {{0, 1}, {0, 1}, {1, 2}}});
    auto [xm, cond_uniform] = factor_joint_left(corr);
    // alternative conditional: point mass at z0 where the marginal is zero
    std::vector<std::vector<Rat>> alt;
    for (std::size_t x = 0; x < 3; ++x) alt.push_back(cond_uniform.dense_row(x));
    alt[1] = rats({{1, 1}, {0, 1}});
    StochMatrix cond_point = StochMatrix::make(abc(), z, alt);

    AbstractHmm h{strict_composite()};
    CHECK(lift_with(h, cond_uniform, xm) == lift_with(h, cond_point, xm));
}

TEST_CASE("extend: singleton Z reduces to the denotation") {
    auto z1 = syms({"z"});
    Dist pi = Dist::make(abc(), rats({{1, 2}, {1, 4}, {1, 4}}));
    std::vector<std::vector<Rat>> dense{pi.w};
    Joint corr = Joint::make(z1, abc(), dense);
    AbstractHmm h{strict_composite()};
    Hyper ext = extend(h, z1, corr);
    Hyper direct = h.apply(pi);
    CHECK(ext.outer == direct.outer);
    CHECK(ext.inners == direct.inners);
}

TEST_CASE("extend distinguishes leaking before overwriting") {
    // leak X; X := 0   versus   X := 0   over a two-point space
    auto d = ints(0, 1);
    StochMatrix to_zero = mat(d, d, {{{1, 1}, {0, 1}}, {{1, 1}, {0, 1}}});
    StochMatrix leak_x = identity_matrix(d); // deterministic leak of the state
    HmmMatrix leaky = seq(pure_channel(leak_x), pure_markov(to_zero));
    HmmMatrix silent = pure_markov(to_zero);

    Joint corr = Correlation::identity(Dist::uniform(d)).joint;
    Hyper e_leaky = extend(AbstractHmm{leaky}, d, corr);
    Hyper e_silent = extend(AbstractHmm{silent}, d, corr);

    // the silent program's extension is a point hyper; the leak splits it
    CHECK(e_silent.size() == 1);
    CHECK(e_leaky.size() == 2);
}

TEST_CASE("extend: barycenter is the correlation pushed through the markov behavior") {
    Gen gen(67);
    for (int round = 0; round < 20; ++round) {
        auto d = ints(0, 1);
        HmmSteps steps = gen.steps_over(d, 2);
        HmmMatrix h = seq_steps(steps);
        Joint corr = gen.correlation(2, d);
        Hyper ext = extend(AbstractHmm{h}, corr.rows, corr);
        Dist bary = barycenter(ext);
        // direct-summation oracle: mass at ((z,x),x') = corr(z,x) * T(x,x')
        std::size_t n = 2;
        for (std::size_t z = 0; z < 2; ++z)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t xp = 0; xp < n; ++xp) {
                    Rat t = 0;
                    for (std::size_t y = 0; y < h.nobs(); ++y) t += h.at(x, y, xp);
                    CHECK(bary[(z * n + x) * n + xp] == corr.at(z, x) * t);
                }
    }
}

TEST_CASE("kleisli: matrix route equals the semantic route on the password fragments") {
    AbstractHmm first{pure_markov(password_m_strict())};
    AbstractHmm second{pure_channel(password_c2())};
    Dist pi = Dist::uniform(abc());
    Hyper via_matrix = kleisli(first, second).apply(pi);
    Hyper via_semantics = kleisli_semantic(first, second, pi);
    CHECK(via_matrix == via_semantics);
    CHECK(via_matrix == denote(strict_composite(), pi));
}

TEST_CASE("kleisli: identity HMM is a unit") {
    Gen gen(71);
    auto d = ints(0, 2);
    AbstractHmm h{seq_steps(gen.steps_over(d, 2))};
    AbstractHmm ident{step(null_channel(d), identity_matrix(d))};
    Dist pi = gen.dist(d, true);
    CHECK(kleisli(h, ident).apply(pi) == h.apply(pi));
}

TEST_CASE("kleisli: dual route on random instances and priors") {
    Gen gen(73);
    for (int round = 0; round < 25; ++round) {
        auto d = ints(0, 1);
        AbstractHmm h1{seq_steps(gen.steps_over(d, 2))};
        AbstractHmm h2{seq_steps(gen.steps_over(d, 2))};
        for (int p = 0; p < 5; ++p) {
            Dist pi = gen.dist(d);
            CHECK(kleisli(h1, h2).apply(pi) == kleisli_semantic(h1, h2, pi));
        }
    }
}

TEST_CASE("column cap guards composition growth") {
    auto big = ints(0, 40);
    Caps saved = caps();
    caps().max_columns = 1000;
    StochMatrix wide = identity_matrix(big); // 41 columns as a channel
    CHECK_THROWS_AS(parallel(wide, wide), CapError); // 1681 flat columns
    caps() = saved;
}
