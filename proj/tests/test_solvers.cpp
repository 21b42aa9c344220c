#include <catch_amalgamated.hpp>

#include <scatter/solvers.hpp>

using namespace scatter;

namespace {

template <class F> errc kind_of(F&& f) {
    try {
        f();
    } catch (const error& e) {
        return e.kind();
    }
    FAIL("expected a scatter::error");
    return errc::internal;
}

std::vector<Rat> rats(std::initializer_list<Rat> v) { return std::vector<Rat>(v); }

Rat rand_ratio(uint64_t& state) {
    // ratio in [2, 4] with a small rational tail
    state = splitmix64(state);
    Rat tail(2 * static_cast<long>(state % 1001), 1000);
    tail.canonicalize();
    return Rat(2) + tail;
}

} // namespace

TEST_CASE("vandermonde closed form") {
    SECTION("pinned solutions") {
        CHECK(vandermonde_coeffs(rats({Rat(5)}), 1) == rats({Rat(1)}));
        CHECK(vandermonde_coeffs(rats({Rat(1), Rat(2)}), 2) == rats({Rat(2), Rat(-2)}));
        CHECK(vandermonde_coeffs(rats({Rat(1), Rat(2), Rat(4)}), 3) ==
              rats({Rat(8, 3), Rat(-8), Rat(16, 3)}));
        CHECK(vandermonde_coeffs(rats({Rat(1), Rat(3), Rat(7)}), 3) ==
              rats({Rat(7, 4), Rat(-63, 8), Rat(49, 8)}));
    }
    SECTION("residual of the closed form is identically zero") {
        auto nodes = rats({Rat(3, 2), Rat(7, 2), Rat(8), Rat(33, 2)});
        auto c = vandermonde_coeffs(nodes, 4);
        for (const Rat& r : vandermonde_residual(nodes, c)) CHECK(r == 0);
    }
    SECTION("residual detects a wrong solution") {
        auto nodes = rats({Rat(1), Rat(2)});
        auto resid = vandermonde_residual(nodes, rats({Rat(0), Rat(0)}));
        CHECK(resid == rats({Rat(0), Rat(-1)}));
    }
    SECTION("input validation") {
        CHECK(kind_of([] { vandermonde_coeffs({}, 0); }) == errc::config);
        CHECK(kind_of([] { vandermonde_coeffs(rats({Rat(1)}), 2); }) == errc::config);
        CHECK(kind_of([] { vandermonde_coeffs(rats({Rat(0), Rat(2)}), 2); }) == errc::config);
        CHECK(kind_of([] { vandermonde_coeffs(rats({Rat(2), Rat(2)}), 2); }) == errc::singular);
    }
}

TEST_CASE("random doubling sequences solve exactly with bounded coefficients") {
    uint64_t state = 424242;
    for (int trial = 0; trial < 60; ++trial) {
        state = splitmix64(state);
        size_t N = 1 + state % 12;
        bool negative = trial % 2 == 1;
        state = splitmix64(state);
        Rat y = Rat(1) + Rat(static_cast<long>(state % 9000), 1000);
        if (negative) y = -y;
        std::vector<Rat> nodes;
        for (size_t j = 0; j < N; ++j) {
            nodes.push_back(y);
            y *= rand_ratio(state); // |y_{j+1}| >= 2 |y_j| with matching sign
        }
        auto c = vandermonde_coeffs(nodes, N);
        for (const Rat& r : vandermonde_residual(nodes, c)) REQUIRE(r == 0);
        // doubling gives gap products at most 4, hence |c_i| <= 4 |y_i|^{N-1}
        for (size_t i = 0; i < N; ++i) {
            Rat bound = Rat(4) * rat_pow(rat_abs(nodes[i]), static_cast<long>(N) - 1);
            REQUIRE(rat_abs(c[i]) <= bound);
        }
    }
}

TEST_CASE("translate coefficients divide out the kernel magnitude") {
    SECTION("integer exponent stays exact") {
        ExpansionModel mq = classify_basis(KernelSpec{}); // multiquadric defaults
        auto t = translate_coeffs(rats({Rat(1), Rat(2), Rat(4)}), mq, 3, 128);
        REQUIRE(t.exact.has_value());
        CHECK(*t.exact == rats({Rat(8, 3), Rat(-4), Rat(4, 3)}));
        CHECK(t.values.size() == 3);
        CHECK(t.values[1].to_double() == -4.0);

        ExpansionModel ps = classify_basis(poisson_spec());
        auto tp = translate_coeffs(rats({Rat(1), Rat(2)}), ps, 2, 128);
        REQUIRE(tp.exact.has_value());
        CHECK(*tp.exact == rats({Rat(2), Rat(-8)}));
    }
    SECTION("negative-exponent family multiplies by |y|") {
        KernelSpec at;
        at.family = Family::arctan_shifted;
        ExpansionModel m = classify_basis(at); // F = y^{-1}
        auto t = translate_coeffs(rats({Rat(1), Rat(2)}), m, 2, 128);
        REQUIRE(t.exact.has_value());
        CHECK(*t.exact == rats({Rat(2), Rat(-4)}));
    }
    SECTION("fractional exponent uses high-precision division") {
        KernelSpec ab;
        ab.family = Family::arctan_binomial;
        ab.q = 2;
        ab.r = Rat(1, 4); // F = y^{1/2}
        ExpansionModel m = classify_basis(ab);
        auto nodes = rats({Rat(4), Rat(9)});
        auto t = translate_coeffs(nodes, m, 2, 256);
        CHECK_FALSE(t.exact.has_value());
        auto c = vandermonde_coeffs(nodes, 2);
        for (size_t i = 0; i < 2; ++i) {
            Real want = Real::of(c[i], 256) / Real::of(rat_abs(nodes[i]), 256).sqrt();
            CHECK((t.values[i] - want).abs().to_double() < 1e-70);
        }
    }
    SECTION("log families are rejected") {
        KernelSpec lg;
        lg.family = Family::inv_x_log;
        ExpansionModel m = classify_basis(lg);
        CHECK(kind_of([&] { translate_coeffs(rats({Rat(2), Rat(4), Rat(8)}), m, 3, 128); }) ==
              errc::config);
    }
}

TEST_CASE("max-norm residual helper") {
    auto R = [](long v) { return Real::of(v, 128); };
    std::vector<std::vector<Real>> id = {{R(1), R(0)}, {R(0), R(1)}};
    std::vector<Real> x = {R(3), R(-2)};
    CHECK(residual_max(id, x, x).is_zero());
    std::vector<Real> rhs = {R(3), R(-1)};
    CHECK(residual_max(id, x, rhs).to_double() == 1.0);
    CHECK(kind_of([&] { residual_max(id, x, {R(1)}); }) == errc::config);
}

TEST_CASE("log-kernel alternant solve") {
    SECTION("three-node system certifies far below the working precision") {
        auto sol = log_alternant_solve(rats({Rat(16), Rat(33), Rat(67)}), 2, 256);
        CHECK(sol.precision_bits == 256);
        CHECK(sol.a_tilde.size() == 3);
        CHECK(sol.residual <= Real::of(2L, 64).pow_si(-128));
        CHECK(sol.growth_constant > 0);
        CHECK(sol.growth_constant < 2);
    }
    SECTION("single-node degenerate case is y / ln y") {
        auto sol = log_alternant_solve(rats({Rat(5)}), 1, 256);
        REQUIRE(sol.a_tilde.size() == 1);
        Real want = Real::of(Rat(5), 512) / Real::of(Rat(5), 512).ln();
        CHECK((sol.a_tilde[0] - want).abs().to_double() < 1e-60);
    }
    SECTION("residual shrinks as the precision request grows") {
        auto nodes = rats({Rat(16), Rat(33), Rat(67)});
        auto lo = log_alternant_solve(nodes, 2, 128);
        auto mid = log_alternant_solve(nodes, 2, 256);
        auto hi = log_alternant_solve(nodes, 2, 512);
        CHECK(mid.residual < lo.residual);
        CHECK(hi.residual < mid.residual);
    }
    SECTION("growth constant stays bounded as the sequence scales up") {
        for (size_t N : {size_t(2), size_t(3)}) {
            auto build = [&](long e0) {
                std::vector<Rat> nodes;
                for (size_t j = 0; j < 2 * N - 1; ++j)
                    nodes.push_back(rat_pow(Rat(2), e0 + static_cast<long>(j)));
                return nodes;
            };
            auto small = log_alternant_solve(build(8), N, 256);
            auto large = log_alternant_solve(build(16), N, 256);
            CHECK(small.growth_constant < 2.0);
            CHECK(large.growth_constant < 2.0);
            CHECK(large.growth_constant <= small.growth_constant);
        }
    }
    SECTION("input validation") {
        CHECK(kind_of([] { log_alternant_solve(rats({Rat(16), Rat(33)}), 2, 256); }) ==
              errc::config); // needs 2N-1 = 3 nodes
        CHECK(kind_of([] { log_alternant_solve(rats({Rat(16), Rat(16), Rat(67)}), 2, 256); }) ==
              errc::singular);
        CHECK(kind_of([] { log_alternant_solve(rats({Rat(1), Rat(33), Rat(67)}), 2, 256); }) ==
              errc::config); // ln(1) = 0 breaks the scaling
        CHECK(kind_of([] { log_alternant_solve(rats({Rat(16), Rat(33), Rat(67)}), 2, 8); }) ==
              errc::config); // precision floor
        CHECK(kind_of([] { log_alternant_solve(rats({Rat(5)}), 0, 256); }) == errc::config);
    }
    SECTION("precision retry cap raises a precision error") {
        // nearly coincident nodes make the system hopeless at 16 bits, and the
        // cap forbids the retry that would rescue it
        auto nodes = rats({Rat(101, 100), Rat(103, 100), Rat(107, 100)});
        CHECK(kind_of([&] { log_alternant_solve(nodes, 2, 16, 16); }) == errc::precision);
        // with the default cap the doubling retry eventually certifies
        auto sol = log_alternant_solve(nodes, 2, 16);
        CHECK(sol.precision_bits > 16);
        CHECK(sol.residual <= Real::of(2L, 64).pow_si(-static_cast<long>(sol.precision_bits) / 2));
    }
}

TEST_CASE("mixed alternant with an empty power block") {
    // pow range [2, 1] is empty; a single log row remains
    auto sol = mixed_alternant_solve(rats({Rat(3)}), 2, 1, 1, 1, 128);
    REQUIRE(sol.a_tilde.size() == 1);
    Real want = Real::of(Rat(3), 256) / Real::of(Rat(3), 256).ln();
    CHECK((sol.a_tilde[0] - want).abs().to_double() < 1e-30);
}
