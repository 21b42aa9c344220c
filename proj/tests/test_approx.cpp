#include <catch_amalgamated.hpp>

#include <scatter/approx.hpp>

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

Polynomial poly(std::initializer_list<Rat> ascending) { return Polynomial(ascending); }

KernelSpec mq_spec() { return KernelSpec{}; } // multiquadric defaults

} // namespace

TEST_CASE("approximation targets") {
    SECTION("builtins match the standard library") {
        Target s = Target::builtin("sin");
        Target c = Target::builtin("cos");
        Target e = Target::builtin("exp");
        Target ab = Target::builtin("abs");
        Target r = Target::builtin("runge");
        for (double x : {-0.9, -0.3, 0.0, 0.4, 1.0}) {
            CHECK(s.eval(x) == std::sin(x));
            CHECK(c.eval(x) == std::cos(x));
            CHECK(e.eval(x) == std::exp(x));
            CHECK(ab.eval(x) == std::fabs(x));
            CHECK(r.eval(x) == 1.0 / (1.0 + 25.0 * x * x));
        }
        CHECK(kind_of([] { Target::builtin("tanh"); }) == errc::config);
    }
    SECTION("polynomial targets evaluate exactly") {
        Target p = Target::polynomial_target(poly({Rat(1, 4), Rat(0), Rat(1)}));
        CHECK(p.is_polynomial());
        CHECK(p.eval(0.5) == 0.5);
    }
    SECTION("table targets interpolate and clamp") {
        Target t = Target::table_target({{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}});
        CHECK(t.eval(0.5) == 1.0);
        CHECK(t.eval(1.5) == 1.0);
        CHECK(t.eval(-5.0) == 0.0);
        CHECK(t.eval(7.0) == 0.0);
        CHECK(t.eval(1.0) == 2.0);
        CHECK(kind_of([] { Target::table_target({{0.0, 1.0}}); }) == errc::config);
        CHECK(kind_of([] { Target::table_target({{0.0, 1.0}, {0.0, 2.0}}); }) == errc::config);
    }
}

TEST_CASE("Chebyshev polynomials are exact") {
    auto T = chebyshev_list(5);
    REQUIRE(T.size() == 6);
    CHECK(T[0] == poly({1}));
    CHECK(T[1] == poly({0, 1}));
    CHECK(T[2] == poly({-1, 0, 2}));
    CHECK(T[3] == poly({0, -3, 0, 4}));
    CHECK(T[5] == poly({0, 5, 0, -20, 0, 16}));
}

TEST_CASE("Chebyshev pre-approximation") {
    SECTION("polynomial targets pass through verbatim") {
        Polynomial p = poly({Rat(-1, 3), Rat(0), Rat(1)});
        ChebResult r = cheb_approx(Target::polynomial_target(p), Rat(-1), Rat(1), 1e-12);
        CHECK(r.p == p);
        CHECK(r.achieved == 0.0);
        CHECK(r.degree == 2);
    }
    SECTION("sin needs degree 3 at 1e-3 and degree 5 at 1e-5") {
        ChebResult r3 = cheb_approx(Target::builtin("sin"), Rat(-1), Rat(1), 1e-3);
        CHECK(r3.degree == 3);
        CHECK(r3.achieved < 1e-3);
        ChebResult r5 = cheb_approx(Target::builtin("sin"), Rat(-1), Rat(1), 1e-5);
        CHECK(r5.degree == 5);
        CHECK(r5.achieved < 1e-5);
        CHECK(r5.achieved > 0);
    }
    SECTION("non-smooth target exhausts the degree cap") {
        try {
            cheb_approx(Target::builtin("abs"), Rat(-1), Rat(1), 1e-9, 32);
            FAIL("expected a budget error");
        } catch (const error& e) {
            CHECK(e.kind() == errc::budget);
            REQUIRE(e.has_detail());
            CHECK(e.detail() > 0);
            CHECK(e.detail() < 1.0);
        }
    }
    SECTION("interval validation") {
        CHECK(kind_of([] { cheb_approx(Target::builtin("sin"), Rat(1), Rat(1), 1e-3); }) ==
              errc::config);
        CHECK(kind_of([] { cheb_approx(Target::builtin("sin"), Rat(-1), Rat(1), 0.0); }) ==
              errc::config);
    }
}

TEST_CASE("change of basis into expansion polynomials") {
    ExpansionModel mq = classify_basis(mq_spec());
    SECTION("pinned multiquadric coefficients") {
        auto d1 = monomial_to_basis(poly({1}), mq);
        REQUIRE(d1.size() == 1);
        CHECK(d1[0] == 2); // 1 = 2 * A_2
        auto dx = monomial_to_basis(poly({0, 1}), mq);
        REQUIRE(dx.size() == 2);
        CHECK(dx[0] == 0);
        CHECK(dx[1] == 2); // x = 2 * A_3
        auto dx2 = monomial_to_basis(poly({0, 0, 1}), mq);
        REQUIRE(dx2.size() == 3);
        CHECK(dx2[0] == Rat(1, 2)); // x^2 = 2 A_4 + (1/2) A_2
        CHECK(dx2[1] == 0);
        CHECK(dx2[2] == 2);
    }
    SECTION("zero polynomial maps to the empty list") {
        CHECK(monomial_to_basis(Polynomial(), mq).empty());
    }
    SECTION("round-trip across kernel families") {
        std::vector<KernelSpec> kernels;
        kernels.push_back(mq_spec());
        kernels.push_back(poisson_spec());
        {
            KernelSpec k = mq_spec();
            k.r = Rat(3, 2);
            kernels.push_back(k);
        }
        {
            KernelSpec k;
            k.family = Family::arctan_shifted;
            kernels.push_back(k);
        }
        {
            KernelSpec k;
            k.family = Family::arctan_binomial;
            k.q = 2;
            k.r = Rat(1, 4);
            kernels.push_back(k);
        }
        {
            KernelSpec k;
            k.family = Family::inv_x_log;
            kernels.push_back(k);
        }
        {
            KernelSpec k;
            k.family = Family::related_log;
            k.q = 2;
            k.L = 2;
            kernels.push_back(k);
        }
        {
            KernelSpec k;
            k.family = Family::related_arctan;
            k.q = 2;
            k.r = Rat(-3, 4);
            kernels.push_back(k);
        }
        uint64_t state = 555;
        auto next_rat = [&] {
            state = splitmix64(state);
            Rat r(static_cast<long>(state % 41) - 20, 1 + static_cast<long>(state % 7));
            r.canonicalize();
            return r;
        };
        for (const KernelSpec& k : kernels) {
            ExpansionModel model = classify_basis(k);
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<Rat> coef;
                for (int j = 0; j <= 6; ++j) coef.push_back(next_rat());
                Polynomial p(coef);
                auto d = monomial_to_basis(p, model);
                Polynomial back;
                for (size_t m = 0; m < d.size(); ++m)
                    back += d[m] * model.A(model.K + static_cast<unsigned long>(m));
                REQUIRE(back == p);
            }
        }
    }
}

TEST_CASE("combination evaluation") {
    SECTION("empty sum is zero") {
        Combination s;
        s.kernel = mq_spec();
        CHECK(eval_combination(s, Real::of(0.3, 128)).is_zero());
    }
    SECTION("single unit term reproduces the kernel") {
        Combination s;
        s.kernel = mq_spec();
        s.precision_bits = 128;
        s.terms.emplace_back(Rat(0), Real::of(1L, 128));
        CHECK(eval_combination(s, Real::of(0L, 128)).to_double() == 1.0); // sqrt(1 + 0)
        double v = eval_combination(s, Real::of(1L, 128)).to_double();
        CHECK(v == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
    }
    SECTION("mirrored nodes with equal weights give an even function") {
        Combination s;
        s.kernel = mq_spec();
        s.precision_bits = 256;
        s.terms.emplace_back(Rat(-3), Real::of(Rat(5, 7), 256));
        s.terms.emplace_back(Rat(3), Real::of(Rat(5, 7), 256));
        for (Rat x : {Rat(1, 3), Rat(9, 8)}) {
            Real lhs = eval_combination(s, Real::of(x, 256));
            Real rhs = eval_combination(s, Real::of(-x, 256));
            CHECK((lhs - rhs).abs().to_double() < 1e-70);
        }
    }
}

TEST_CASE("translate recovery of one basis polynomial") {
    std::vector<Rat> grid = make_grid(Rat(-1), Rat(1), 101);
    SECTION("multiquadric error halves when the first node doubles") {
        ExpansionModel model = classify_basis(mq_spec());
        Provider prov = Provider::integers();
        for (unsigned long index : {2ul, 3ul}) {
            Polynomial Ak = model.A(index);
            std::vector<double> errs;
            for (long e = 10; e <= 12; ++e) {
                DoublingSequence Y =
                    extract_doubling(prov, Sign::positive, rat_pow(Rat(2), e), index + 1);
                ReproduceResult rr = reproduce_basis_poly(model, Y, index, 256);
                CHECK(rr.comb.terms.size() == index + 1);
                CHECK(rr.solver_residual == 0.0); // exact Vandermonde path
                errs.push_back(sup_error_vs_poly(rr.comb, Ak, grid, 256));
            }
            for (size_t i = 0; i + 1 < errs.size(); ++i) {
                REQUIRE(errs[i] > 0);
                double ratio = errs[i + 1] / errs[i];
                CHECK(ratio > 0.45);
                CHECK(ratio < 0.55);
            }
        }
    }
    SECTION("log-family recovery improves with the extraction threshold") {
        KernelSpec lg;
        lg.family = Family::inv_x_log;
        ExpansionModel model = classify_basis(lg);
        Provider prov = Provider::integers();
        Polynomial A2 = model.A(2); // -2x
        double prev = -1;
        for (long e : {8L, 12L, 16L}) {
            DoublingSequence Y = extract_doubling(prov, Sign::positive, rat_pow(Rat(2), e), 3);
            ReproduceResult rr = reproduce_basis_poly(model, Y, 2, 256);
            CHECK(rr.comb.terms.size() == 3);
            CHECK(rr.solver_residual < 1e-30);
            CHECK(rr.growth_constant > 0);
            double err = sup_error_vs_poly(rr.comb, A2, grid, 256);
            if (prev >= 0) CHECK(err < prev);
            prev = err;
        }
    }
    SECTION("sign requirements are enforced") {
        KernelSpec neg;
        neg.q = 3;
        neg.r = Rat(2, 3);
        ExpansionModel model = classify_basis(neg); // needs negative translates
        DoublingSequence pos = extract_doubling(Provider::integers(), Sign::positive, Rat(8), 3);
        CHECK(kind_of([&] { reproduce_basis_poly(model, pos, 3, 256); }) == errc::config);

        DoublingSequence negseq =
            extract_doubling(Provider::integers(), Sign::negative, Rat(8), 4);
        ReproduceResult rr = reproduce_basis_poly(model, negseq, 3, 256);
        CHECK(rr.comb.terms.size() == 4);
    }
    SECTION("log families reject indices below the offset") {
        KernelSpec rl;
        rl.family = Family::related_log;
        rl.q = 2;
        rl.L = 2;
        ExpansionModel model = classify_basis(rl);
        DoublingSequence Y = extract_doubling(Provider::integers(), Sign::positive, Rat(8), 3);
        CHECK(kind_of([&] { reproduce_basis_poly(model, Y, 1, 256); }) == errc::config);
    }
    SECTION("insufficient nodes are rejected up front") {
        ExpansionModel model = classify_basis(mq_spec());
        DoublingSequence Y = extract_doubling(Provider::integers(), Sign::positive, Rat(8), 2);
        CHECK(kind_of([&] { reproduce_basis_poly(model, Y, 4, 256); }) == errc::config);
    }
}

TEST_CASE("equispaced rational grid") {
    auto g = make_grid(Rat(-1), Rat(1), 5);
    CHECK(g == std::vector<Rat>{Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1)});
    CHECK(kind_of([] { make_grid(Rat(0), Rat(1), 1); }) == errc::config);
}

TEST_CASE("measured certificates") {
    SECTION("zero error across the board") {
        Combination s;
        s.kernel = mq_spec();
        Certificate c = certify(s, Target::polynomial_target(Polynomial()), Rat(0), Rat(1), 11,
                                1e-6);
        CHECK(c.sup_error == 0.0);
        CHECK(c.success);
        for (const auto& [p, v] : c.lp_errors) CHECK(v == 0.0);
    }
    SECTION("constant gap of one") {
        Combination s;
        s.kernel = mq_spec();
        Certificate c =
            certify(s, Target::polynomial_target(poly({1})), Rat(0), Rat(1), 11, 0.5);
        CHECK(c.sup_error == 1.0);
        CHECK_FALSE(c.success);
        REQUIRE(c.lp_errors.size() == 2);
        CHECK(c.lp_errors[0].first == 1);
        CHECK(c.lp_errors[0].second == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(c.lp_errors[1].second == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("sample rows carry the grid") {
        Combination s;
        s.kernel = mq_spec();
        Certificate c = certify(s, Target::polynomial_target(Polynomial()), Rat(-1), Rat(1), 5,
                                1e-6);
        REQUIRE(c.samples.size() == 5);
        CHECK(c.samples.front().x == -1.0);
        CHECK(c.samples.back().x == 1.0);
        CHECK(c.samples[2].x == 0.0);
    }
    SECTION("validation") {
        Combination s;
        s.kernel = mq_spec();
        Target z = Target::polynomial_target(Polynomial());
        CHECK(kind_of([&] { certify(s, z, Rat(1), Rat(0), 11, 1e-6); }) == errc::config);
        CHECK(kind_of([&] { certify(s, z, Rat(0), Rat(1), 11, 1e-6, {0}); }) == errc::config);
    }
}

TEST_CASE("full approximation pipeline") {
    SECTION("single basis polynomial as a polynomial target") {
        // x/2 is exactly the multiquadric expansion element at index 3
        Target t = Target::polynomial_target(poly({0, Rat(1, 2)}));
        ApproxOptions opts;
        opts.grid_n = 201;
        ApproxResult r = approximate(t, Rat(-1), Rat(1), 1e-4, mq_spec(),
                                     Provider::integers(), opts);
        CHECK(r.cert.success);
        CHECK(r.cert.sup_error < 1e-4);
        CHECK(r.cert.cheb_degree == -1);
        REQUIRE(r.cert.stages.size() == 1);
        CHECK(r.cert.stages[0].index == 3);
        CHECK(r.cert.stages[0].d == 1);
        CHECK(r.cert.stages[0].n_terms == 4);
        CHECK(r.comb.terms.size() == 4);
        CHECK(r.cert.y1_used == r.cert.stages[0].y1);
    }
    SECTION("zero target yields an empty combination") {
        Target t = Target::polynomial_target(Polynomial());
        ApproxOptions opts;
        opts.grid_n = 11;
        ApproxResult r = approximate(t, Rat(-1), Rat(1), 1e-3, mq_spec(),
                                     Provider::integers(), opts);
        CHECK(r.comb.terms.empty());
        CHECK(r.cert.sup_error == 0.0);
        CHECK(r.cert.success);
        CHECK(r.cert.stages.empty());
        CHECK(r.cert.y1_used == 0);
    }
    SECTION("stages over the same extraction threshold share translates") {
        // 1/2 + (x^2/2 - 1/8) = A_2 + A_4: two stages, nodes of the smaller
        // system are a prefix of the larger one after merging
        Target t = Target::polynomial_target(poly({Rat(3, 8), Rat(0), Rat(1, 2)}));
        ApproxOptions opts;
        opts.grid_n = 51;
        ApproxResult r = approximate(t, Rat(-1), Rat(1), 100.0, mq_spec(),
                                     Provider::integers(), opts);
        REQUIRE(r.cert.stages.size() == 2);
        CHECK(r.cert.stages[0].index == 2);
        CHECK(r.cert.stages[1].index == 4);
        CHECK(r.cert.stages[0].y1 == r.cert.stages[1].y1);
        CHECK(r.comb.terms.size() == 5); // 3 + 5 translates, 3 shared
        for (size_t i = 1; i < r.comb.terms.size(); ++i)
            CHECK(r.comb.terms[i - 1].first < r.comb.terms[i].first);
    }
    SECTION("builtin target under the jittered provider") {
        ApproxOptions opts;
        opts.grid_n = 301;
        ApproxResult r = approximate(Target::builtin("sin"), Rat(-1), Rat(1), 1e-2, mq_spec(),
                                     Provider::jittered(Rat(1, 4), 20260813), opts);
        CHECK(r.cert.success);
        CHECK(r.cert.sup_error < 1e-2);
        CHECK(r.cert.sup_error > 0);
        CHECK(r.cert.cheb_degree >= 3);
        CHECK(r.cert.cheb_error < 5e-3);
        CHECK(r.cert.y1_used > 8);
        for (const StageReport& st : r.cert.stages) {
            CHECK(st.index >= 2);
            CHECK(st.weighted_error <= 5e-3);
        }
        // L^1 on [-1,1] is at most 2 * sup
        REQUIRE_FALSE(r.cert.lp_errors.empty());
        CHECK(r.cert.lp_errors[0].second <= 2 * r.cert.sup_error);
    }
    SECTION("two runs are bit-identical") {
        auto run = [] {
            ApproxOptions opts;
            opts.grid_n = 101;
            return approximate(Target::builtin("sin"), Rat(-1), Rat(1), 1e-2, mq_spec(),
                               Provider::jittered(Rat(1, 4), 7), opts);
        };
        ApproxResult a = run();
        ApproxResult b = run();
        CHECK(a.cert.sup_error == b.cert.sup_error);
        REQUIRE(a.comb.terms.size() == b.comb.terms.size());
        for (size_t i = 0; i < a.comb.terms.size(); ++i) {
            CHECK(a.comb.terms[i].first == b.comb.terms[i].first);
            CHECK(a.comb.terms[i].second.hex_str() == b.comb.terms[i].second.hex_str());
        }
        REQUIRE(a.cert.stages.size() == b.cert.stages.size());
        for (size_t i = 0; i < a.cert.stages.size(); ++i) {
            CHECK(a.cert.stages[i].y1 == b.cert.stages[i].y1);
            CHECK(a.cert.stages[i].raw_error == b.cert.stages[i].raw_error);
        }
    }
    SECTION("impossible tolerance hits the threshold cap") {
        Target t = Target::polynomial_target(poly({0, 1})); // x = 2 A_3
        ApproxOptions opts;
        opts.grid_n = 51;
        try {
            approximate(t, Rat(-1), Rat(1), 1e-60, mq_spec(), Provider::integers(), opts);
            FAIL("expected a budget error");
        } catch (const error& e) {
            CHECK(e.kind() == errc::budget);
            CHECK(e.has_detail());
        }
    }
}
