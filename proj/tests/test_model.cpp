#include <doctest.h>

#include <cmath>
#include <random>

#include "qsep/model.hpp"

using namespace qsep;

TEST_CASE("validate accepts and rejects per the admissibility rules") {
    CHECK_NOTHROW(validate(ModelParams{0.2, 0.3, 1.0, 1.0}));
    CHECK_THROWS_AS(validate(ModelParams{0.6, 0.5, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(ModelParams{0.5, 0.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(ModelParams{-0.1, 0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(ModelParams{0.0, 1.2, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(ModelParams{0.0, 0.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(ModelParams{0.0, 0.0, 1.0, -1.0}), DomainError);
    // T=0 routes through the limit convention regardless of alpha
    CHECK_NOTHROW(validate(ModelParams{0.5, 0.0, 0.0, 0.0}));
    // x=0 leaves the diagonal family empty, alpha=0 is then harmless
    CHECK_NOTHROW(validate(ModelParams{0.0, 0.3, 1.0, 0.0}));
}

TEST_CASE("noise factors against brute-force normalization sums") {
    const ModelParams p{0.2, 0.3, 1.0, 1.0};
    const NoiseFactors f = noise_factors(p);
    CHECK(f.u == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(f.v == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

    // a = 1 / sum_{n>=2} e^{-2 n alpha / T}
    double sum_a = 0.0;
    for (int n = 2; n < 400; ++n) sum_a += std::exp(-2.0 * n);
    CHECK(f.a == doctest::Approx(1.0 / sum_a).epsilon(1e-12));
    CHECK(f.a == doctest::Approx(47.2093).epsilon(2e-5));

    // b = 1 / sum_{n>=1} sum_{m<n} e^{-(n+m)/T}
    double sum_b = 0.0;
    for (int n = 1; n < 400; ++n)
        for (int m = 0; m < n; ++m) sum_b += std::exp(-double(n + m));
    CHECK(f.b == doctest::Approx(1.0 / sum_b).epsilon(1e-12));
    CHECK(f.b == doctest::Approx(1.48574).epsilon(1e-5));
}

TEST_CASE("T=0 limit conventions") {
    const NoiseFactors f = noise_factors(ModelParams{0.5, 0.2, 0.0, 1.0});
    CHECK(f.u == 0.0);
    CHECK(f.v == 0.0);
    CHECK(f.bu == 1.0);
    CHECK(f.ush == 0.5);
    CHECK(std::isinf(f.a));
    CHECK(std::isinf(f.b));
    CHECK(std::isinf(f.sh));

    const JointSpectrum js = joint_spectrum(ModelParams{0.5, 0.2, 0.0, 1.0});
    CHECK(js.diag_term(2) == 0.5);   // d_n = x delta_{n,2}
    CHECK(js.diag_term(3) == 0.0);
    CHECK(js.antisym_term(2, 0) == 0.0);  // family vanishes, (1,0) sits in the singlet
    CHECK(js.lambda_singlet() == doctest::Approx(0.3 / 4.0 + 0.2).epsilon(1e-15));
}

TEST_CASE("algebraic identities b u = (1-u)(1-u^2), u sh = (1-u^2)/2") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.01, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double T = dist(rng);
        const NoiseFactors f = noise_factors(ModelParams{0.1, 0.1, T, 1.0});
        CHECK(std::abs(f.b * f.u - f.bu) <= 1e-14 * std::max(1.0, f.bu));
        CHECK(std::abs(f.u * f.sh - f.ush) <= 1e-14 * std::max(1.0, f.ush));
    }
}

TEST_CASE("joint spectrum anchor points") {
    SUBCASE("fully random 4-state at x=y=0") {
        const JointSpectrum js = joint_spectrum(ModelParams{0.0, 0.0, 0.7, 1.0});
        CHECK(js.lambda_uniform() == 0.25);
        CHECK(js.lambda_singlet() == 0.25);
        CHECK(js.diag_term(2) == 0.0);
        CHECK(js.antisym_term(2, 0) == 0.0);
    }
    SUBCASE("pure singlet at (0,1,0)") {
        const JointSpectrum js = joint_spectrum(ModelParams{0.0, 1.0, 0.0, 1.0});
        CHECK(js.lambda_uniform() == 0.0);
        CHECK(js.lambda_singlet() == 1.0);
    }
    SUBCASE("(0.6, 0.3, 0)") {
        const JointSpectrum js = joint_spectrum(ModelParams{0.6, 0.3, 0.0, 1.0});
        CHECK(js.lambda_uniform() == doctest::Approx(0.025).epsilon(1e-14));
        CHECK(js.lambda_singlet() == doctest::Approx(0.325).epsilon(1e-14));
        CHECK(js.diag_term(2) == doctest::Approx(0.6).epsilon(1e-14));
    }
}

TEST_CASE("marginal spectrum anchor points") {
    SUBCASE("x=y=0") {
        const MarginalSpectrum ms = marginal_spectrum(ModelParams{0.0, 0.0, 0.7, 1.0});
        CHECK(ms.p(0) == 0.5);
        CHECK(ms.p(1) == 0.5);
        CHECK(ms.p(2) == 0.0);
    }
    SUBCASE("EPR marginal") {
        const MarginalSpectrum ms = marginal_spectrum(ModelParams{0.0, 1.0, 0.0, 1.0});
        CHECK(ms.p(0) == 0.5);
        CHECK(ms.p(1) == 0.5);
        CHECK(ms.p(2) == 0.0);
    }
    SUBCASE("(0.6, 0.3, 0)") {
        const MarginalSpectrum ms = marginal_spectrum(ModelParams{0.6, 0.3, 0.0, 1.0});
        CHECK(ms.p(0) == doctest::Approx(0.20).epsilon(1e-14));
        CHECK(ms.p(1) == doctest::Approx(0.20).epsilon(1e-14));
        CHECK(ms.p(2) == doctest::Approx(0.60).epsilon(1e-14));
    }
}

TEST_CASE("unified y-weight reduces to the stated p_0, p_1 forms") {
    const ModelParams p{0.1, 0.4, 0.7, 1.3};
    const NoiseFactors f = noise_factors(p);
    const MarginalSpectrum ms(p, f);
    CHECK(ms.y_weight(0) == doctest::Approx(f.u * f.sh).epsilon(1e-14));
    const double u = f.u;
    CHECK(ms.y_weight(1) ==
          doctest::Approx(f.sh * (u - u * u + u * u * u)).epsilon(1e-14));
    // generic n against the sh (u^n - u^{2n} + u^{2n+1}) form
    for (int n = 2; n < 8; ++n) {
        const double un = std::pow(u, n);
        CHECK(ms.y_weight(n) ==
              doctest::Approx(f.sh * (un - un * un + un * un * u)).epsilon(1e-13));
    }
}

TEST_CASE("spectra sum to one: partial sums plus closed tails") {
    for (const ModelParams& p :
         {ModelParams{0.2, 0.3, 1.0, 1.0}, ModelParams{0.7, 0.1, 0.4, 0.2},
          ModelParams{0.0, 0.9, 1.3, 2.0}, ModelParams{0.5, 0.5, 0.0, 1.0},
          ModelParams{1.0, 0.0, 0.8, 0.6}}) {
        const NoiseFactors f = noise_factors(p);
        const JointSpectrum js(p, f);
        const MarginalSpectrum ms(p, f);
        const int N = 300;
        double joint = 3.0 * js.lambda_uniform() + js.lambda_singlet();
        for (int n = 2; n < N; ++n) joint += js.diag_term(n);
        for (int n = 2; n < N; ++n)
            for (int m = 0; m < n; ++m) joint += js.antisym_term(n, m);
        joint += js.diag_tail(N) + js.antisym_tail(N);
        CHECK(joint == doctest::Approx(1.0).epsilon(1e-12));

        double marg = ms.p(0) + ms.p(1);
        for (int n = 2; n < N; ++n) marg += ms.p(n);
        marg += ms.tail(N);
        CHECK(marg == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("all spectrum entries are nonnegative at random points") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        ModelParams p;
        p.x = uni(rng);
        p.y = uni(rng) * (1.0 - p.x);
        p.T = uni(rng) < 0.2 ? 0.0 : 3.0 * uni(rng);
        p.alpha = 0.05 + 5.0 * uni(rng);
        const JointSpectrum js = joint_spectrum(p);
        const MarginalSpectrum ms = marginal_spectrum(p);
        CHECK(js.lambda_uniform() >= 0.0);
        CHECK(js.lambda_singlet() >= 0.0);
        for (int n = 2; n < 30; ++n) {
            CHECK(js.diag_term(n) >= 0.0);
            CHECK(js.antisym_diag_value(n) >= 0.0);
            CHECK(ms.p(n) >= 0.0);
        }
        CHECK(ms.p(0) >= 0.0);
        CHECK(ms.p(1) >= 0.0);
    }
}

TEST_CASE("joint spectrum converges elementwise to the T=0 convention") {
    const double x = 0.4, y = 0.35, alpha = 1.0;
    const JointSpectrum at0 = joint_spectrum(ModelParams{x, y, 0.0, alpha});
    double prev = 1e300;
    for (const double T : {0.2, 0.1, 0.05, 0.02}) {
        const JointSpectrum js = joint_spectrum(ModelParams{x, y, T, alpha});
        const double dev = std::abs(js.lambda_uniform() - at0.lambda_uniform()) +
                           std::abs(js.lambda_singlet() - at0.lambda_singlet()) +
                           std::abs(js.diag_term(2) - at0.diag_term(2)) +
                           std::abs(js.diag_term(3)) +
                           std::abs(js.antisym_term(2, 0));
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 1e-8);
}

TEST_CASE("geometric moment tails against brute-force sums") {
    for (const double r : {0.3, 0.9}) {
        for (const double K : {0.0, 3.0, 10.0}) {
            double t0 = 0.0, t1 = 0.0, t2 = 0.0, te = 0.0;
            const double C = 0.37;
            for (int k = int(K); k < 20000; ++k) {
                const double rk = std::pow(r, k);
                t0 += rk;
                t1 += k * rk;
                t2 += double(k) * k * rk;
                te += detail::xlogx(C * rk);
            }
            CHECK(detail::geom_tail0(r, K) == doctest::Approx(t0).epsilon(1e-12));
            CHECK(detail::geom_tail1(r, K) == doctest::Approx(t1).epsilon(1e-12));
            CHECK(detail::geom_tail2(r, K) == doctest::Approx(t2).epsilon(1e-12));
            CHECK(detail::entropy_geom_tail(C, r, K) ==
                  doctest::Approx(te).epsilon(1e-12));
        }
    }
}
