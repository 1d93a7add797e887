#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncdist/domination.hpp"
#include "ncdist/hardy.hpp"
#include "ncdist/rng.hpp"
#include "ncdist/spaces.hpp"

using namespace ncdist;

namespace {

StepFunction random_step(Rng& rng, int max_pieces = 8) {
    int n = rng.uniform_int(1, max_pieces);
    std::vector<Piece> ps;
    double v = std::exp(rng.gaussian() * 0.7);
    for (int i = 0; i < n; ++i) {
        ps.push_back({std::exp(rng.uniform(-3.0, 2.0)), v});
        v *= rng.uniform(0.2, 0.9);
    }
    return StepFunction(std::move(ps));
}

// midpoint-rule oracle for integrals of a pointwise-evaluable function
template <typename F>
double quad(F&& f, double a, double b, int n = 200000) {
    double h = (b - a) / n, s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h) * h;
    return s;
}

}  // namespace

TEST_CASE("cesaro of the unit indicator") {
    LogPoly c = hardy_transform(StepFunction::indicator(1.0), HardyKind::C);
    CHECK(c.value_at(0.5) == doctest::Approx(1.0));
    CHECK(c.value_at(1.0 - 1e-12) == doctest::Approx(1.0));
    CHECK(c.value_at(2.0) == doctest::Approx(0.5));
    CHECK(c.prefix_integral(std::exp(1.0)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dual cesaro of the unit indicator") {
    LogPoly cs = hardy_transform(StepFunction::indicator(1.0), HardyKind::Cstar);
    CHECK(cs.value_at(0.25) == doctest::Approx(std::log(4.0)));
    CHECK(cs.value_at(2.0) == 0.0);
    // squared: integral over (0,1) of log^2(1/s) equals Gamma(3) = 2
    LogPoly sq = square(cs);
    CHECK(sq.prefix_integral(1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sq.prefix_integral(1.0) ==
          doctest::Approx(quad([](double s) { return std::pow(std::log(1.0 / s), 2.0); }, 1e-9,
                               1.0))
              .epsilon(1e-4));
    CHECK(sq.value_at(0.5) == doctest::Approx(std::pow(std::log(2.0), 2.0)));
}

TEST_CASE("cesaro is the identity on constants inside their support") {
    LogPoly c = hardy_transform(StepFunction::indicator(7.0, 3.0), HardyKind::C);
    for (double t : {0.1, 1.0, 6.9}) CHECK(c.value_at(t) == doctest::Approx(3.0));
}

TEST_CASE("calderon is the exact sum and dominates the input") {
    Rng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        StepFunction f = random_step(rng);
        LogPoly s = hardy_transform(f, HardyKind::S);
        LogPoly c = hardy_transform(f, HardyKind::C);
        LogPoly cs = hardy_transform(f, HardyKind::Cstar);
        for (double b : s.breakpoints()) {
            for (double t : {b * 0.51, b * 0.999, b}) {
                CHECK(s.value_at(t) ==
                      doctest::Approx(c.value_at(t) + cs.value_at(t)).epsilon(1e-12));
                CHECK(c.value_at(t) >= f.value_at(t) - 1e-12 * f.sup_value());
            }
        }
    }
}

TEST_CASE("transforms of decreasing inputs stay decreasing") {
    Rng rng(47);
    for (int rep = 0; rep < 30; ++rep) {
        StepFunction f = random_step(rng);
        for (HardyKind k : {HardyKind::C, HardyKind::Cstar, HardyKind::S}) {
            LogPoly g = hardy_transform(f, k);
            double prev = g.value_at(f.support_length() * 1e-7);
            for (int i = 1; i <= 60; ++i) {
                double t = f.support_length() * 1e-7 *
                           std::pow(3e7, static_cast<double>(i) / 60.0);
                double v = g.value_at(t);
                CHECK(v <= prev * (1 + 1e-12) + 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("dual cesaro rejects divergent tails") {
    StepFunction tail({{1.0, 2.0}, {std::numeric_limits<double>::infinity(), 1.0}});
    CHECK_THROWS_AS(hardy_transform(tail, HardyKind::Cstar), std::domain_error);
    CHECK_THROWS_AS(hardy_transform(tail, HardyKind::S), std::domain_error);
    CHECK_NOTHROW(hardy_transform(tail, HardyKind::C));
}

TEST_CASE("square degree guard") {
    LogPoly sq = square(hardy_transform(StepFunction::indicator(1.0), HardyKind::S));
    CHECK_THROWS_AS(square(sq), internal_error);
    // (chi)^2 = chi and (C chi)^2 at t = 2 is 1/4
    LogPoly chi2 = square(LogPoly::from_step(StepFunction::indicator(1.0)));
    CHECK(chi2.value_at(0.5) == doctest::Approx(1.0));
    CHECK(square(hardy_transform(StepFunction::indicator(1.0), HardyKind::C)).value_at(2.0) ==
          doctest::Approx(0.25));
}

TEST_CASE("discrete operators") {
    std::vector<double> e0 = {1, 0, 0, 0, 0};
    std::vector<double> sd = hardy_transform_seq(e0, HardyKindSeq::Sd);
    CHECK(sd[0] == doctest::Approx(2.0));
    for (std::size_t n = 1; n < e0.size(); ++n)
        CHECK(sd[n] == doctest::Approx(1.0 / static_cast<double>(n + 1)));

    std::vector<double> ones = {1, 1, 1};
    std::vector<double> cd = hardy_transform_seq(ones, HardyKindSeq::Cd);
    for (double v : cd) CHECK(v == doctest::Approx(1.0));

    std::vector<double> e2 = {0, 0, 1};
    CHECK(hardy_transform_seq(e2, HardyKindSeq::CdStar)[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("duality pairing") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        StepFunction f = random_step(rng);
        StepFunction g = random_step(rng);
        double a = pairing_cesaro(f, g);
        double b = pairing_dual(f, g);
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("log kernel identity") {
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        StepFunction f = random_step(rng);
        LogPoly cf = hardy_transform(f, HardyKind::C);
        for (double b : f.bounds()) {
            CHECK(cf.prefix_integral(b) ==
                  doctest::Approx(log_kernel_integral(f, b)).epsilon(1e-11));
        }
        double t = std::exp(rng.uniform(-2.0, 3.0));
        CHECK(cf.prefix_integral(t) == doctest::Approx(log_kernel_integral(f, t)).epsilon(1e-11));
    }
}

TEST_CASE("cesaro of a log poly matches prefix integrals") {
    Rng rng(37);
    for (int rep = 0; rep < 30; ++rep) {
        StepFunction f = random_step(rng);
        LogPoly sq = square(hardy_transform(f, HardyKind::Cstar));
        LogPoly c = cesaro(sq);
        for (double b : sq.breakpoints())
            for (double t : {b * 0.3, b * 0.97, b * 1.5}) {
                CHECK(c.value_at(t) ==
                      doctest::Approx(sq.prefix_integral(t) / t).epsilon(1e-10));
            }
    }
}

TEST_CASE("pointwise bound by twice the averaged square") {
    Rng rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        StepFunction f = random_step(rng);
        LogPoly lhs = hardy_transform(f.power(2.0), HardyKind::C) +
                      square(hardy_transform(f, HardyKind::Cstar));
        LogPoly rhs = cesaro(square(hardy_transform(f, HardyKind::Cstar))).scale(2.0);
        RatioResult r = domination_ratio(lhs, rhs, DominationMode::pointwise, 1e-9);
        CHECK(r.ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("cesaro norm constants approach the conjugate exponent") {
    // closed-form oracle: the ratio for t^{eps - 1/p} on (0,1) is 1/(1 - 1/p + eps)
    for (double p : {1.5, 2.0, 4.0}) {
        double pprime = p / (p - 1.0);
        double prev = 0.0;
        for (double eps : {0.1, 0.01, 0.001}) {
            double a = 1.0 / p - eps;
            const double clip = 1e-9;
            const int n = 512;
            std::vector<Piece> ps;
            ps.push_back({clip, std::pow(clip, -a)});
            double lo = clip;
            for (int i = 1; i <= n; ++i) {
                double hi = clip * std::pow(1.0 / clip, static_cast<double>(i) / n);
                ps.push_back({hi - lo, std::pow(lo, -a)});
                lo = hi;
            }
            StepFunction f(std::move(ps));
            double ratio = lp_norm_quadrature(hardy_transform(f, HardyKind::C), p) /
                           norm(f, SpaceSpec::lp(p));
            CHECK(ratio <= pprime * (1.0 + 1e-9));
            CHECK(ratio >= prev - 1e-6);
            prev = ratio;
        }
        CHECK(prev >= 0.85 * pprime);
        if (p == 2.0) CHECK(prev >= 1.8);
    }
}

TEST_CASE("random cesaro ratios never exceed the conjugate exponent") {
    Rng rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        StepFunction f = random_step(rng);
        LogPoly cf = hardy_transform(f, HardyKind::C);
        for (double p : {1.5, 2.0, 4.0}) {
            double pprime = p / (p - 1.0);
            double r = lp_norm_quadrature(cf, p) / norm(f, SpaceSpec::lp(p));
            CHECK(r <= pprime * (1.0 + 1e-8));
        }
    }
}
