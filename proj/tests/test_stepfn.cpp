#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "ncdist/algebra.hpp"
#include "ncdist/domination.hpp"
#include "ncdist/hardy.hpp"
#include "ncdist/rng.hpp"
#include "ncdist/step_function.hpp"

using namespace ncdist;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// brute-force Riemann sum used as an independent oracle for prefix integrals
double riemann_prefix(const StepFunction& f, double t, int n = 400000) {
    double h = t / n, s = 0.0;
    for (int i = 0; i < n; ++i) s += f.value_at((i + 0.5) * h) * h;
    return s;
}
}  // namespace

TEST_CASE("construction normalizes pieces") {
    StepFunction f({{1.0, 3.0}, {1.0, 3.0}, {2.0, 1.0}, {1.0, 0.0}});
    CHECK(f.pieces().size() == 2);
    CHECK(f.pieces()[0].length == doctest::Approx(2.0));
    CHECK(f.value_at(0.5) == 3.0);
    CHECK(f.value_at(2.0) == 1.0);   // right continuous at the jump
    CHECK(f.value_left(2.0) == 3.0);
    CHECK(f.value_at(4.0) == 0.0);
    CHECK_THROWS_AS(StepFunction({{1.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({{-1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({{kInf, 1.0}, {1.0, 0.5}}), std::invalid_argument);
}

TEST_CASE("distribution function") {
    StepFunction f({{1, 3}, {1, 2}, {1, 1}});
    CHECK(f.distribution_at(1.5) == doctest::Approx(2.0));
    CHECK(StepFunction({{1, 3}}).distribution_at(3.0) == 0.0);  // strict inequality
    CHECK(StepFunction({{1, 3}}).distribution_at(0.0) == 1.0);

    // inverse compatibility: mu(t) = inf{s : n(s) <= t}
    for (double t : {0.0, 0.3, 1.0, 1.7, 2.5, 3.0, 5.0}) {
        double m = f.value_at(t);
        CHECK(f.distribution_at(m) <= t + 1e-15);
        if (m > 0) CHECK(f.distribution_at(m * (1 - 1e-12)) > t);
    }
}

TEST_CASE("prefix integral matches a Riemann oracle") {
    StepFunction f({{0.7, 2.5}, {1.3, 1.0}, {2.0, 0.25}});
    for (double t : {0.5, 1.0, 1.5, 3.7, 10.0})
        CHECK(f.prefix_integral(t) == doctest::Approx(riemann_prefix(f, t)).epsilon(1e-6));
    StepFunction g({{1, 2}, {1, 1}});
    CHECK(g.prefix_integral(1.5) == doctest::Approx(2.5));
}

TEST_CASE("dilate") {
    StepFunction chi = StepFunction::indicator(1.0);
    StepFunction two = chi.dilate(2.0);
    CHECK(two.value_at(1.5) == 1.0);
    CHECK(two.value_at(2.5) == 0.0);
    CHECK(two.total_integral() == doctest::Approx(2.0));
    CHECK(approx_equal(chi.dilate(1.0), chi, 1e-15));
    CHECK_THROWS_AS(chi.dilate(0.0), std::invalid_argument);
}

TEST_CASE("power and scale") {
    StepFunction f({{1, 4}, {2, 1}});
    CHECK(f.power(0.5).value_at(0.5) == doctest::Approx(2.0));
    CHECK(f.integral_pow(2.0) == doctest::Approx(18.0));
    CHECK(f.scale(3.0).total_integral() == doctest::Approx(18.0));
}

TEST_CASE("json round trip") {
    StepFunction f({{1.5, 2.0}, {kInf, 0.5}});
    StepFunction g = StepFunction::from_json(f.to_json());
    CHECK(approx_equal(f, g, 1e-15));
    CHECK(g.has_infinite_tail());
}

TEST_CASE("domination ratio basics") {
    StepFunction chi = StepFunction::indicator(1.0);
    LogPoly s = hardy_transform(chi, HardyKind::S);

    // S mu >= mu with equality approached from the left at the support edge
    RatioResult r = domination_ratio(chi, s, DominationMode::pointwise, 1e-9);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.witness_t == doctest::Approx(1.0));
    CHECK(r.witness_left);

    // identity case in both modes
    CHECK(domination_ratio(chi, chi, DominationMode::pointwise, 1e-9).ratio ==
          doctest::Approx(1.0));
    CHECK(domination_ratio(chi, chi, DominationMode::submajorization, 1e-9).ratio ==
          doctest::Approx(1.0));

    // equal mass, flatter function: submajorization ratio 1 attained at t >= 2
    StepFunction flat({{2, 1}});
    StepFunction tall({{1, 2}});
    RatioResult sub = domination_ratio(flat, tall, DominationMode::submajorization, 1e-9);
    CHECK(sub.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sub.witness_t >= 2.0 - 1e-9);

    // positive over zero is infinite
    RatioResult inf_r = domination_ratio(tall, StepFunction(), DominationMode::pointwise, 1e-9);
    CHECK(std::isinf(inf_r.ratio));
}

TEST_CASE("triangle inequalities for mu and the distribution function") {
    Rng rng(7);
    TracedAlgebra alg({{3, 0.8}, {2, 1.7}});
    for (int rep = 0; rep < 40; ++rep) {
        TracedElement x = rng.gaussian_element(alg);
        TracedElement y = rng.gaussian_element(alg);
        StepFunction mx = mu(x), my = mu(y), mxy = mu(x + y);
        for (double t : {0.1, 0.5, 1.0, 2.0})
            for (double s : {0.1, 0.7, 1.5}) {
                CHECK(mxy.value_at(t + s) <= mx.value_at(t) + my.value_at(s) + 1e-10);
            }
        TracedElement hx = (x + x.adjoint()).scaled(0.5);
        TracedElement hy = (y + y.adjoint()).scaled(0.5);
        StepFunction nx = mu(hx), ny = mu(hy), nxy = mu(hx + hy);
        for (double s : {0.2, 0.9})
            for (double t : {0.3, 1.1})
                CHECK(nxy.distribution_at(s + t) <=
                      nx.distribution_at(s) + ny.distribution_at(t) + 1e-10);
    }
}

TEST_CASE("moment identity against the trace") {
    Rng rng(11);
    TracedAlgebra alg({{4, 0.5}, {3, 2.0}});
    for (int rep = 0; rep < 20; ++rep) {
        TracedElement x = rng.gaussian_element(alg);
        StepFunction m = mu(x);
        for (double p : {1.0, 2.0, 3.0, 7.5}) {
            double lhs = m.integral_pow(p);
            double rhs = std::pow(norm_lp(x, p), p);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("rearrangement idempotence") {
    StepFunction f({{0.5, 2.0}, {1.5, 1.0}, {1.0, 0.3}});
    // view f as a diagonal element with one atom per piece
    std::vector<double> weights, values;
    for (const Piece& p : f.pieces()) {
        weights.push_back(p.length);
        values.push_back(p.value);
    }
    TracedAlgebra alg = TracedAlgebra::atoms(weights);
    StepFunction back = mu(TracedElement::diagonal(alg, values));
    CHECK(approx_equal(f, back, 1e-14));
}

TEST_CASE("scaling identity is exact") {
    Rng rng(3);
    TracedAlgebra alg({{3, 1.25}, {2, 0.5}});
    TracedElement x = rng.gaussian_element(alg);
    for (double t : {2.0, 4.0, 0.5}) {
        StepFunction lhs = mu(x.rebase(alg.with_weights_scaled(1.0 / t)));
        StepFunction rhs = mu(x).dilate(1.0 / t);
        CHECK(approx_equal(lhs, rhs, 1e-14));
    }
}
