#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncdist/martingale.hpp"
#include "ncdist/rng.hpp"
#include "ncdist/spaces.hpp"

using namespace ncdist;

namespace {

Filtration dyadic_atoms(int n_levels) {
    int n = 1 << n_levels;
    std::vector<Partition> levels;
    for (int l = 0; l <= n_levels; ++l) {
        Partition part;
        int cell = n >> l;
        for (int c = 0; c < n; c += cell) {
            std::vector<int> ids;
            for (int i = c; i < c + cell; ++i) ids.push_back(i);
            part.push_back(ids);
        }
        levels.push_back(part);
    }
    return Filtration::atomic(TracedAlgebra::atoms(std::vector<double>(n, 1.0 / n)), levels);
}

}  // namespace

TEST_CASE("differences telescope") {
    Filtration F = Filtration::corner(TracedAlgebra::single(6, 1.0), {2, 4, 6});
    Rng rng(1);
    TracedElement x = rng.gaussian_element(F.algebra());
    DifferenceSequence d = differences(x, F);
    CHECK(d.defect() < 1e-12);
    TracedElement sum = TracedElement::zero(F.algebra());
    for (const TracedElement& dk : d.d) sum = sum + dk;
    CHECK((sum - x).max_abs() < 1e-12);

    // element already in the bottom level stays there
    TracedElement x0 = F.cond_exp(0, x);
    DifferenceSequence d0 = differences(x0, F);
    CHECK((d0.d[0] - x0).max_abs() < 1e-13);
    for (std::size_t k = 1; k < d0.d.size(); ++k) CHECK(d0.d[k].max_abs() < 1e-13);
}

TEST_CASE("hand-computed differences on a two-cell partition") {
    TracedAlgebra atoms = TracedAlgebra::atoms({1, 1, 1, 1});
    Filtration F =
        Filtration::atomic(atoms, {{{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}});
    TracedElement x = TracedElement::diagonal(atoms, {1, 3, 5, 7});
    DifferenceSequence d = differences(x, F);
    CHECK(d.d[0].block(0)(0, 0).real() == doctest::Approx(2.0));
    CHECK(d.d[0].block(2)(0, 0).real() == doctest::Approx(6.0));
    CHECK(d.d[1].block(0)(0, 0).real() == doctest::Approx(-1.0));
    CHECK(d.d[1].block(1)(0, 0).real() == doctest::Approx(1.0));
    CHECK(d.d[1].block(2)(0, 0).real() == doctest::Approx(-1.0));
    CHECK(d.d[1].block(3)(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("sign transforms are L2 isometries for every pattern") {
    Filtration F = Filtration::corner(TracedAlgebra::single(7, 0.8), {1, 3, 5, 7});
    Rng rng(2);
    TracedElement x = rng.gaussian_element(F.algebra());
    DifferenceSequence d = differences(x, F);
    const int K = F.levels();
    REQUIRE(K <= 12);
    double x2 = norm_lp(x, 2.0);
    for (int mask = 0; mask < (1 << K); ++mask) {
        std::vector<int> signs;
        for (int k = 0; k < K; ++k) signs.push_back(mask & (1 << k) ? 1 : -1);
        TracedElement t = transform(d, signs);
        CHECK(norm_lp(t, 2.0) == doctest::Approx(x2).epsilon(1e-10));
    }
    // all +1 gives back x
    std::vector<int> plus(static_cast<std::size_t>(K), 1);
    CHECK((transform(d, plus) - x).max_abs() < 1e-12);
    CHECK_THROWS_AS(transform(d, std::vector<int>{1, 0, 1, 1}), std::invalid_argument);
}

TEST_CASE("generalized transform with identity multipliers") {
    Filtration F = Filtration::corner(TracedAlgebra::single(5, 1.0), {2, 5});
    Rng rng(3);
    TracedElement x = rng.gaussian_element(F.algebra());
    DifferenceSequence d = differences(x, F);
    TracedAlgebra aux = TracedAlgebra::single(2, 0.5);  // unit trace
    std::vector<TracedElement> xi(d.d.size(), TracedElement::identity(aux));
    TracedElement t = transform(d, xi);
    double w = norm(mu(t), SpaceSpec::weak_l1());
    double l1 = norm_lp(x, 1.0);
    CHECK(w <= l1 * (1 + 1e-10));
    CHECK(norm_lp(t, 1.0) == doctest::Approx(l1).epsilon(1e-10));

    TracedAlgebra bad = TracedAlgebra::single(2, 1.0);  // trace 2
    std::vector<TracedElement> bad_xi(d.d.size(), TracedElement::identity(bad));
    CHECK_THROWS_AS(transform(d, bad_xi), std::invalid_argument);
}

TEST_CASE("generalized transform p-sweep stays bounded") {
    Rng rng(77);
    TracedAlgebra aux = TracedAlgebra::single(2, 0.5);
    for (int rep = 0; rep < 40; ++rep) {
        Filtration F = Filtration::corner(TracedAlgebra::single(8, 1.0), {2, 4, 6, 8});
        TracedElement x = rng.gaussian_element(F.algebra());
        DifferenceSequence d = differences(x, F);
        std::vector<TracedElement> xi;
        for (std::size_t k = 0; k < d.d.size(); ++k) {
            TracedElement g = rng.hermitian_element(aux);
            double nm = norm_op(g);
            xi.push_back(nm > 0 ? g.scaled(1.0 / nm) : TracedElement::identity(aux));
        }
        TracedElement t = transform(d, xi);
        for (double p : {1.1, 1.25, 1.5, 2.0}) {
            double pprime = p / (p - 1.0);
            CHECK(norm_lp(t, p) <= 4.0 * pprime * norm_lp(x, p));
        }
    }
}

TEST_CASE("square functions") {
    Filtration F = Filtration::corner(TracedAlgebra::single(6, 1.0), {3, 6});
    Rng rng(4);
    TracedElement x = rng.gaussian_element(F.algebra());
    DifferenceSequence d = differences(x, F);
    SquarePair sq = square_functions(d);
    CHECK(min_eigenvalue(sq.column) >= -1e-10);
    CHECK(min_eigenvalue(sq.row) >= -1e-10);
    double x2 = norm_lp(x, 2.0);
    CHECK(sq.column.trace().real() == doctest::Approx(x2 * x2).epsilon(1e-10));
    CHECK(sq.row.trace().real() == doctest::Approx(x2 * x2).epsilon(1e-10));

    // single difference
    DifferenceSequence single;
    single.filtration = &F;
    single.d.push_back(x);
    SquarePair one = square_functions(single);
    CHECK((one.column - x.adjoint() * x).max_abs() < 1e-13);
    CHECK((one.row - x * x.adjoint()).max_abs() < 1e-13);

    // commutative diagonal case: column equals row
    TracedAlgebra atoms = TracedAlgebra::atoms({1, 1, 1, 1});
    Filtration A = Filtration::atomic(atoms, {{{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}});
    TracedElement diag = TracedElement::diagonal(atoms, {0.3, -1.0, 2.0, 0.5});
    SquarePair comm = square_functions(differences(diag, A));
    CHECK((comm.column - comm.row).max_abs() < 1e-13);
}

TEST_CASE("stein map and dual doob sum") {
    Filtration F = Filtration::corner(TracedAlgebra::single(6, 0.5), {2, 4, 6});
    Rng rng(5);
    std::vector<TracedElement> xs;
    for (int k = 0; k < F.levels(); ++k) xs.push_back(F.cond_exp(k, rng.gaussian_element(F.algebra())));
    std::vector<TracedElement> mapped = stein_map(xs, F);
    for (std::size_t k = 0; k < xs.size(); ++k)
        CHECK((mapped[k] - xs[k]).max_abs() < 1e-12);  // fixed points

    TracedElement a0 = rng.psd_element(F.algebra());
    TracedElement s = dual_doob_sum({a0}, F);
    CHECK(std::abs(s.trace() - a0.trace()) < 1e-12 * std::max(1.0, a0.max_abs()));
    CHECK(min_eigenvalue(s) >= -1e-10);

    TracedElement not_pos = rng.hermitian_element(F.algebra());
    if (min_eigenvalue(not_pos) < -1e-6)
        CHECK_THROWS_AS(dual_doob_sum({not_pos}, F), std::invalid_argument);

    // coarsest level of the scalars: E_0 a = tau(a)/tau(1) * 1
    TracedAlgebra atoms = TracedAlgebra::atoms({0.5, 0.5, 0.5, 0.5});
    Filtration coarse = Filtration::atomic(
        atoms, {{{0, 1, 2, 3}}, {{0}, {1}, {2}, {3}}});
    TracedElement pos = rng.psd_element(atoms);
    TracedElement e0 = dual_doob_sum({pos}, coarse);
    double expected = pos.trace().real() / atoms.trace_of_identity();
    StepFunction m = mu(e0);
    REQUIRE(m.pieces().size() == 1);
    CHECK(m.pieces()[0].value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("column embedding") {
    Rng rng(6);
    TracedAlgebra alg = TracedAlgebra::single(4, 1.5);
    std::vector<TracedElement> xs;
    for (int k = 0; k < 3; ++k) xs.push_back(rng.gaussian_element(alg));
    TracedElement y = column_embed(xs);
    TracedElement target = sqrt_psd([&] {
        TracedElement s = TracedElement::zero(alg);
        for (const TracedElement& x : xs) s = s + x.adjoint() * x;
        return s;
    }());
    for (double p : {1.0, 2.0, 4.0})
        CHECK(norm_lp(y, p) == doctest::Approx(norm_lp(target, p)).epsilon(1e-10));
    CHECK(approx_equal(mu(y), mu(target), 1e-12));

    // K = 1 reduces to x tensor e00
    TracedElement single = column_embed({xs[0]});
    CHECK(norm_lp(single, 2.0) == doctest::Approx(norm_lp(xs[0], 2.0)).epsilon(1e-12));
}

TEST_CASE("gundy decomposition without stopping") {
    Filtration F = dyadic_atoms(3);
    Rng rng(7);
    TracedElement x = rng.hermitian_element(F.algebra());
    double lam = norm_lp(x, std::numeric_limits<double>::infinity()) * 2.0;
    GundyResult g = gundy_decompose(x, F, lam);
    CHECK((g.parts.alpha - x).max_abs() < 1e-12);
    CHECK(g.parts.beta.max_abs() < 1e-12);
    CHECK(g.parts.gamma.max_abs() == 0.0);
    CHECK(g.parts.delta.max_abs() == 0.0);
    CHECK(g.report.within_bounds());

    GundyResult zero = gundy_decompose(TracedElement::zero(F.algebra()), F, 1.0);
    CHECK(zero.parts.alpha.max_abs() == 0.0);
    CHECK(zero.report.c_alpha == 0.0);
}

TEST_CASE("gundy on an explicit crossing martingale") {
    // two-level dyadic martingale crossing the threshold on one branch
    Filtration F = dyadic_atoms(2);
    TracedElement x = TracedElement::diagonal(F.algebra(), {6.0, -2.0, 1.0, 0.5});
    double lam = 1.5;  // E_1 x = (2, 2, 0.75, 0.75): first branch crosses
    GundyResult g = gundy_decompose(x, F, lam);
    CHECK(g.report.reconstruction < 1e-12);
    CHECK(g.report.within_bounds());
    CHECK(g.report.c_gamma > 0.0);  // stopping actually happened

    CHECK_THROWS_AS(gundy_decompose(x, F, -1.0), std::invalid_argument);
    Rng rng(8);
    TracedElement general = rng.gaussian_element(F.algebra());
    if (!general.is_hermitian())
        CHECK_THROWS_AS(gundy_decompose(general, F, 1.0), std::invalid_argument);
}

TEST_CASE("gundy bounds hold across random commutative instances") {
    Rng rng(9);
    for (int rep = 0; rep < 100; ++rep) {
        Filtration F = dyadic_atoms(rng.uniform_int(2, 4));
        TracedElement x = rng.hermitian_element(F.algebra());
        double l1 = norm_lp(x, 1.0);
        if (l1 == 0.0) continue;
        double lam = std::exp(rng.uniform(std::log(0.3), std::log(8.0))) * l1 /
                     F.algebra().trace_of_identity();
        GundyResult g = gundy_decompose(x, F, lam);
        CHECK(g.report.reconstruction < 1e-12 * std::max(1.0, x.max_abs()));
        CHECK(g.report.within_bounds(1e-8));
    }
}
