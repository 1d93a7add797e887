#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncdist/hardy.hpp"
#include "ncdist/rng.hpp"
#include "ncdist/triangular.hpp"

using namespace ncdist;

TEST_CASE("strict and block truncation") {
    TracedAlgebra a2 = TracedAlgebra::single(2, 1.0);
    Matrix m(2, 2);
    m << Complex(1), Complex(2), Complex(3), Complex(4);
    TracedElement x(a2, {m});

    TracedElement s = truncate(x, TruncationMode::strict_upper);
    CHECK(s.block(0)(0, 1) == Complex(2));
    CHECK(std::abs(s.block(0)(0, 0)) == 0.0);
    CHECK(std::abs(s.block(0)(1, 0)) == 0.0);

    TracedElement b = truncate(x, TruncationMode::block_upper, {1, 2});
    CHECK(b.block(0)(0, 0) == Complex(1));
    CHECK(b.block(0)(0, 1) == Complex(2));
    CHECK(b.block(0)(1, 1) == Complex(4));
    CHECK(std::abs(b.block(0)(1, 0)) == 0.0);

    // a single block keeps everything
    TracedElement whole = truncate(x, TruncationMode::block_upper, {2});
    CHECK((whole - x).max_abs() == 0.0);

    // block upper = strict blocks + block diagonal
    Rng rng(1);
    TracedElement y = rng.gaussian_element(TracedAlgebra::single(8, 1.0));
    std::vector<int> cuts = {3, 5, 8};
    TracedElement bu = truncate(y, TruncationMode::block_upper, cuts);
    Matrix strict = Matrix::Zero(8, 8);
    int lo = 0;
    for (int c : cuts) {
        for (int r = 0; r < lo; ++r)
            for (int col = lo; col < c; ++col) strict(r, col) = y.block(0)(r, col);
        lo = c;
    }
    Matrix diag = Matrix::Zero(8, 8);
    lo = 0;
    for (int c : cuts) {
        diag.block(lo, lo, c - lo, c - lo) = y.block(0).block(lo, lo, c - lo, c - lo);
        lo = c;
    }
    CHECK((bu.block(0) - strict - diag).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("corner split identities") {
    Rng rng(2);
    // 2x2 by hand
    TracedAlgebra a2 = TracedAlgebra::single(2, 1.0);
    Matrix m(2, 2);
    m << Complex(1), Complex(2), Complex(3), Complex(4);
    CornerSplit hand = corner_split(TracedElement(a2, {m}), {1, 2});
    CHECK(hand.identity_deviation < 1e-14);
    CHECK(hand.columns[0].block(0)(0, 0) == Complex(1));
    CHECK(hand.columns[0].block(0)(1, 0) == Complex(3));
    CHECK(std::abs(hand.compressed[0].block(0)(1, 0)) == 0.0);  // corner compression

    // diagonal input with singleton cuts: truncation keeps the diagonal
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 2;
    d(1, 1) = 1;
    d(2, 2) = 0.5;
    CornerSplit diag = corner_split(TracedElement(TracedAlgebra::single(3, 1.0), {d}), {1, 2, 3});
    CHECK((diag.truncated.block(0) - d).cwiseAbs().maxCoeff() < 1e-15);

    // random instances: the identities are theorems
    for (int rep = 0; rep < 25; ++rep) {
        TracedElement x = rng.gaussian_element(TracedAlgebra::single(8, 1.0));
        CornerSplit cs = corner_split(x, {2, 4, 6, 8});
        CHECK(cs.identity_deviation < 1e-12);
        CHECK(approx_equal(cs.mu_row_sum, mu(x), 1e-11));
    }
}

TEST_CASE("hilbert surrogate demo") {
    TracedElement a2 = hilbert_surrogate(2);
    CHECK(a2.block(0)(0, 1) == Complex(-1.0));
    CHECK(norm_op(truncate(a2, TruncationMode::strict_upper)) == doctest::Approx(1.0));

    GrowthRecord rec = hilbert_demo({64, 256, 1024});
    for (double full : rec.opnorm_full) CHECK(full <= 3.14159265358979323846 + 1e-6);
    CHECK(rec.slope >= 0.2);
    CHECK(rec.slope <= 0.5);
    CHECK(rec.to_csv().find("n,opnorm_full,opnorm_truncated,log_n") == 0);
    // truncated norms grow with n
    CHECK(rec.opnorm_truncated[0] < rec.opnorm_truncated[1]);
    CHECK(rec.opnorm_truncated[1] < rec.opnorm_truncated[2]);
}

TEST_CASE("truncation norm sanity bound") {
    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        TracedElement y = rng.gaussian_element(TracedAlgebra::single(10, 1.0));
        std::vector<int> cuts = {2, 5, 7, 10};
        TracedElement bu = truncate(y, TruncationMode::block_upper, cuts);
        Matrix diag = Matrix::Zero(10, 10);
        int lo = 0;
        for (int c : cuts) {
            diag.block(lo, lo, c - lo, c - lo) = y.block(0).block(lo, lo, c - lo, c - lo);
            lo = c;
        }
        TracedElement strict(y.algebra(), {bu.block(0) - diag});
        TracedElement diag_el(y.algebra(), {diag});
        CHECK(norm_op(bu) <= norm_op(strict) + norm_op(diag_el) + 1e-12);
    }
}
