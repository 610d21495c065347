#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hermblock/block.hpp"
#include "hermblock/generate.hpp"
#include "hermblock/rng.hpp"

#include <cmath>

using namespace hermblock;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
    const Index n = static_cast<Index>(values.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

// xx* for x = (1,0,0,1); the standard non-Hermitian-block control.
ComplexMatrix rank_one_control() {
    Eigen::VectorXcd x(4);
    x << 1.0, 0.0, 0.0, 1.0;
    return x * x.adjoint();
}

}  // namespace

TEST_CASE("partition detects the Hermitian-block hypothesis") {
    SUBCASE("identity splits into Hermitian blocks") {
        const BlockMatrix h =
            BlockMatrix::partition(HermitianMatrix::identity(4), 2, 2);
        CHECK(h.hermitian_blocks());
        CHECK((h.block(0, 0) - ComplexMatrix::Identity(2, 2)).norm() == 0.0);
        CHECK(h.block(0, 1).norm() == 0.0);
    }
    SUBCASE("rank-one control has a nilpotent off-diagonal block") {
        const BlockMatrix h =
            BlockMatrix::partition(HermitianMatrix(rank_one_control()), 2, 2);
        CHECK_FALSE(h.hermitian_blocks());
        ComplexMatrix expected(2, 2);
        expected << 0, 1, 0, 0;
        CHECK((h.block(0, 1) - expected).norm() == 0.0);
    }
    SUBCASE("scalar blocks are always Hermitian when real") {
        ComplexMatrix m(2, 2);
        m << 2, 1, 1, 3;
        CHECK(BlockMatrix::partition(HermitianMatrix(m), 2, 1).hermitian_blocks());
    }
    SUBCASE("shape and positivity errors") {
        CHECK_THROWS_AS(BlockMatrix::partition(HermitianMatrix::identity(4), 3, 2),
                        InvalidInput);
        CHECK_THROWS_AS(
            BlockMatrix::partition(HermitianMatrix(diag({1, -1, 1, 1})), 2, 2),
            InvalidInput);
    }
    SUBCASE("reassembling the blocks restores the entries") {
        Rng rng(3);
        const BlockMatrix h =
            BlockMatrix::partition(HermitianMatrix(random_hermitian_psd(rng, 6)), 3, 2);
        ComplexMatrix rebuilt(6, 6);
        for (Index s = 0; s < 3; ++s) {
            for (Index t = 0; t < 3; ++t) {
                rebuilt.block(2 * s, 2 * t, 2, 2) = h.block(s, t);
            }
        }
        CHECK((rebuilt - h.mat()).norm() == 0.0);
    }
}

TEST_CASE("partial_trace") {
    const BlockMatrix id4 = BlockMatrix::partition(HermitianMatrix::identity(4), 2, 2);
    CHECK((partial_trace(id4).mat() - 2.0 * ComplexMatrix::Identity(2, 2)).norm() ==
          0.0);

    ComplexMatrix scalar(2, 2);
    scalar << 2, 1, 1, 3;
    const BlockMatrix h = BlockMatrix::partition(HermitianMatrix(scalar), 2, 1);
    CHECK(partial_trace(h).mat()(0, 0).real() == doctest::Approx(5.0));

    SUBCASE("tensor product traces to (Tr A) B") {
        ComplexMatrix b(2, 2);
        b << 1, 1, 1, 1;
        const ComplexMatrix big = tensor_product(diag({1, 2}), b);
        const BlockMatrix hb = BlockMatrix::partition(HermitianMatrix(big), 2, 2);
        CHECK((partial_trace(hb).mat() - 3.0 * b).norm() < 1e-14);
    }
    SUBCASE("trace is preserved") {
        Rng rng(17);
        const BlockMatrix h2 =
            BlockMatrix::partition(HermitianMatrix(random_hermitian_psd(rng, 12)), 4, 3);
        CHECK(std::abs(partial_trace(h2).mat().trace().real() -
                       h2.mat().trace().real()) <= tol_cert);
    }
}

TEST_CASE("pad_to_dyadic") {
    CHECK(smallest_dyadic_at_least(1) == 1);
    CHECK(smallest_dyadic_at_least(3) == 4);
    CHECK(smallest_dyadic_at_least(4) == 4);
    CHECK(smallest_dyadic_at_least(5) == 8);

    Rng rng(9);
    const BlockMatrix h =
        BlockMatrix::partition(HermitianMatrix(random_hermitian_psd(rng, 6)), 3, 2);
    const BlockMatrix padded = pad_to_dyadic(h);
    CHECK(padded.beta() == 4);
    CHECK(padded.dim() == 8);
    CHECK(padded.hermitian_blocks() == h.hermitian_blocks());
    CHECK((partial_trace(padded).mat() - partial_trace(h).mat()).norm() == 0.0);
    CHECK(padded.block(3, 3).norm() == 0.0);

    SUBCASE("already dyadic input is returned unchanged") {
        const BlockMatrix h4 =
            BlockMatrix::partition(HermitianMatrix::identity(4), 4, 1);
        CHECK(pad_to_dyadic(h4).dim() == 4);
    }
    SUBCASE("padding appends zero eigenvalues only") {
        const BlockMatrix d3 =
            BlockMatrix::partition(HermitianMatrix(diag({1, 2, 3})), 3, 1);
        const Spectrum s = hermitian_spectrum(pad_to_dyadic(d3).carrier());
        CHECK(s.values.size() == 4);
        CHECK(s.at(1) == doctest::Approx(3.0));
        CHECK(s.at(2) == doctest::Approx(2.0));
        CHECK(s.at(3) == doctest::Approx(1.0));
        CHECK(s.at(4) == doctest::Approx(0.0));
    }
}

TEST_CASE("direct_sum_copies") {
    const HermitianMatrix a(diag({3, 1}));
    CHECK((direct_sum_copies(a, 1).mat() - a.mat()).norm() == 0.0);

    const Spectrum s = hermitian_spectrum(direct_sum_copies(a, 2));
    CHECK(s.values == std::vector<double>{3.0, 3.0, 1.0, 1.0});

    CHECK(direct_sum_copies(HermitianMatrix::zero(3), 4).mat().norm() == 0.0);
    CHECK_THROWS_AS(direct_sum_copies(HermitianMatrix::identity(64), 100),
                    ResourceLimit);
}

TEST_CASE("eigen_index_map matches the ceiling index rule") {
    SUBCASE("fixed instances") {
        const HermitianMatrix a(diag({3, 1}));
        const auto [lhs, rhs] = eigen_index_map(a, 2, 2);
        CHECK(lhs == doctest::Approx(1.0));
        CHECK(rhs == doctest::Approx(1.0));

        const auto [l0, r0] = eigen_index_map(a, 3, 0);
        CHECK(l0 == doctest::Approx(3.0));
        CHECK(r0 == doctest::Approx(3.0));

        const HermitianMatrix scalar(diag({5}));
        const auto [l3, r3] = eigen_index_map(scalar, 4, 3);
        CHECK(l3 == doctest::Approx(5.0));
        CHECK(r3 == doctest::Approx(5.0));
    }
    SUBCASE("exhaustive over small sizes, including past the dimension") {
        Rng rng(29);
        for (Index dim = 1; dim <= 5; ++dim) {
            const HermitianMatrix a(random_hermitian_psd(rng, dim));
            for (Index m = 2; m <= 4; ++m) {
                for (Index j = 0; j < m * dim + 2; ++j) {
                    const auto [lhs, rhs] = eigen_index_map(a, m, j);
                    CHECK(std::abs(lhs - rhs) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("shuffle_permutation") {
    SUBCASE("single copy is the identity") {
        const Permutation p = shuffle_permutation(1, 3, 2);
        for (Index i = 0; i < p.size; ++i) {
            CHECK(p.image[static_cast<std::size_t>(i)] == i);
        }
    }
    SUBCASE("beta=2, m=2, n=1 enumerates to (0,2,1,3)") {
        const Permutation p = shuffle_permutation(2, 2, 1);
        CHECK(p.image == std::vector<Index>{0, 2, 1, 3});
    }
    SUBCASE("conjugation sends copies-inside-blocks to blocks-inside-copies exactly") {
        Rng rng(41);
        for (Index beta : {2, 3}) {
            for (Index n : {1, 2}) {
                for (Index m : {2, 3}) {
                    const BlockMatrix h = BlockMatrix::partition(
                        HermitianMatrix(random_hermitian_psd(rng, beta * n)), beta, n);
                    ComplexMatrix g(m * beta * n, m * beta * n);
                    const ComplexMatrix eye = ComplexMatrix::Identity(m, m);
                    for (Index s = 0; s < beta; ++s) {
                        for (Index t = 0; t < beta; ++t) {
                            g.block(s * m * n, t * m * n, m * n, m * n) =
                                tensor_product(eye, h.block(s, t));
                        }
                    }
                    const ComplexMatrix conjugated =
                        shuffle_permutation(m, beta, n).conjugate(g);
                    const ComplexMatrix expected =
                        direct_sum_copies(h.carrier(), m).mat();
                    // Integer relabeling: entrywise exact.
                    CHECK((conjugated - expected).norm() == 0.0);
                }
            }
        }
    }
    SUBCASE("inverse composes to the identity") {
        const Permutation p = shuffle_permutation(3, 4, 2);
        const Permutation q = p.inverse();
        for (Index i = 0; i < p.size; ++i) {
            CHECK(q.image[static_cast<std::size_t>(
                      p.image[static_cast<std::size_t>(i)])] == i);
        }
    }
}

TEST_CASE("tensor_product") {
    ComplexMatrix b(2, 2);
    b << 1, 2, 3, 4;
    const ComplexMatrix left = tensor_product(ComplexMatrix::Identity(2, 2), b);
    CHECK((left.block(0, 0, 2, 2) - b).norm() == 0.0);
    CHECK((left.block(2, 2, 2, 2) - b).norm() == 0.0);
    CHECK(left.block(0, 2, 2, 2).norm() == 0.0);

    CHECK((tensor_product(diag({1, 2}), ComplexMatrix::Identity(2, 2)) -
           diag({1, 1, 2, 2}))
              .norm() == 0.0);

    ComplexMatrix flip(2, 2);
    flip << 0, 1, 1, 0;
    const ComplexMatrix anti = tensor_product(flip, flip);
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
            CHECK(anti(i, j) == Complex(i + j == 3 ? 1.0 : 0.0, 0.0));
        }
    }
}
