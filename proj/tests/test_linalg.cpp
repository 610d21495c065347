#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hermblock/generate.hpp"
#include "hermblock/linalg.hpp"
#include "hermblock/rng.hpp"

#include <cmath>

using namespace hermblock;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

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

}  // namespace

TEST_CASE("hermitian_eig on fixed instances") {
    SUBCASE("identity") {
        const EigResult eig = hermitian_eig(HermitianMatrix::identity(3));
        for (double v : eig.spectrum.values) {
            CHECK(v == doctest::Approx(1.0));
        }
        CHECK((eig.vectors.adjoint() * eig.vectors - ComplexMatrix::Identity(3, 3))
                  .norm() < 1e-13);
    }
    SUBCASE("all-ones 2x2 has roots of t^2 - 2t") {
        const EigResult eig = hermitian_eig(HermitianMatrix(mat2(1, 1, 1, 1)));
        CHECK(eig.spectrum.at(1) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(eig.spectrum.at(2) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("diagonal values come back sorted descending") {
        const Spectrum s = hermitian_spectrum(HermitianMatrix(diag({3, 1, 2})));
        CHECK(s.values == std::vector<double>{3.0, 2.0, 1.0});
    }
}

TEST_CASE("hermitian_eig reconstruction residual stays relative") {
    Rng rng(101);
    for (Index dim : {2, 3, 5, 8, 17, 33, 64}) {
        const HermitianMatrix a(random_hermitian(rng, dim));
        const EigResult eig = hermitian_eig(a);
        RealVector lambda(dim);
        for (Index i = 0; i < dim; ++i) {
            lambda(i) = eig.spectrum.values[static_cast<std::size_t>(i)];
        }
        const ComplexMatrix rebuilt =
            eig.vectors * lambda.asDiagonal() * eig.vectors.adjoint();
        CHECK((rebuilt - a.mat()).norm() <= tol_eig * (1.0 + a.mat().norm()));
        CHECK((eig.vectors.adjoint() * eig.vectors - ComplexMatrix::Identity(dim, dim))
                  .norm() <= tol_iso * std::sqrt(static_cast<double>(dim)));
        for (std::size_t i = 0; i + 1 < eig.spectrum.values.size(); ++i) {
            CHECK(eig.spectrum.values[i] >= eig.spectrum.values[i + 1]);
        }
    }
}

TEST_CASE("psd_sqrt") {
    SUBCASE("identity and diagonal") {
        CHECK((psd_sqrt(HermitianMatrix::identity(4)).mat() -
               ComplexMatrix::Identity(4, 4))
                  .norm() < 1e-12);
        CHECK((psd_sqrt(HermitianMatrix(diag({4, 9}))).mat() - diag({2, 3})).norm() <
              1e-12);
    }
    SUBCASE("rank-one projector scaling") {
        const ComplexMatrix expected = (1.0 / std::sqrt(2.0)) * mat2(1, 1, 1, 1);
        CHECK((psd_sqrt(HermitianMatrix(mat2(1, 1, 1, 1))).mat() - expected).norm() <
              1e-12);
    }
    SUBCASE("square of the root returns the input") {
        Rng rng(7);
        const HermitianMatrix a(random_hermitian_psd(rng, 9));
        const HermitianMatrix s = psd_sqrt(a);
        CHECK((s.mat() * s.mat() - a.mat()).norm() <=
              tol_eig * (1.0 + a.mat().norm()));
    }
    SUBCASE("indefinite input is refused with the offending eigenvalue") {
        CHECK_THROWS_AS(psd_sqrt(HermitianMatrix(diag({1, -1}))), InvalidInput);
    }
}

TEST_CASE("polar_isometry_factor") {
    SUBCASE("coordinate injection") {
        ComplexMatrix c = ComplexMatrix::Zero(4, 2);
        c(0, 0) = 1.0;
        c(1, 1) = 1.0;
        const PolarResult out = polar_isometry_factor(c);
        CHECK((out.isometry.mat() - c).norm() < 1e-12);
        CHECK((out.psd_factor.mat() - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    }
    SUBCASE("unit column") {
        ComplexMatrix c(2, 1);
        c << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        const PolarResult out = polar_isometry_factor(c);
        CHECK((out.isometry.mat() * out.psd_factor.mat() - c).norm() < 1e-12);
        CHECK(out.psd_factor.mat()(0, 0).real() == doctest::Approx(1.0));
    }
    SUBCASE("zero block still completes to an exact isometry") {
        const PolarResult out = polar_isometry_factor(ComplexMatrix::Zero(5, 3));
        CHECK(out.psd_factor.mat().norm() == doctest::Approx(0.0));
        CHECK(out.isometry.defect() <= tol_iso);
    }
    SUBCASE("random rank-deficient inputs") {
        Rng rng(23);
        for (int trial = 0; trial < 25; ++trial) {
            const Index p = 3 + static_cast<Index>(rng.below(5));
            const Index q = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(p)));
            ComplexMatrix c(p, q);
            for (Index i = 0; i < p; ++i) {
                for (Index j = 0; j < q; ++j) {
                    c(i, j) = Complex(rng.normal(), rng.normal());
                }
            }
            if (q > 1) {
                c.col(q - 1) = c.col(0);  // force rank deficiency of C*C
                c.col(q - 1) *= 0.0;
            }
            const PolarResult out = polar_isometry_factor(c);
            CHECK((out.isometry.mat() * out.psd_factor.mat() - c).norm() <=
                  tol_eig * (1.0 + c.norm()));
            CHECK(out.isometry.defect() <= tol_iso);
        }
    }
    SUBCASE("wide input is a shape error") {
        CHECK_THROWS_AS(polar_isometry_factor(ComplexMatrix::Zero(2, 3)), InvalidInput);
    }
}

TEST_CASE("schatten and ky fan norms") {
    CHECK(schatten_norm(ComplexMatrix::Identity(3, 3), 2.0) ==
          doctest::Approx(std::sqrt(3.0)));
    CHECK(schatten_norm(diag({3, 1}), 1.0) == doctest::Approx(4.0));
    CHECK(schatten_norm(mat2(1, 1, 1, 1), schatten_inf) == doctest::Approx(2.0));
    CHECK_THROWS_AS(schatten_norm(diag({1}), 0.5), InvalidInput);

    CHECK(ky_fan_norm(diag({3, 1, 2}), 2) == doctest::Approx(5.0));
    CHECK(ky_fan_norm(ComplexMatrix::Identity(6, 6), 4) == doctest::Approx(4.0));
    CHECK(ky_fan_norm(mat2(1, 1, 1, 1), 2) == doctest::Approx(2.0));
    CHECK_THROWS_AS(ky_fan_norm(diag({1, 2}), 3), InvalidInput);
    CHECK_THROWS_AS(ky_fan_norm(diag({1, 2}), 0), InvalidInput);
}

TEST_CASE("schatten norms are unitarily invariant") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Index dim = 4 + static_cast<Index>(rng.below(4));
        ComplexMatrix a(dim, dim);
        for (Index i = 0; i < dim; ++i) {
            for (Index j = 0; j < dim; ++j) {
                a(i, j) = Complex(rng.normal(), rng.normal());
            }
        }
        const ComplexMatrix u = random_unitary(rng, dim);
        const ComplexMatrix v = random_unitary(rng, dim);
        for (double p : {1.0, 2.0, 3.0, schatten_inf}) {
            CHECK(std::abs(schatten_norm(u * a * v, p) - schatten_norm(a, p)) <=
                  tol_cert * (1.0 + schatten_norm(a, p)));
        }
    }
}

TEST_CASE("matrix_function") {
    SUBCASE("fixed values") {
        CHECK((matrix_function(HermitianMatrix::identity(3),
                               ConcaveFunctionSpec::sqrt_fn())
                   .mat() -
               ComplexMatrix::Identity(3, 3))
                  .norm() < 1e-12);
        CHECK((matrix_function(HermitianMatrix(diag({4, 0})),
                               ConcaveFunctionSpec::sqrt_fn())
                   .mat() -
               diag({2, 0}))
                  .norm() < 1e-12);
        const ComplexMatrix expected = (std::log(3.0) / 2.0) * mat2(1, 1, 1, 1);
        CHECK((matrix_function(HermitianMatrix(mat2(1, 1, 1, 1)),
                               ConcaveFunctionSpec::log1p_fn())
                   .mat() -
               expected)
                  .norm() < 1e-12);
    }
    SUBCASE("commutes with isometric conjugation when f(0) = 0") {
        Rng rng(11);
        const HermitianMatrix a(random_hermitian_psd(rng, 4));
        ComplexMatrix tall(7, 4);
        for (Index i = 0; i < 7; ++i) {
            for (Index j = 0; j < 4; ++j) {
                tall(i, j) = Complex(rng.normal(), rng.normal());
            }
        }
        const Isometry v = polar_isometry_factor(tall).isometry;
        for (const auto& f :
             {ConcaveFunctionSpec::sqrt_fn(), ConcaveFunctionSpec::log1p_fn(),
              ConcaveFunctionSpec::power(0.7), ConcaveFunctionSpec::rational()}) {
            const ComplexMatrix lhs =
                matrix_function(HermitianMatrix(v.mat() * a.mat() * v.mat().adjoint()),
                                f)
                    .mat();
            const ComplexMatrix rhs =
                v.mat() * matrix_function(a, f).mat() * v.mat().adjoint();
            CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
        }
    }
    SUBCASE("catalog parsing") {
        CHECK(ConcaveFunctionSpec::parse("power", {0.5})(4.0) == doctest::Approx(2.0));
        CHECK(ConcaveFunctionSpec::parse("rational", {})(1.0) == doctest::Approx(0.5));
        CHECK(ConcaveFunctionSpec::parse("clamp", {2.0})(5.0) == doctest::Approx(2.0));
        CHECK(ConcaveFunctionSpec::parse("affine", {1.0, 2.0})(3.0) ==
              doctest::Approx(7.0));
        CHECK_THROWS_AS(ConcaveFunctionSpec::parse("exp", {}), InvalidInput);
        CHECK_THROWS_AS(ConcaveFunctionSpec::parse("power", {1.5}), InvalidInput);
        CHECK_THROWS_AS(ConcaveFunctionSpec::parse("affine", {-1.0, 1.0}), InvalidInput);
        CHECK_THROWS_AS(ConcaveFunctionSpec::parse("clamp", {}), InvalidInput);
    }
}

TEST_CASE("weyl bound") {
    SUBCASE("fixed instances") {
        const CertificateReport r1 = weyl_bound(HermitianMatrix::identity(2),
                                                HermitianMatrix::identity(2), 0, 0);
        CHECK(r1.passed);
        CHECK(r1.items[0].lhs == doctest::Approx(2.0));
        CHECK(r1.items[0].rhs == doctest::Approx(2.0));

        const CertificateReport r2 = weyl_bound(HermitianMatrix(diag({3, 1})),
                                                HermitianMatrix(diag({1, 3})), 0, 0);
        CHECK(r2.items[0].lhs == doctest::Approx(4.0));
        CHECK(r2.items[0].rhs == doctest::Approx(6.0));

        const CertificateReport r3 = weyl_bound(HermitianMatrix(diag({5, 2})),
                                                HermitianMatrix(diag({1, 1})), 1, 0);
        CHECK(r3.items[0].lhs == doctest::Approx(3.0));
        CHECK(r3.items[0].rhs == doctest::Approx(3.0));
        CHECK(r3.passed);
    }
    SUBCASE("holds for random PSD pairs at all index pairs") {
        Rng rng(31);
        for (int trial = 0; trial < 500; ++trial) {
            const Index dim = 2 + static_cast<Index>(rng.below(5));
            const HermitianMatrix y(random_hermitian_psd(rng, dim));
            const HermitianMatrix z(random_hermitian_psd(rng, dim));
            for (Index r = 0; r < dim; ++r) {
                for (Index s = 0; r + s < dim; ++s) {
                    const CertificateReport report = weyl_bound(y, z, r, s);
                    REQUIRE(report.passed);
                }
            }
        }
    }
    SUBCASE("past-dimension indices use the zero convention for PSD inputs") {
        const CertificateReport report = weyl_bound(HermitianMatrix(diag({2, 1})),
                                                    HermitianMatrix(diag({1, 1})), 2, 1);
        CHECK(report.items[0].lhs == 0.0);  // lambda_4 of a 2x2 sum
        CHECK(report.items[0].rhs == doctest::Approx(1.0));  // 0 + lambda_2(Z)
        CHECK(report.passed);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(weyl_bound(HermitianMatrix::identity(2),
                                   HermitianMatrix::identity(3), 0, 0),
                        InvalidInput);
    }
}
