#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hermblock/generate.hpp"
#include "hermblock/rng.hpp"
#include "hermblock/structured.hpp"

using namespace hermblock;

namespace {

ComplexMatrix random_dense(Rng& rng, Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return m;
}

Eigen::VectorXcd random_vector(Rng& rng, Index n) {
    Eigen::VectorXcd v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = Complex(rng.normal(), rng.normal());
    }
    return v;
}

void check_against_dense(const StructuredOperator& op, const ComplexMatrix& dense,
                         Rng& rng) {
    REQUIRE(op.rows() == dense.rows());
    REQUIRE(op.cols() == dense.cols());
    const Eigen::VectorXcd x = random_vector(rng, op.cols());
    CHECK((op.apply(x) - dense * x).norm() <= tol_eig * (1.0 + dense.norm()));
    const Eigen::VectorXcd y = random_vector(rng, op.rows());
    CHECK((op.apply_adjoint(y) - dense.adjoint() * y).norm() <=
          tol_eig * (1.0 + dense.norm()));
    CHECK((op.materialize() - dense).norm() <= tol_eig * (1.0 + dense.norm()));
}

}  // namespace

TEST_CASE("kronecker stage matches the dense product") {
    Rng rng(2);
    const ComplexMatrix a = random_dense(rng, 3, 2);
    const ComplexMatrix b = random_dense(rng, 2, 4);
    const ComplexMatrix c = random_dense(rng, 2, 2);
    check_against_dense(StructuredOperator::kronecker({a, b}),
                        tensor_product(a, b), rng);
    check_against_dense(StructuredOperator::kronecker({a, b, c}),
                        tensor_product(tensor_product(a, b), c), rng);
    SUBCASE("identity factors are skipped but still counted in shape") {
        const ComplexMatrix eye = ComplexMatrix::Identity(5, 5);
        check_against_dense(StructuredOperator::kronecker({eye, c}),
                            tensor_product(eye, c), rng);
        check_against_dense(StructuredOperator::kronecker({c, eye}),
                            tensor_product(c, eye), rng);
    }
}

TEST_CASE("permutation, embed, dense and block-diagonal stages") {
    Rng rng(4);
    SUBCASE("permutation forward and inverse") {
        const Permutation p = shuffle_permutation(2, 3, 1);
        check_against_dense(StructuredOperator::permutation(p), p.to_matrix(), rng);
        check_against_dense(StructuredOperator::permutation(p, true),
                            p.to_matrix().adjoint(), rng);
    }
    SUBCASE("embed injects into the right rows") {
        ComplexMatrix expected = ComplexMatrix::Zero(7, 2);
        expected.block(3, 0, 2, 2) = ComplexMatrix::Identity(2, 2);
        check_against_dense(StructuredOperator::embed(7, 2, 3), expected, rng);
        CHECK_THROWS_AS(StructuredOperator::embed(4, 3, 2), InvalidInput);
    }
    SUBCASE("block diagonal of mixed operators") {
        const ComplexMatrix a = random_dense(rng, 2, 2);
        const ComplexMatrix b = random_dense(rng, 3, 2);
        ComplexMatrix expected = ComplexMatrix::Zero(5, 4);
        expected.block(0, 0, 2, 2) = a;
        expected.block(2, 2, 3, 2) = b;
        check_against_dense(
            StructuredOperator::block_diagonal({StructuredOperator::dense(a),
                                                StructuredOperator::dense(b)}),
            expected, rng);
    }
}

TEST_CASE("composed stages agree with the materialized product") {
    Rng rng(6);
    const ComplexMatrix a = random_dense(rng, 4, 4);
    const ComplexMatrix b = random_dense(rng, 2, 2);
    const ComplexMatrix head = random_dense(rng, 8, 3);
    const Permutation p = shuffle_permutation(2, 2, 2);

    StructuredOperator op = StructuredOperator::dense(head);
    op.then(StructuredOperator::kronecker({b, a}))
        .then(StructuredOperator::permutation(p));

    const ComplexMatrix expected = p.to_matrix() * tensor_product(b, a) * head;
    check_against_dense(op, expected, rng);

    SUBCASE("mismatched chains are rejected") {
        StructuredOperator bad = StructuredOperator::dense(random_dense(rng, 3, 3));
        CHECK_THROWS_AS(bad.then(StructuredOperator::dense(random_dense(rng, 2, 2))),
                        InvalidInput);
    }
    SUBCASE("apply rejects wrong sizes") {
        CHECK_THROWS_AS(op.apply(random_vector(rng, op.cols() + 1)), InvalidInput);
        CHECK_THROWS_AS(op.apply_adjoint(random_vector(rng, op.rows() + 1)),
                        InvalidInput);
    }
}

TEST_CASE("structured composition equals the explicit matrix product") {
    Rng rng(8);
    const ComplexMatrix d1 = random_dense(rng, 3, 5);
    const ComplexMatrix k1 = random_dense(rng, 2, 3);
    const Permutation p = shuffle_permutation(3, 2, 1);

    StructuredOperator op = StructuredOperator::dense(d1);
    op.then(StructuredOperator::kronecker({k1, ComplexMatrix::Identity(1, 1)}))
        .then(StructuredOperator::embed(6, 2, 4))
        .then(StructuredOperator::permutation(p));

    ComplexMatrix embed_mat = ComplexMatrix::Zero(6, 2);
    embed_mat.block(4, 0, 2, 2) = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix expected = p.to_matrix() * embed_mat * k1 * d1;
    check_against_dense(op, expected, rng);
}
