#include "hermblock/decompose.hpp"

#include "hermblock/rng.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace hermblock {

ComplexMatrix WeightedIsometryDecomposition::reconstruct() const {
    if (!materialized()) {
        throw InvalidInput("reconstruct: decomposition is structured; use probes");
    }
    ComplexMatrix acc = ComplexMatrix::Zero(target_dim, target_dim);
    for (std::size_t k = 0; k < isometries.size(); ++k) {
        const ComplexMatrix& v = isometries[k].mat();
        const ComplexMatrix& s =
            per_summand ? (*per_summand)[k].mat() : summand.mat();
        acc += v * s * v.adjoint();
    }
    return weight * acc;
}

double WeightedIsometryDecomposition::reconstruction_residual(
    const ComplexMatrix& target) const {
    return (reconstruct() - target).norm();
}

double WeightedIsometryDecomposition::max_isometry_defect() const {
    double worst = 0.0;
    for (const auto& v : isometries) {
        worst = std::max(worst, v.defect());
    }
    return worst;
}

Complex WeightedIsometryDecomposition::structured_quadratic_form(
    const Eigen::VectorXcd& v) const {
    if (materialized()) {
        throw InvalidInput("structured_quadratic_form: decomposition is dense");
    }
    Complex acc = 0.0;
    for (const auto& op : structured) {
        const Eigen::VectorXcd w = op.apply_adjoint(v);
        acc += w.dot(summand.mat() * w);  // Eigen dot conjugates the left side
    }
    return weight * acc;
}

WeightedIsometryDecomposition pinch_decompose(const BlockMatrix& h) {
    const Index beta = h.beta();
    const Index n = h.n();
    const HermitianMatrix root = psd_sqrt(h.carrier());

    WeightedIsometryDecomposition out{
        h.dim(), 1.0, partial_trace(h), {}, std::vector<HermitianMatrix>{}, {}, 1};
    out.isometries.reserve(static_cast<std::size_t>(beta));
    out.per_summand->reserve(static_cast<std::size_t>(beta));
    for (Index s = 0; s < beta; ++s) {
        const ComplexMatrix column = root.mat().middleCols(s * n, n);
        PolarResult polar = polar_isometry_factor(column);
        out.isometries.push_back(std::move(polar.isometry));
        out.per_summand->emplace_back(h.diagonal_block(s));
    }
    return out;
}

WeightedIsometryDecomposition two_block_hermitian_decompose(const BlockMatrix& h) {
    if (h.beta() != 2) {
        throw InvalidInput("two_block_hermitian_decompose: requires beta = 2");
    }
    if (!h.hermitian_blocks()) {
        throw InvalidInput(
            "two_block_hermitian_decompose: off-diagonal block must be Hermitian");
    }
    const Index n = h.n();
    const Complex i_unit(0.0, 1.0);
    ComplexMatrix t(2 * n, 2 * n);
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    t.topLeftCorner(n, n) = inv_sqrt2 * eye;
    t.topRightCorner(n, n) = inv_sqrt2 * i_unit * eye;
    t.bottomLeftCorner(n, n) = inv_sqrt2 * i_unit * eye;
    t.bottomRightCorner(n, n) = inv_sqrt2 * eye;

    // Both diagonal blocks of T H T* equal (A+B)/2; the off-diagonal one is
    // (2X + i(B-A))/2, which is why complex entries appear even for real H.
    const ComplexMatrix conjugated = t * h.mat() * t.adjoint();
    const BlockMatrix pinched = BlockMatrix::from_parts(
        HermitianMatrix(conjugated), 2, n, /*hermitian_blocks=*/false);
    WeightedIsometryDecomposition inner = pinch_decompose(pinched);

    const HermitianMatrix sum_ab(h.block(0, 0) + h.block(1, 1));
    WeightedIsometryDecomposition out{h.dim(), 0.5, sum_ab, {}, std::nullopt, {}, 1};
    for (const auto& w : inner.isometries) {
        out.isometries.emplace_back(ComplexMatrix(t.adjoint() * w.mat()));
    }
    return out;
}

IntMatrix clifford_generator(int j, int beta) {
    if (beta < 1 || j < 1 || j > beta) {
        throw InvalidInput("clifford_generator: requires 1 <= j <= beta");
    }
    IntMatrix sign(2, 2);
    sign << 1, 0, 0, -1;
    IntMatrix flip(2, 2);
    flip << 0, 1, 1, 0;
    IntMatrix eye = IntMatrix::Identity(2, 2);

    IntMatrix q = IntMatrix::Identity(1, 1);
    for (int a = 1; a < j; ++a) {
        q = Eigen::kroneckerProduct(q, sign).eval();
    }
    q = Eigen::kroneckerProduct(q, flip).eval();
    for (int a = j; a < beta; ++a) {
        q = Eigen::kroneckerProduct(q, eye).eval();
    }
    return q;
}

ComplexMatrix clifford_generator_dense(int j, int beta) {
    return clifford_generator(j, beta).cast<Complex>();
}

StructuredOperator clifford_conjugator(int beta, Index n) {
    if (beta < 2) {
        throw InvalidInput("clifford_conjugator: requires beta >= 2");
    }
    std::vector<StructuredOperator> blocks;
    blocks.reserve(static_cast<std::size_t>(beta));
    const ComplexMatrix eye_n = ComplexMatrix::Identity(n, n);
    for (int j = 1; j <= beta; ++j) {
        blocks.push_back(
            StructuredOperator::kronecker({clifford_generator_dense(j, beta), eye_n}));
    }
    return StructuredOperator::block_diagonal(std::move(blocks));
}

ComplexMatrix hadamard_reflection(int p) {
    if (p < 1) {
        throw InvalidInput("hadamard_reflection: requires p >= 1");
    }
    ComplexMatrix j1(2, 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    j1 << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    ComplexMatrix j = j1;
    for (int a = 1; a < p; ++a) {
        j = Eigen::kroneckerProduct(j1, j).eval();
    }
    return j;
}

namespace {

int dyadic_exponent(Index beta) {
    int p = 0;
    Index v = beta;
    while (v > 1 && v % 2 == 0) {
        v /= 2;
        ++p;
    }
    return v == 1 ? p : -1;
}

}  // namespace

HermitianMatrix clifford_omega(const BlockMatrix& h) {
    if (!h.hermitian_blocks()) {
        throw InvalidInput("clifford_omega: requires Hermitian blocks");
    }
    const Index beta = h.beta();
    if (dyadic_exponent(beta) < 1) {
        throw InvalidInput("clifford_omega: beta must be dyadic (pad_to_dyadic first)");
    }
    const Index m = Index{1} << beta;
    const Index n = h.n();
    require_within_cap(beta * m * n, "clifford_omega");

    std::vector<IntMatrix> q;
    q.reserve(static_cast<std::size_t>(beta));
    for (int j = 1; j <= static_cast<int>(beta); ++j) {
        q.push_back(clifford_generator(j, static_cast<int>(beta)));
    }

    ComplexMatrix omega(beta * m * n, beta * m * n);
    for (Index s = 0; s < beta; ++s) {
        for (Index t = 0; t < beta; ++t) {
            const ComplexMatrix qq =
                (q[static_cast<std::size_t>(s)] * q[static_cast<std::size_t>(t)])
                    .cast<Complex>();
            omega.block(s * m * n, t * m * n, m * n, m * n) =
                Eigen::kroneckerProduct(qq, h.block(s, t));
        }
    }
    return HermitianMatrix(omega);
}

HermitianMatrix clifford_core(const BlockMatrix& h) {
    const Index beta = h.beta();
    const Index m = Index{1} << beta;
    const HermitianMatrix delta = partial_trace(h);
    require_within_cap(m * h.n(), "clifford_core");
    ComplexMatrix d = Eigen::kroneckerProduct(ComplexMatrix::Identity(m, m),
                                              (1.0 / static_cast<double>(beta)) *
                                                  delta.mat());
    return HermitianMatrix(d);
}

StructuredOperator direct_sum_operator(const HermitianMatrix& h, Index m) {
    return StructuredOperator::kronecker(
        {ComplexMatrix::Identity(m, m), h.mat()});
}

namespace {

WeightedIsometryDecomposition clifford_decompose_dense(const BlockMatrix& h) {
    const Index beta = h.beta();
    const Index n = h.n();
    const Index m = Index{1} << beta;
    const int p = dyadic_exponent(beta);
    const Index side = beta * m * n;

    const HermitianMatrix omega = clifford_omega(h);
    const ComplexMatrix reflect = Eigen::kroneckerProduct(
        hadamard_reflection(p), ComplexMatrix::Identity(m * n, m * n));
    const ComplexMatrix theta = reflect * omega.mat() * reflect.adjoint();

    const HermitianMatrix core = clifford_core(h);
    const double tol = tol_eig * (1.0 + frobenius(h.mat()));
    for (Index k = 0; k < beta; ++k) {
        const double gap =
            (theta.block(k * m * n, k * m * n, m * n, m * n) - core.mat()).norm();
        if (gap > tol) {
            std::ostringstream msg;
            msg << "clifford_decompose: diagonal block " << k
                << " deviates from the shared core by " << gap
                << "; input violates the Hermitian-block hypothesis beyond tolerance";
            throw NumericalFailure(msg.str());
        }
    }

    const BlockMatrix theta_blocks = BlockMatrix::from_parts(
        HermitianMatrix(theta), beta, m * n, /*hermitian_blocks=*/false);
    WeightedIsometryDecomposition pinch = pinch_decompose(theta_blocks);

    const ComplexMatrix w = clifford_conjugator(static_cast<int>(beta), n).materialize();
    const Permutation shuffle = shuffle_permutation(m, beta, n);

    const HermitianMatrix delta = partial_trace(h);
    WeightedIsometryDecomposition out{side,
                                      1.0 / static_cast<double>(beta),
                                      direct_sum_copies(delta, m),
                                      {},
                                      std::nullopt,
                                      {},
                                      m};
    for (const auto& u : pinch.isometries) {
        // V_k = P W R U_k (both W and R are their own adjoints).
        ComplexMatrix v = w * (reflect * u.mat());
        ComplexMatrix permuted(v.rows(), v.cols());
        for (Index r = 0; r < v.rows(); ++r) {
            permuted.row(shuffle.image[static_cast<std::size_t>(r)]) = v.row(r);
        }
        out.isometries.emplace_back(std::move(permuted));
    }
    return out;
}

WeightedIsometryDecomposition clifford_decompose_structured(const BlockMatrix& h) {
    const Index beta = h.beta();
    const Index n = h.n();
    const Index m = Index{1} << beta;
    const int p = dyadic_exponent(beta);

    const HermitianMatrix root_h = psd_sqrt(h.carrier());
    const HermitianMatrix delta = partial_trace(h);
    EigResult delta_eig = hermitian_eig(delta);
    const double top = std::max(1.0, delta_eig.spectrum.at(1));
    if (delta_eig.spectrum.values.back() <= 1e-12 * top) {
        throw InvalidInput(
            "clifford_decompose: structured path needs a positive definite partial "
            "trace; use the materialized path for rank-deficient instances");
    }
    RealVector inv_roots(delta.dim());
    for (Index i = 0; i < delta.dim(); ++i) {
        inv_roots(i) = 1.0 / std::sqrt(delta_eig.spectrum.values[static_cast<std::size_t>(i)]);
    }
    const ComplexMatrix delta_inv_root = std::sqrt(static_cast<double>(beta)) *
                                         (delta_eig.vectors * inv_roots.asDiagonal() *
                                          delta_eig.vectors.adjoint());

    const ComplexMatrix eye_m = ComplexMatrix::Identity(m, m);
    const ComplexMatrix eye_mn = ComplexMatrix::Identity(m * n, m * n);
    const ComplexMatrix j_p = hadamard_reflection(p);
    const Permutation shuffle = shuffle_permutation(m, beta, n);
    const StructuredOperator w = clifford_conjugator(static_cast<int>(beta), n);
    const StructuredOperator reflect = StructuredOperator::kronecker({j_p, eye_mn});
    const StructuredOperator root_stage = StructuredOperator::kronecker({eye_m, root_h.mat()});

    WeightedIsometryDecomposition out{beta * m * n,
                                      1.0 / static_cast<double>(beta),
                                      direct_sum_copies(delta, m),
                                      {},
                                      std::nullopt,
                                      {},
                                      m};
    // V_k = (I_m (x) H^{1/2}) P W R E_k (sqrt(beta) I_m (x) Delta^{-1/2});
    // conjugating the pinch of the reflected matrix back through P, W, R
    // cancels against the square root's own conjugations.
    Rng probe_rng(0x5eedULL ^ static_cast<std::uint64_t>(beta * m * n));
    for (Index k = 0; k < beta; ++k) {
        StructuredOperator v =
            StructuredOperator::kronecker({eye_m, delta_inv_root});
        v.then(StructuredOperator::embed(beta * m * n, m * n, k * m * n))
            .then(reflect)
            .then(w)
            .then(StructuredOperator::permutation(shuffle))
            .then(root_stage);

        // Lazy analogue of the equal-diagonal-block check: V_k* V_k is the
        // shared core conjugated by its inverse root, so probing it against
        // the identity certifies the block identity without materializing.
        const double tol = tol_eig * (1.0 + frobenius(h.mat()));
        for (int probe = 0; probe < 2; ++probe) {
            Eigen::VectorXcd x(m * n);
            for (Index i = 0; i < x.size(); ++i) {
                x(i) = Complex(probe_rng.normal(), probe_rng.normal());
            }
            const Eigen::VectorXcd round = v.apply_adjoint(v.apply(x));
            if ((round - x).norm() > tol * x.norm()) {
                std::ostringstream msg;
                msg << "clifford_decompose: structured isometry " << k
                    << " failed the diagonal-block probe by "
                    << (round - x).norm() / x.norm()
                    << "; input violates the Hermitian-block hypothesis beyond "
                       "tolerance";
                throw NumericalFailure(msg.str());
            }
        }
        out.structured.push_back(std::move(v));
    }
    return out;
}

}  // namespace

WeightedIsometryDecomposition clifford_decompose(const BlockMatrix& h, bool materialize) {
    if (!h.hermitian_blocks()) {
        throw InvalidInput("clifford_decompose: requires Hermitian blocks");
    }
    const Index beta = h.beta();
    if (dyadic_exponent(beta) < 1) {
        throw InvalidInput(
            "clifford_decompose: beta must be dyadic; apply pad_to_dyadic first");
    }
    if (beta >= 16) {
        throw ResourceLimit("clifford_decompose: beta >= 16 exceeds 2^beta copies");
    }
    if (materialize && beta > 4) {
        throw ResourceLimit(
            "clifford_decompose: materialized form is limited to beta in {2, 4}; "
            "use the structured path");
    }
    return materialize ? clifford_decompose_dense(h) : clifford_decompose_structured(h);
}

}  // namespace hermblock
