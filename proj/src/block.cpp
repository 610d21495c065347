#include "hermblock/block.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>

namespace hermblock {

bool Permutation::valid() const {
    if (static_cast<Index>(image.size()) != size) {
        return false;
    }
    std::vector<bool> seen(static_cast<std::size_t>(size), false);
    for (Index v : image) {
        if (v < 0 || v >= size || seen[static_cast<std::size_t>(v)]) {
            return false;
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.size = size;
    inv.image.resize(image.size());
    for (Index i = 0; i < size; ++i) {
        inv.image[static_cast<std::size_t>(image[static_cast<std::size_t>(i)])] = i;
    }
    return inv;
}

Eigen::VectorXcd Permutation::apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y(size);
    for (Index i = 0; i < size; ++i) {
        y(image[static_cast<std::size_t>(i)]) = x(i);
    }
    return y;
}

Eigen::VectorXcd Permutation::apply_inverse(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y(size);
    for (Index i = 0; i < size; ++i) {
        y(i) = x(image[static_cast<std::size_t>(i)]);
    }
    return y;
}

ComplexMatrix Permutation::conjugate(const ComplexMatrix& m) const {
    ComplexMatrix out(size, size);
    for (Index i = 0; i < size; ++i) {
        for (Index j = 0; j < size; ++j) {
            out(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]) =
                m(i, j);
        }
    }
    return out;
}

ComplexMatrix Permutation::to_matrix() const {
    ComplexMatrix p = ComplexMatrix::Zero(size, size);
    for (Index i = 0; i < size; ++i) {
        p(image[static_cast<std::size_t>(i)], i) = 1.0;
    }
    return p;
}

Index dense_dimension_cap() {
    static const Index cap = [] {
        if (const char* env = std::getenv("HERMBLOCK_MAX_DIM")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) {
                return static_cast<Index>(v);
            }
        }
        return static_cast<Index>(4096);
    }();
    return cap;
}

void require_within_cap(Index dim, const char* what) {
    if (dim > dense_dimension_cap()) {
        std::ostringstream msg;
        msg << what << ": side " << dim << " exceeds the dense cap "
            << dense_dimension_cap() << " (override with HERMBLOCK_MAX_DIM)";
        throw ResourceLimit(msg.str());
    }
}

BlockMatrix BlockMatrix::partition(const HermitianMatrix& m, Index beta, Index n) {
    if (beta < 1 || n < 1 || m.dim() != beta * n) {
        std::ostringstream msg;
        msg << "partition: dim " << m.dim() << " does not match beta*n = " << beta
            << "*" << n;
        throw InvalidInput(msg.str());
    }
    double lambda_min = 0.0;
    if (!is_psd(m, &lambda_min)) {
        throw InvalidInput("partition: matrix not PSD, min eigenvalue " +
                           std::to_string(lambda_min));
    }
    const double tol = tol_eig * (1.0 + frobenius(m.mat()));
    bool flag = true;
    for (Index s = 0; s < beta && flag; ++s) {
        for (Index t = s; t < beta && flag; ++t) {
            const ComplexMatrix blk = m.mat().block(s * n, t * n, n, n);
            if ((blk - blk.adjoint()).norm() > tol) {
                flag = false;
            }
        }
    }
    return BlockMatrix(m, beta, n, flag);
}

BlockMatrix BlockMatrix::from_parts(HermitianMatrix m, Index beta, Index n,
                                    bool hermitian_blocks) {
    if (m.dim() != beta * n) {
        throw InvalidInput("BlockMatrix::from_parts: dimension mismatch");
    }
    return BlockMatrix(std::move(m), beta, n, hermitian_blocks);
}

ComplexMatrix BlockMatrix::block(Index s, Index t) const {
    if (s < 0 || s >= beta_ || t < 0 || t >= beta_) {
        throw InvalidInput("block: index out of range");
    }
    return carrier_.mat().block(s * n_, t * n_, n_, n_);
}

HermitianMatrix partial_trace(const BlockMatrix& h) {
    ComplexMatrix delta = ComplexMatrix::Zero(h.n(), h.n());
    for (Index s = 0; s < h.beta(); ++s) {
        delta += h.diagonal_block(s);
    }
    return HermitianMatrix(delta);
}

Index smallest_dyadic_at_least(Index alpha) {
    if (alpha < 1) {
        throw InvalidInput("smallest_dyadic_at_least: requires alpha >= 1");
    }
    return static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(alpha)));
}

BlockMatrix pad_to_dyadic(const BlockMatrix& h) {
    const Index beta = smallest_dyadic_at_least(h.beta());
    if (beta == h.beta()) {
        return h;
    }
    ComplexMatrix padded = ComplexMatrix::Zero(beta * h.n(), beta * h.n());
    padded.topLeftCorner(h.dim(), h.dim()) = h.mat();
    return BlockMatrix::from_parts(HermitianMatrix(padded), beta, h.n(),
                                   h.hermitian_blocks());
}

HermitianMatrix direct_sum_copies(const HermitianMatrix& a, Index m) {
    if (m < 1) {
        throw InvalidInput("direct_sum_copies: requires m >= 1");
    }
    require_within_cap(m * a.dim(), "direct_sum_copies");
    ComplexMatrix out = ComplexMatrix::Zero(m * a.dim(), m * a.dim());
    for (Index c = 0; c < m; ++c) {
        out.block(c * a.dim(), c * a.dim(), a.dim(), a.dim()) = a.mat();
    }
    return HermitianMatrix(out);
}

std::pair<double, double> eigen_index_map(const HermitianMatrix& a, Index m, Index j) {
    if (j < 0) {
        throw InvalidInput("eigen_index_map: requires j >= 0");
    }
    const HermitianMatrix big = direct_sum_copies(a, m);
    const Spectrum big_spec = hermitian_spectrum(big);
    const Spectrum small_spec = hermitian_spectrum(a);
    const double lhs = big_spec.at(1 + j);  // zero convention past dim
    // ceil((1+j)/m) without floating point.
    const Index idx = (1 + j + m - 1) / m;
    const double rhs = small_spec.at(idx);
    return {lhs, rhs};
}

Permutation shuffle_permutation(Index m, Index beta, Index n) {
    if (m < 1 || beta < 1 || n < 1) {
        throw InvalidInput("shuffle_permutation: sizes must be positive");
    }
    Permutation p;
    p.size = m * beta * n;
    p.image.resize(static_cast<std::size_t>(p.size));
    for (Index s = 0; s < beta; ++s) {
        for (Index c = 0; c < m; ++c) {
            for (Index i = 0; i < n; ++i) {
                const Index from = s * (m * n) + c * n + i;  // block-major
                const Index to = c * (beta * n) + s * n + i; // copy-major
                p.image[static_cast<std::size_t>(from)] = to;
            }
        }
    }
    return p;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_within_cap(std::max(a.rows() * b.rows(), a.cols() * b.cols()),
                       "tensor_product");
    return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace hermblock
