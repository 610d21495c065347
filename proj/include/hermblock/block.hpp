#pragma once

#include "hermblock/linalg.hpp"
#include "hermblock/types.hpp"

#include <utility>
#include <vector>

namespace hermblock {

// Index bijection on {0, ..., size-1}; as a matrix, row image[i] has a one
// in column i, so conjugating M moves entry (i, j) to (image[i], image[j]).
struct Permutation {
    Index size = 0;
    std::vector<Index> image;

    bool valid() const;
    Permutation inverse() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd apply_inverse(const Eigen::VectorXcd& x) const;
    ComplexMatrix conjugate(const ComplexMatrix& m) const;  // P M P^T
    ComplexMatrix to_matrix() const;
};

// Dense cap for materialized structured objects; override with the
// HERMBLOCK_MAX_DIM environment variable.
Index dense_dimension_cap();
void require_within_cap(Index dim, const char* what);

// PSD matrix of side beta*n carrying its block partition.
class BlockMatrix {
public:
    // Validates PSD-ness and sets hermitian_blocks from the block contents.
    static BlockMatrix partition(const HermitianMatrix& m, Index beta, Index n);

    // Trusted constructor for internally produced partitions (skips the
    // PSD eigencheck; flag supplied by the caller).
    static BlockMatrix from_parts(HermitianMatrix m, Index beta, Index n,
                                  bool hermitian_blocks);

    Index beta() const { return beta_; }
    Index n() const { return n_; }
    Index dim() const { return carrier_.dim(); }
    bool hermitian_blocks() const { return hermitian_blocks_; }
    const HermitianMatrix& carrier() const { return carrier_; }
    const ComplexMatrix& mat() const { return carrier_.mat(); }

    // 0-based block row s, block column t; n x n view.
    ComplexMatrix block(Index s, Index t) const;
    ComplexMatrix diagonal_block(Index s) const { return block(s, s); }

private:
    BlockMatrix(HermitianMatrix m, Index beta, Index n, bool flag)
        : carrier_(std::move(m)), beta_(beta), n_(n), hermitian_blocks_(flag) {}

    HermitianMatrix carrier_;
    Index beta_;
    Index n_;
    bool hermitian_blocks_;
};

// Delta = sum of the diagonal blocks.
HermitianMatrix partial_trace(const BlockMatrix& h);

// Smallest power of two >= alpha.
Index smallest_dyadic_at_least(Index alpha);

// Appends zero blocks until the block count is a power of two.
BlockMatrix pad_to_dyadic(const BlockMatrix& h);

// Block diagonal with m copies of A.
HermitianMatrix direct_sum_copies(const HermitianMatrix& a, Index m);

// (lambda_{1+j} of the materialized m-fold direct sum, lambda_{ceil((1+j)/m)}
// of A). The two routes agree for PSD inputs; j is 0-based.
std::pair<double, double> eigen_index_map(const HermitianMatrix& a, Index m, Index j);

// Permutation taking block-major index (block s, copy c, inner i) to
// copy-major (copy c, block s, inner i); conjugation maps [I_m (x) A_{s,t}]
// to the m-fold direct sum of H exactly.
Permutation shuffle_permutation(Index m, Index beta, Index n);

// Kronecker product, block (s,t) = a_{s,t} * B.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace hermblock
