#pragma once

#include "hermblock/block.hpp"
#include "hermblock/linalg.hpp"
#include "hermblock/structured.hpp"
#include "hermblock/types.hpp"

#include <optional>
#include <vector>

namespace hermblock {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// target = weight * sum_k V_k summand V_k* (or per_summand[k] when present,
// the pinch case with weight 1).
struct WeightedIsometryDecomposition {
    Index target_dim = 0;
    double weight = 1.0;
    HermitianMatrix summand;
    std::vector<Isometry> isometries;
    std::optional<std::vector<HermitianMatrix>> per_summand;

    // Structured form of the same isometries; populated instead of
    // `isometries` when the decomposition was not materialized.
    std::vector<StructuredOperator> structured;
    // Copies in the enclosing direct sum (1 for pinch / two-block).
    Index copies = 1;

    bool materialized() const { return structured.empty(); }

    // Dense reconstruction (materialized decompositions only).
    ComplexMatrix reconstruct() const;
    double reconstruction_residual(const ComplexMatrix& target) const;
    double max_isometry_defect() const;

    // weight * sum_k v* V_k summand V_k* v through the structured operators.
    Complex structured_quadratic_form(const Eigen::VectorXcd& v) const;
};

// H = sum_s V_s A_{s,s} V_s*, V_s the polar isometry factors of the block
// columns of H^{1/2}. No Hermitian-block hypothesis needed.
WeightedIsometryDecomposition pinch_decompose(const BlockMatrix& h);

// beta = 2 with Hermitian off-diagonal block:
// H = (1/2)(V_1 (A+B) V_1* + V_2 (A+B) V_2*), complex isometries.
WeightedIsometryDecomposition two_block_hermitian_decompose(const BlockMatrix& h);

// Anticommuting Hermitian involutions, 1 <= j <= beta, side 2^beta:
// Q_j = [tensor^{j-1} diag(1,-1)] (x) flip (x) [tensor^{beta-j} I_2].
// Exact integer entries in {-1, 0, 1}.
IntMatrix clifford_generator(int j, int beta);
ComplexMatrix clifford_generator_dense(int j, int beta);

// W = directsum_{j=1..beta} (Q_j (x) I_n); Hermitian involution.
StructuredOperator clifford_conjugator(int beta, Index n);

// J_p = tensor^p of (1/sqrt 2)[[1,1],[1,-1]]; real symmetric involution.
ComplexMatrix hadamard_reflection(int p);

// Omega = W [I_m (x) A_{s,t}] W with m = 2^beta; block (s,t) equals
// (Q_s Q_t) (x) A_{s,t}, so off-diagonal blocks are antisymmetric across
// the diagonal and diagonal blocks are I_m (x) A_{s,s}.
HermitianMatrix clifford_omega(const BlockMatrix& h);

// D = (1/beta) I_m (x) Delta, the shared diagonal block after the
// reflection stage.
HermitianMatrix clifford_core(const BlockMatrix& h);

// The dyadic direct-sum decomposition: with m = 2^beta,
//   directsum^m H = (1/beta) sum_k V_k (directsum^m Delta) V_k*.
// materialize=true is allowed for beta in {2, 4}; beta = 8 must use the
// structured path; beta >= 16 is refused.
WeightedIsometryDecomposition clifford_decompose(const BlockMatrix& h, bool materialize);

// I_m (x) H as a lazy operator (used to probe the structured identity).
StructuredOperator direct_sum_operator(const HermitianMatrix& h, Index m);

}  // namespace hermblock
