#pragma once

#include "hermblock/block.hpp"
#include "hermblock/types.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace hermblock {

// Lazily applied composition of simple stages. Stages are stored in
// application order: apply(x) feeds x through stages.front() first.
class StructuredOperator {
public:
    struct PermutationStage {
        Permutation perm;
        bool inverse = false;  // apply the inverse relabeling instead
    };

    // (F_1 (x) F_2 (x) ... (x) F_k); identity factors are skipped at apply
    // time, so I_m factors cost nothing.
    struct KroneckerStage {
        std::vector<ComplexMatrix> factors;
    };

    struct BlockDiagonalStage {
        std::vector<StructuredOperator> blocks;
    };

    struct DenseStage {
        ComplexMatrix mat;
    };

    // Injects an in_dim vector into rows [offset, offset + in_dim) of a
    // zero out_dim vector; the adjoint is the corresponding restriction.
    struct EmbedStage {
        Index out_dim = 0;
        Index in_dim = 0;
        Index offset = 0;
    };

    using Stage = std::variant<PermutationStage, KroneckerStage, BlockDiagonalStage,
                               DenseStage, EmbedStage>;

    StructuredOperator() = default;

    static StructuredOperator permutation(Permutation p, bool inverse = false);
    static StructuredOperator kronecker(std::vector<ComplexMatrix> factors);
    static StructuredOperator block_diagonal(std::vector<StructuredOperator> blocks);
    static StructuredOperator dense(ComplexMatrix m);
    static StructuredOperator embed(Index out_dim, Index in_dim, Index offset);

    // Appends a stage applied after the existing ones; dimensions must chain.
    StructuredOperator& then(const StructuredOperator& next);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    const std::vector<Stage>& stages() const { return stages_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    // y = Op^* x.
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& x) const;

    // Dense equivalent, guarded by the dense cap.
    ComplexMatrix materialize() const;

private:
    std::vector<Stage> stages_;
    Index rows_ = 0;
    Index cols_ = 0;
};

}  // namespace hermblock
