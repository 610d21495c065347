#include "hermblock/structured.hpp"

#include <numeric>

namespace hermblock {

namespace {

bool is_identity(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return m == ComplexMatrix::Identity(m.rows(), m.cols());
}

Index stage_rows(const StructuredOperator::Stage& s) {
    return std::visit(
        [](const auto& st) -> Index {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, StructuredOperator::PermutationStage>) {
                return st.perm.size;
            } else if constexpr (std::is_same_v<T, StructuredOperator::KroneckerStage>) {
                Index r = 1;
                for (const auto& f : st.factors) {
                    r *= f.rows();
                }
                return r;
            } else if constexpr (std::is_same_v<T, StructuredOperator::BlockDiagonalStage>) {
                Index r = 0;
                for (const auto& b : st.blocks) {
                    r += b.rows();
                }
                return r;
            } else if constexpr (std::is_same_v<T, StructuredOperator::DenseStage>) {
                return st.mat.rows();
            } else {
                return st.out_dim;
            }
        },
        s);
}

Index stage_cols(const StructuredOperator::Stage& s) {
    return std::visit(
        [](const auto& st) -> Index {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, StructuredOperator::PermutationStage>) {
                return st.perm.size;
            } else if constexpr (std::is_same_v<T, StructuredOperator::KroneckerStage>) {
                Index c = 1;
                for (const auto& f : st.factors) {
                    c *= f.cols();
                }
                return c;
            } else if constexpr (std::is_same_v<T, StructuredOperator::BlockDiagonalStage>) {
                Index c = 0;
                for (const auto& b : st.blocks) {
                    c += b.cols();
                }
                return c;
            } else if constexpr (std::is_same_v<T, StructuredOperator::DenseStage>) {
                return st.mat.cols();
            } else {
                return st.in_dim;
            }
        },
        s);
}

// (F_1 (x) ... (x) F_k) x, recursively splitting off the first factor:
// view x as a (cols(rest) x cols(F_1)) column-major matrix, apply the rest
// to each column, then multiply by F_1^T on the right.
Eigen::VectorXcd kron_apply(const std::vector<ComplexMatrix>& factors, std::size_t from,
                            const Eigen::VectorXcd& x, bool adjoint) {
    if (from + 1 == factors.size()) {
        const ComplexMatrix& f = factors[from];
        if (is_identity(f)) {
            return x;
        }
        return adjoint ? (f.adjoint() * x).eval() : (f * x).eval();
    }
    const ComplexMatrix& head = factors[from];
    Index rest_rows = 1;
    Index rest_cols = 1;
    for (std::size_t i = from + 1; i < factors.size(); ++i) {
        rest_rows *= factors[i].rows();
        rest_cols *= factors[i].cols();
    }
    if (adjoint) {
        std::swap(rest_rows, rest_cols);
    }
    const Index head_cols = adjoint ? head.rows() : head.cols();
    const Index head_rows = adjoint ? head.cols() : head.rows();

    Eigen::Map<const ComplexMatrix> xm(x.data(), rest_cols, head_cols);
    ComplexMatrix mid(rest_rows, head_cols);
    for (Index c = 0; c < head_cols; ++c) {
        mid.col(c) = kron_apply(factors, from + 1, xm.col(c), adjoint);
    }
    ComplexMatrix out;
    if (is_identity(head)) {
        out = mid;
    } else if (adjoint) {
        out = mid * head.conjugate();
    } else {
        out = mid * head.transpose();
    }
    return Eigen::Map<Eigen::VectorXcd>(out.data(), head_rows * rest_rows);
}

Eigen::VectorXcd apply_stage(const StructuredOperator::Stage& s, const Eigen::VectorXcd& x,
                             bool adjoint) {
    return std::visit(
        [&](const auto& st) -> Eigen::VectorXcd {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, StructuredOperator::PermutationStage>) {
                const bool forward = st.inverse == adjoint;
                return forward ? st.perm.apply(x) : st.perm.apply_inverse(x);
            } else if constexpr (std::is_same_v<T, StructuredOperator::KroneckerStage>) {
                return kron_apply(st.factors, 0, x, adjoint);
            } else if constexpr (std::is_same_v<T, StructuredOperator::BlockDiagonalStage>) {
                Index out_dim = 0;
                for (const auto& b : st.blocks) {
                    out_dim += adjoint ? b.cols() : b.rows();
                }
                Eigen::VectorXcd y(out_dim);
                Index in_at = 0;
                Index out_at = 0;
                for (const auto& b : st.blocks) {
                    const Index in_len = adjoint ? b.rows() : b.cols();
                    const Index out_len = adjoint ? b.cols() : b.rows();
                    const Eigen::VectorXcd piece = x.segment(in_at, in_len);
                    y.segment(out_at, out_len) =
                        adjoint ? b.apply_adjoint(piece) : b.apply(piece);
                    in_at += in_len;
                    out_at += out_len;
                }
                return y;
            } else if constexpr (std::is_same_v<T, StructuredOperator::DenseStage>) {
                return adjoint ? (st.mat.adjoint() * x).eval() : (st.mat * x).eval();
            } else {
                if (adjoint) {
                    return x.segment(st.offset, st.in_dim);
                }
                Eigen::VectorXcd y = Eigen::VectorXcd::Zero(st.out_dim);
                y.segment(st.offset, st.in_dim) = x;
                return y;
            }
        },
        s);
}

}  // namespace

StructuredOperator StructuredOperator::permutation(Permutation p, bool inverse) {
    if (!p.valid()) {
        throw InvalidInput("StructuredOperator: invalid permutation");
    }
    StructuredOperator op;
    op.rows_ = op.cols_ = p.size;
    op.stages_.push_back(PermutationStage{std::move(p), inverse});
    return op;
}

StructuredOperator StructuredOperator::kronecker(std::vector<ComplexMatrix> factors) {
    if (factors.empty()) {
        throw InvalidInput("StructuredOperator: kronecker needs a factor");
    }
    StructuredOperator op;
    op.rows_ = 1;
    op.cols_ = 1;
    for (const auto& f : factors) {
        op.rows_ *= f.rows();
        op.cols_ *= f.cols();
    }
    op.stages_.push_back(KroneckerStage{std::move(factors)});
    return op;
}

StructuredOperator StructuredOperator::block_diagonal(std::vector<StructuredOperator> blocks) {
    if (blocks.empty()) {
        throw InvalidInput("StructuredOperator: block_diagonal needs a block");
    }
    StructuredOperator op;
    op.rows_ = 0;
    op.cols_ = 0;
    for (const auto& b : blocks) {
        op.rows_ += b.rows();
        op.cols_ += b.cols();
    }
    op.stages_.push_back(BlockDiagonalStage{std::move(blocks)});
    return op;
}

StructuredOperator StructuredOperator::dense(ComplexMatrix m) {
    StructuredOperator op;
    op.rows_ = m.rows();
    op.cols_ = m.cols();
    op.stages_.push_back(DenseStage{std::move(m)});
    return op;
}

StructuredOperator StructuredOperator::embed(Index out_dim, Index in_dim, Index offset) {
    if (in_dim < 0 || offset < 0 || offset + in_dim > out_dim) {
        throw InvalidInput("StructuredOperator: embed range out of bounds");
    }
    StructuredOperator op;
    op.rows_ = out_dim;
    op.cols_ = in_dim;
    op.stages_.push_back(EmbedStage{out_dim, in_dim, offset});
    return op;
}

StructuredOperator& StructuredOperator::then(const StructuredOperator& next) {
    if (stages_.empty()) {
        *this = next;
        return *this;
    }
    if (next.cols() != rows_) {
        throw InvalidInput("StructuredOperator: stage dimensions do not chain");
    }
    for (const auto& s : next.stages_) {
        stages_.push_back(s);
    }
    rows_ = next.rows();
    return *this;
}

Eigen::VectorXcd StructuredOperator::apply(const Eigen::VectorXcd& x) const {
    if (x.size() != cols_) {
        throw InvalidInput("StructuredOperator::apply: size mismatch");
    }
    Eigen::VectorXcd y = x;
    for (const auto& s : stages_) {
        if (y.size() != stage_cols(s)) {
            throw NumericalFailure("StructuredOperator: broken stage chain");
        }
        y = apply_stage(s, y, /*adjoint=*/false);
    }
    return y;
}

Eigen::VectorXcd StructuredOperator::apply_adjoint(const Eigen::VectorXcd& x) const {
    if (x.size() != rows_) {
        throw InvalidInput("StructuredOperator::apply_adjoint: size mismatch");
    }
    Eigen::VectorXcd y = x;
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        if (y.size() != stage_rows(*it)) {
            throw NumericalFailure("StructuredOperator: broken stage chain");
        }
        y = apply_stage(*it, y, /*adjoint=*/true);
    }
    return y;
}

ComplexMatrix StructuredOperator::materialize() const {
    require_within_cap(std::max(rows_, cols_), "StructuredOperator::materialize");
    ComplexMatrix out(rows_, cols_);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(cols_);
    for (Index j = 0; j < cols_; ++j) {
        e(j) = 1.0;
        out.col(j) = apply(e);
        e(j) = 0.0;
    }
    return out;
}

}  // namespace hermblock
