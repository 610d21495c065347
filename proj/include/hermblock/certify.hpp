#pragma once

#include "hermblock/block.hpp"
#include "hermblock/linalg.hpp"
#include "hermblock/report.hpp"
#include "hermblock/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hermblock {

// Hermitian matrices sharing one eigenbasis (within tolerance).
struct CommutingFamily {
    std::vector<HermitianMatrix> members;
    std::optional<ComplexMatrix> witness_basis;  // unitary diagonalizing all

    Index dim() const { return members.empty() ? 0 : members.front().dim(); }
    double max_commutator_norm() const;
    bool commutes_within_tolerance() const;
};

// Sum of tensor products A_j (x) B_j with real symmetric PSD A_j; the real
// factor is what lets the assembled matrix be read in Hermitian blocks.
struct SeparableState {
    struct Term {
        RealMatrix a;      // n_h x n_h, real symmetric PSD
        ComplexMatrix b;   // n_f x n_f, Hermitian PSD
    };

    std::vector<Term> terms;
    bool normalized = false;

    Index dim_h() const { return terms.empty() ? 0 : terms.front().a.rows(); }
    Index dim_f() const { return terms.empty() ? 0 : terms.front().b.rows(); }

    // Empty string when valid, otherwise the first violated condition.
    std::string validate() const;

    // Z = sum A_j (x) B_j as a BlockMatrix over the first factor.
    BlockMatrix assemble() const;
    // Tr_H Z = sum (Tr A_j) B_j.
    HermitianMatrix reduced() const;
};

// Weak majorization of H against its partial trace (all Ky Fan prefixes).
CertificateReport check_hiroshima(const BlockMatrix& h, bool force = false,
                                  double tol = tol_cert);

// lambda_{1+beta k}(H) <= lambda_{1+k}(Delta), beta the smallest dyadic >= alpha.
CertificateReport check_eigen_step(const BlockMatrix& h, bool force = false,
                                   double tol = tol_cert);

// lambda_{1+beta k}(H) <= (1/beta) sum_i lambda_{1+k_i}(Delta) for a split
// k_1 + ... + k_beta = beta k.
CertificateReport check_eigen_averaged(const BlockMatrix& h, Index k,
                                       const std::vector<Index>& splits,
                                       bool force = false, double tol = tol_cert);

enum class RearrangementMode { Norms, EigenSteps };

// || sum S_i T^2 S_i || <= || sum T S_i^2 T || in all symmetric norms
// (norms mode), or the eigenvalue-step variant.
CertificateReport check_rearrangement(const CommutingFamily& family,
                                      const HermitianMatrix& t, RearrangementMode mode,
                                      bool force = false, double tol = tol_cert);

// Tr f(Delta) <= Tr f(H) <= sum_s Tr f(A_{s,s}). The upper bound holds with
// no Hermitian-block hypothesis; the lower one is reported only when the
// hypothesis holds or the run is forced.
CertificateReport check_trace_concave(const BlockMatrix& h,
                                      const ConcaveFunctionSpec& f, bool force = false,
                                      double tol = tol_cert);

// det(I + A + B) <= det(I + H) <= det(I + A) det(I + B) on the log scale.
CertificateReport check_determinant(const HermitianMatrix& a, const HermitianMatrix& b,
                                    const HermitianMatrix& x, bool force = false,
                                    double tol = tol_cert);

// Separability necessary condition ||Z|| <= ||Tr_H Z|| plus the eigen-step
// and averaged-step consequences for a real first factor.
CertificateReport check_nielsen_kempe(const SeparableState& z, bool force = false,
                                      double tol = tol_cert);

// Two-block norm estimate ||H||_p <= ||A||_p + ||B||_p (no block hypothesis).
CertificateReport check_block_norm_bound(const BlockMatrix& h, double p,
                                         double tol = tol_cert);

}  // namespace hermblock
