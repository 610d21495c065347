#pragma once

#include "hermblock/block.hpp"
#include "hermblock/certify.hpp"
#include "hermblock/rng.hpp"
#include "hermblock/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace hermblock {

// Identical configs produce identical output, bit for bit.
struct GeneratorConfig {
    std::uint64_t seed = 0;
    Index beta = 2;   // block count (alpha) or family size
    Index n = 2;      // block side
    std::string method = "separable";  // separable | gram | projected
    Index terms = 2;          // tensor terms k
    Index iteration_cap = 500;  // Dykstra sweeps
    long budget = 0;          // counterexample search evaluations
    Index n_h = 2;            // separable state first factor
    Index n_f = 2;            // separable state second factor
    bool normalized = false;  // scale the state to trace one
};

// Random helpers shared by the generators (all deterministic in the Rng).
RealMatrix random_real_symmetric_psd(Rng& rng, Index dim);
ComplexMatrix random_hermitian(Rng& rng, Index dim);
ComplexMatrix random_hermitian_psd(Rng& rng, Index dim);
ComplexMatrix random_unitary(Rng& rng, Index dim);

// Hermitian-block PSD instances via one of three constructions:
//   separable: sum of k tensor products of real symmetric PSD x Hermitian PSD;
//   gram:      blocks T S_i S_j T from a commuting family and PSD T;
//   projected: Dykstra alternation between the PSD cone and the
//              Hermitian-block subspace.
BlockMatrix gen_hermitian_block_psd(const GeneratorConfig& cfg);

CommutingFamily gen_commuting_family(const GeneratorConfig& cfg);

SeparableState gen_separable_real_factor(const GeneratorConfig& cfg);

// lambda_max(H) - lambda_max(A+B) for a two-block instance; positive values
// witness a failure of the norm comparison outside the Hermitian hypothesis.
double norm_gap_margin(const BlockMatrix& h);

struct CounterexampleSearchResult {
    std::optional<BlockMatrix> instance;  // only when best_margin > 0
    double best_margin = -std::numeric_limits<double>::infinity();
    long evaluated = 0;
};

// Randomized hill climb over 6x6 PSD matrices with a normal off-diagonal
// block. hermitian_restricted confines the search to Hermitian X, where the
// margin provably stays nonpositive.
CounterexampleSearchResult search_counterexample_normal_blocks(
    const GeneratorConfig& cfg, bool hermitian_restricted = false);

}  // namespace hermblock
