#include "hermblock/generate.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hermblock {

RealMatrix random_real_symmetric_psd(Rng& rng, Index dim) {
    RealMatrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            g(i, j) = rng.normal();
        }
    }
    return RealMatrix((g * g.transpose()) / static_cast<double>(dim));
}

ComplexMatrix random_hermitian(Rng& rng, Index dim) {
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            m(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return 0.5 * (m + m.adjoint().eval());
}

ComplexMatrix random_hermitian_psd(Rng& rng, Index dim) {
    ComplexMatrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    return (g * g.adjoint()) / static_cast<double>(2 * dim);
}

ComplexMatrix random_unitary(Rng& rng, Index dim) {
    ComplexMatrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    // Fix the column phases so the factorization is canonical.
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(j) *= d / mag;
        }
    }
    return q;
}

namespace {

BlockMatrix generate_separable(const GeneratorConfig& cfg) {
    if (cfg.terms < 1) {
        throw InvalidInput("gen_hermitian_block_psd: separable needs terms >= 1");
    }
    Rng rng = Rng::stream(cfg.seed, "gen.separable");
    ComplexMatrix h = ComplexMatrix::Zero(cfg.beta * cfg.n, cfg.beta * cfg.n);
    for (Index j = 0; j < cfg.terms; ++j) {
        const RealMatrix a = random_real_symmetric_psd(rng, cfg.beta);
        const ComplexMatrix b = random_hermitian_psd(rng, cfg.n);
        h += Eigen::kroneckerProduct(a.cast<Complex>(), b);
    }
    return BlockMatrix::partition(HermitianMatrix(h), cfg.beta, cfg.n);
}

BlockMatrix generate_gram(const GeneratorConfig& cfg) {
    Rng rng = Rng::stream(cfg.seed, "gen.gram");
    const ComplexMatrix basis = random_unitary(rng, cfg.n);
    std::vector<ComplexMatrix> members;
    members.reserve(static_cast<std::size_t>(cfg.beta));
    for (Index i = 0; i < cfg.beta; ++i) {
        RealVector d(cfg.n);
        for (Index j = 0; j < cfg.n; ++j) {
            d(j) = rng.uniform(-1.0, 1.0);
        }
        members.push_back(basis * d.asDiagonal() * basis.adjoint());
    }
    const ComplexMatrix t = random_hermitian_psd(rng, cfg.n);

    ComplexMatrix h(cfg.beta * cfg.n, cfg.beta * cfg.n);
    for (Index i = 0; i < cfg.beta; ++i) {
        for (Index j = 0; j < cfg.beta; ++j) {
            h.block(i * cfg.n, j * cfg.n, cfg.n, cfg.n) =
                t * members[static_cast<std::size_t>(i)] *
                members[static_cast<std::size_t>(j)] * t;
        }
    }
    return BlockMatrix::partition(HermitianMatrix(h), cfg.beta, cfg.n);
}

// Orthogonal projection onto {H Hermitian : A_{s,t} = A_{t,s} = A_{s,t}*}:
// average the Hermitian parts of the four related blocks.
ComplexMatrix project_block_hermitian(const ComplexMatrix& m, Index beta, Index n) {
    ComplexMatrix out(m.rows(), m.cols());
    for (Index s = 0; s < beta; ++s) {
        for (Index t = s; t < beta; ++t) {
            const ComplexMatrix st = m.block(s * n, t * n, n, n);
            const ComplexMatrix ts = m.block(t * n, s * n, n, n);
            const ComplexMatrix avg =
                0.25 * (st + st.adjoint() + ts + ts.adjoint());
            out.block(s * n, t * n, n, n) = avg;
            out.block(t * n, s * n, n, n) = avg;
        }
    }
    return out;
}

ComplexMatrix project_psd_cone(const ComplexMatrix& m) {
    EigResult eig = hermitian_eig(HermitianMatrix(m));
    RealVector clamped(eig.spectrum.dim());
    for (Index i = 0; i < eig.spectrum.dim(); ++i) {
        clamped(i) = std::max(0.0, eig.spectrum.values[static_cast<std::size_t>(i)]);
    }
    return eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
}

BlockMatrix generate_projected(const GeneratorConfig& cfg) {
    Rng rng = Rng::stream(cfg.seed, "gen.projected");
    const Index dim = cfg.beta * cfg.n;
    ComplexMatrix x = random_hermitian_psd(rng, dim);

    ComplexMatrix correction_cone = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix correction_sub = ComplexMatrix::Zero(dim, dim);
    const double target = 1e-10;
    double res_cone = 0.0;
    double res_sub = 0.0;
    bool converged = false;
    for (Index it = 0; it < cfg.iteration_cap; ++it) {
        const ComplexMatrix y = project_psd_cone(x + correction_cone);
        correction_cone = x + correction_cone - y;
        x = project_block_hermitian(y + correction_sub, cfg.beta, cfg.n);
        correction_sub = y + correction_sub - x;

        res_cone = (x - project_psd_cone(x)).norm();
        res_sub = (x - project_block_hermitian(x, cfg.beta, cfg.n)).norm();
        if (res_cone <= target && res_sub <= target) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "gen_hermitian_block_psd: Dykstra projection did not converge in "
            << cfg.iteration_cap << " sweeps (cone residual " << res_cone
            << ", subspace residual " << res_sub << ")";
        throw NumericalFailure(msg.str());
    }
    // Snap the tiny remaining cone violation so the partition validates.
    x = project_block_hermitian(project_psd_cone(x), cfg.beta, cfg.n);
    return BlockMatrix::partition(HermitianMatrix(x), cfg.beta, cfg.n);
}

}  // namespace

BlockMatrix gen_hermitian_block_psd(const GeneratorConfig& cfg) {
    if (cfg.beta < 1 || cfg.n < 1) {
        throw InvalidInput("gen_hermitian_block_psd: sizes must be positive");
    }
    if (cfg.method == "separable") {
        return generate_separable(cfg);
    }
    if (cfg.method == "gram") {
        return generate_gram(cfg);
    }
    if (cfg.method == "projected") {
        return generate_projected(cfg);
    }
    throw InvalidInput("gen_hermitian_block_psd: method must be separable, gram, or "
                       "projected (got '" + cfg.method + "')");
}

CommutingFamily gen_commuting_family(const GeneratorConfig& cfg) {
    if (cfg.beta < 1 || cfg.n < 1) {
        throw InvalidInput("gen_commuting_family: sizes must be positive");
    }
    Rng rng = Rng::stream(cfg.seed, "gen.commuting");
    const ComplexMatrix basis = random_unitary(rng, cfg.n);
    CommutingFamily family;
    family.witness_basis = basis;
    for (Index i = 0; i < cfg.beta; ++i) {
        RealVector d(cfg.n);
        for (Index j = 0; j < cfg.n; ++j) {
            d(j) = rng.normal();
        }
        family.members.emplace_back(
            ComplexMatrix(basis * d.asDiagonal() * basis.adjoint()));
    }
    return family;
}

SeparableState gen_separable_real_factor(const GeneratorConfig& cfg) {
    if (cfg.terms < 1 || cfg.n_h < 1 || cfg.n_f < 1) {
        throw InvalidInput("gen_separable_real_factor: sizes must be positive");
    }
    Rng rng = Rng::stream(cfg.seed, "gen.state");
    SeparableState state;
    state.normalized = cfg.normalized;
    for (Index j = 0; j < cfg.terms; ++j) {
        SeparableState::Term term;
        term.a = random_real_symmetric_psd(rng, cfg.n_h);
        term.b = random_hermitian_psd(rng, cfg.n_f);
        state.terms.push_back(std::move(term));
    }
    if (cfg.normalized) {
        double trace = 0.0;
        for (const auto& term : state.terms) {
            trace += term.a.trace() * term.b.real().trace();
        }
        if (trace <= 0.0) {
            throw NumericalFailure("gen_separable_real_factor: nonpositive trace");
        }
        for (auto& term : state.terms) {
            term.b /= trace;
        }
    }
    return state;
}

double norm_gap_margin(const BlockMatrix& h) {
    if (h.beta() != 2) {
        throw InvalidInput("norm_gap_margin: requires beta = 2");
    }
    const double lhs = psd_operator_norm(h.carrier());
    const double rhs =
        psd_operator_norm(HermitianMatrix(h.block(0, 0) + h.block(1, 1)));
    return lhs - rhs;
}

namespace {

struct SearchCandidate {
    ComplexMatrix a;  // 3x3 Hermitian PSD
    ComplexMatrix b;
    ComplexMatrix basis;   // unitary diagonalizing X
    Eigen::VectorXcd d;    // eigenvalues of X (real when restricted)
};

// Margin after the PSD-restoring shift: H0 may dip below zero, so raise the
// diagonal blocks together until it does not. The shift enters both sides,
// which keeps the comparison honest.
double evaluate_candidate(const SearchCandidate& cand, ComplexMatrix* instance_out) {
    const Index n = cand.a.rows();
    const ComplexMatrix x =
        cand.basis * cand.d.asDiagonal() * cand.basis.adjoint();
    ComplexMatrix h0(2 * n, 2 * n);
    h0.topLeftCorner(n, n) = cand.a;
    h0.topRightCorner(n, n) = x;
    h0.bottomLeftCorner(n, n) = x.adjoint();
    h0.bottomRightCorner(n, n) = cand.b;

    const Spectrum spec = hermitian_spectrum(HermitianMatrix(h0));
    const double shift = std::max(0.0, -spec.values.back());
    const double top = spec.at(1) + shift;

    const HermitianMatrix sum_ab(cand.a + cand.b +
                                 2.0 * shift * ComplexMatrix::Identity(n, n));
    const double margin = top - psd_operator_norm(sum_ab);
    if (instance_out != nullptr) {
        *instance_out = h0 + shift * ComplexMatrix::Identity(2 * n, 2 * n);
    }
    return margin;
}

SearchCandidate fresh_candidate(Rng& rng, Index n, bool hermitian_restricted) {
    SearchCandidate cand;
    cand.a = random_hermitian_psd(rng, n);
    cand.b = random_hermitian_psd(rng, n);
    cand.basis = random_unitary(rng, n);
    cand.d.resize(n);
    for (Index i = 0; i < n; ++i) {
        if (hermitian_restricted) {
            cand.d(i) = Complex(rng.normal(), 0.0);
        } else {
            cand.d(i) = Complex(rng.normal(), rng.normal());
        }
    }
    return cand;
}

ComplexMatrix nudge_psd(const ComplexMatrix& m, Rng& rng, double step) {
    const Index n = m.rows();
    ComplexMatrix g(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    const ComplexMatrix jitter = 0.5 * (g + g.adjoint().eval());
    return project_psd_cone(m + step * jitter);
}

SearchCandidate perturb_candidate(const SearchCandidate& base, Rng& rng, double step,
                                  bool hermitian_restricted) {
    SearchCandidate cand = base;
    const Index n = base.a.rows();
    // Rotate the diagonalizing basis a little and jitter the eigenvalues;
    // the diagonal blocks move inside the cone rather than being resampled.
    ComplexMatrix g(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            g(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(
        ComplexMatrix(cand.basis + step * g));
    cand.basis = qr.householderQ();
    for (Index i = 0; i < n; ++i) {
        if (hermitian_restricted) {
            cand.d(i) += Complex(step * rng.normal(), 0.0);
        } else {
            cand.d(i) += step * Complex(rng.normal(), rng.normal());
        }
    }
    cand.a = nudge_psd(cand.a, rng, step);
    cand.b = nudge_psd(cand.b, rng, step);
    return cand;
}

}  // namespace

CounterexampleSearchResult search_counterexample_normal_blocks(
    const GeneratorConfig& cfg, bool hermitian_restricted) {
    const Index n = 3;
    Rng rng = Rng::stream(cfg.seed, hermitian_restricted ? "search.hermitian"
                                                         : "search.normal");
    CounterexampleSearchResult result;
    if (cfg.budget <= 0) {
        return result;
    }

    SearchCandidate best;
    ComplexMatrix best_instance;
    bool have_best = false;
    long used = 0;
    double step = 0.3;
    while (used < cfg.budget) {
        SearchCandidate cand =
            (!have_best || rng.uniform() < 0.05)
                ? fresh_candidate(rng, n, hermitian_restricted)
                : perturb_candidate(best, rng, step, hermitian_restricted);
        ComplexMatrix instance;
        const double margin = evaluate_candidate(cand, &instance);
        ++used;
        if (!have_best || margin > result.best_margin) {
            result.best_margin = margin;
            best = cand;
            best_instance = instance;
            have_best = true;
            step = std::min(0.5, step * 1.3);
        } else {
            step = std::max(1e-5, step * 0.999);
        }
    }
    result.evaluated = used;
    if (have_best && result.best_margin > 1e-10) {
        result.instance =
            BlockMatrix::partition(HermitianMatrix(best_instance), 2, n);
    }
    return result;
}

}  // namespace hermblock
