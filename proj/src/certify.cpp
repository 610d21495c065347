#include "hermblock/certify.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hermblock {

namespace {

std::string item_label(const char* prefix, Index value) {
    std::ostringstream s;
    s << prefix << "=" << value;
    return s.str();
}

// Scale for the scale-free pass/fail rule: tolerances are absolute once the
// input's operator norm is <= 1, so larger inputs widen the band while the
// reported margins stay in the input's units.
double norm_scale(double operator_norm) {
    return std::max(1.0, operator_norm);
}

void check_hypothesis(bool ok, bool force, const char* what, std::string& context) {
    if (ok) {
        return;
    }
    if (!force) {
        throw HypothesisViolation(std::string(what) +
                                  " (pass force=true to evaluate anyway)");
    }
    context += "; hypothesis violated";
}

std::string block_context(const BlockMatrix& h) {
    std::ostringstream s;
    s << "beta=" << h.beta() << " n=" << h.n()
      << " hermitian_blocks=" << (h.hermitian_blocks() ? "true" : "false");
    return s.str();
}

}  // namespace

double CommutingFamily::max_commutator_norm() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            const ComplexMatrix& a = members[i].mat();
            const ComplexMatrix& b = members[j].mat();
            worst = std::max(worst, (a * b - b * a).norm());
        }
    }
    return worst;
}

bool CommutingFamily::commutes_within_tolerance() const {
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            const ComplexMatrix& a = members[i].mat();
            const ComplexMatrix& b = members[j].mat();
            const double bound =
                tol_eig * (1.0 + a.norm() * b.norm());
            if ((a * b - b * a).norm() > bound) {
                return false;
            }
        }
    }
    return true;
}

std::string SeparableState::validate() const {
    if (terms.empty()) {
        return "separable state needs at least one term";
    }
    const Index nh = dim_h();
    const Index nf = dim_f();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const auto& term = terms[j];
        const std::string where = "term " + std::to_string(j);
        if (term.a.rows() != nh || term.a.cols() != nh) {
            return where + ": first factor must be " + std::to_string(nh) + "x" +
                   std::to_string(nh);
        }
        if (term.b.rows() != nf || term.b.cols() != nf) {
            return where + ": second factor must be " + std::to_string(nf) + "x" +
                   std::to_string(nf);
        }
        const double scale_a = tol_eig * (1.0 + term.a.norm());
        if ((term.a - term.a.transpose()).norm() > scale_a) {
            return where + ": first factor must be real symmetric";
        }
        double lambda_min = 0.0;
        if (!is_psd(HermitianMatrix(term.a.cast<Complex>()), &lambda_min)) {
            return where + ": first factor not PSD (min eigenvalue " +
                   std::to_string(lambda_min) + ")";
        }
        if (!is_psd(HermitianMatrix(term.b), &lambda_min)) {
            return where + ": second factor not PSD (min eigenvalue " +
                   std::to_string(lambda_min) + ")";
        }
    }
    return {};
}

BlockMatrix SeparableState::assemble() const {
    const Index nh = dim_h();
    const Index nf = dim_f();
    ComplexMatrix z = ComplexMatrix::Zero(nh * nf, nh * nf);
    for (const auto& term : terms) {
        z += Eigen::kroneckerProduct(term.a.cast<Complex>(), term.b);
    }
    return BlockMatrix::from_parts(HermitianMatrix(z), nh, nf,
                                   /*hermitian_blocks=*/true);
}

HermitianMatrix SeparableState::reduced() const {
    const Index nf = dim_f();
    ComplexMatrix out = ComplexMatrix::Zero(nf, nf);
    for (const auto& term : terms) {
        out += term.a.trace() * term.b;
    }
    return HermitianMatrix(out);
}

CertificateReport check_hiroshima(const BlockMatrix& h, bool force, double tol) {
    CertificateReport report;
    report.name = "hiroshima";
    report.context = block_context(h);
    check_hypothesis(h.hermitian_blocks(), force,
                     "check_hiroshima: blocks are not Hermitian", report.context);

    const Spectrum spec_h = hermitian_spectrum(h.carrier());
    const Spectrum spec_delta = hermitian_spectrum(partial_trace(h));
    report.tolerance = tol * norm_scale(spec_h.at(1));
    for (Index j = 1; j <= h.dim(); ++j) {
        const double lhs = spec_h.prefix_sum(j);
        const double rhs = spec_delta.prefix_sum(j);
        report.items.push_back({item_label("k", j), lhs, rhs, rhs - lhs});
    }
    report.finalize();
    return report;
}

CertificateReport check_eigen_step(const BlockMatrix& h, bool force, double tol) {
    CertificateReport report;
    report.name = "eigen-step";
    report.context = block_context(h);
    check_hypothesis(h.hermitian_blocks(), force,
                     "check_eigen_step: blocks are not Hermitian", report.context);

    const Index beta = smallest_dyadic_at_least(h.beta());
    const Spectrum spec_h = hermitian_spectrum(h.carrier());
    const Spectrum spec_delta = hermitian_spectrum(partial_trace(h));
    report.tolerance = tol * norm_scale(spec_h.at(1));
    report.context += "; dyadic beta=" + std::to_string(beta);
    for (Index k = 0; k < h.n(); ++k) {
        const double lhs = spec_h.at(1 + beta * k);
        const double rhs = spec_delta.at(1 + k);
        report.items.push_back({item_label("k", k), lhs, rhs, rhs - lhs});
    }
    report.finalize();
    return report;
}

CertificateReport check_eigen_averaged(const BlockMatrix& h, Index k,
                                       const std::vector<Index>& splits, bool force,
                                       double tol) {
    const Index beta = smallest_dyadic_at_least(h.beta());
    if (static_cast<Index>(splits.size()) != beta) {
        throw InvalidInput("check_eigen_averaged: need exactly " +
                           std::to_string(beta) + " split entries (dyadic beta)");
    }
    Index total = 0;
    for (Index v : splits) {
        if (v < 0) {
            throw InvalidInput("check_eigen_averaged: split entries must be >= 0");
        }
        total += v;
    }
    if (total != beta * k) {
        throw InvalidInput("check_eigen_averaged: splits must sum to beta*k = " +
                           std::to_string(beta * k));
    }

    CertificateReport report;
    report.name = "eigen-averaged";
    report.context = block_context(h) + "; dyadic beta=" + std::to_string(beta);
    check_hypothesis(h.hermitian_blocks(), force,
                     "check_eigen_averaged: blocks are not Hermitian", report.context);

    const Spectrum spec_h = hermitian_spectrum(h.carrier());
    const Spectrum spec_delta = hermitian_spectrum(partial_trace(h));
    report.tolerance = tol * norm_scale(spec_h.at(1));

    const double lhs = spec_h.at(1 + beta * k);
    double rhs = 0.0;
    std::ostringstream label;
    label << "k=" << k << " splits=";
    for (Index i = 0; i < beta; ++i) {
        rhs += spec_delta.at(1 + splits[static_cast<std::size_t>(i)]);
        label << (i == 0 ? "" : ",") << splits[static_cast<std::size_t>(i)];
    }
    rhs /= static_cast<double>(beta);
    report.items.push_back({label.str(), lhs, rhs, rhs - lhs});
    report.finalize();
    return report;
}

CertificateReport check_rearrangement(const CommutingFamily& family,
                                      const HermitianMatrix& t, RearrangementMode mode,
                                      bool force, double tol) {
    if (family.members.empty()) {
        throw InvalidInput("check_rearrangement: family is empty");
    }
    const Index n = family.dim();
    for (const auto& s : family.members) {
        if (s.dim() != n) {
            throw InvalidInput("check_rearrangement: members must share one dimension");
        }
    }
    if (t.dim() != n) {
        throw InvalidInput("check_rearrangement: T dimension mismatch");
    }
    double lambda_min = 0.0;
    if (!is_psd(t, &lambda_min)) {
        throw InvalidInput("check_rearrangement: T not PSD (min eigenvalue " +
                           std::to_string(lambda_min) + ")");
    }

    CertificateReport report;
    report.name =
        mode == RearrangementMode::Norms ? "rearrangement-norms" : "rearrangement-steps";
    report.context = "alpha=" + std::to_string(family.members.size()) +
                     " n=" + std::to_string(n);
    check_hypothesis(family.commutes_within_tolerance(), force,
                     "check_rearrangement: family does not commute within tolerance",
                     report.context);

    const ComplexMatrix t2 = t.mat() * t.mat();
    ComplexMatrix lhs_sum = ComplexMatrix::Zero(n, n);
    ComplexMatrix rhs_sum = ComplexMatrix::Zero(n, n);
    for (const auto& s : family.members) {
        lhs_sum += s.mat() * t2 * s.mat();
        rhs_sum += t.mat() * s.mat() * s.mat() * t.mat();
    }
    const Spectrum spec_lhs = hermitian_spectrum(HermitianMatrix(lhs_sum));
    const Spectrum spec_rhs = hermitian_spectrum(HermitianMatrix(rhs_sum));
    report.tolerance =
        tol * norm_scale(std::max(spec_lhs.at(1), spec_rhs.at(1)));

    if (mode == RearrangementMode::Norms) {
        for (Index j = 1; j <= n; ++j) {
            const double lhs = spec_lhs.prefix_sum(j);
            const double rhs = spec_rhs.prefix_sum(j);
            report.items.push_back({item_label("k", j), lhs, rhs, rhs - lhs});
        }
    } else {
        const Index beta =
            smallest_dyadic_at_least(static_cast<Index>(family.members.size()));
        report.context += "; dyadic beta=" + std::to_string(beta);
        for (Index k = 0; k < n; ++k) {
            const double lhs = spec_lhs.at(1 + beta * k);
            const double rhs = spec_rhs.at(1 + k);
            report.items.push_back({item_label("k", k), lhs, rhs, rhs - lhs});
        }
    }
    report.finalize();
    return report;
}

CertificateReport check_trace_concave(const BlockMatrix& h,
                                      const ConcaveFunctionSpec& f, bool force,
                                      double tol) {
    CertificateReport report;
    report.name = "trace-concave";
    report.context = block_context(h) + "; f=" + f.name();

    const double trace_h = trace_function(h.carrier(), f);
    double upper = 0.0;
    for (Index s = 0; s < h.beta(); ++s) {
        upper += trace_function(HermitianMatrix(h.diagonal_block(s)), f);
    }
    report.tolerance = tol * norm_scale(psd_operator_norm(h.carrier()));

    // The upper bound needs no Hermitian-block hypothesis; the partial-trace
    // lower bound does.
    if (h.hermitian_blocks() || force) {
        if (!h.hermitian_blocks()) {
            report.context += "; hypothesis violated (lower bound not guaranteed)";
        }
        const double lower = trace_function(partial_trace(h), f);
        report.items.push_back({"lower", lower, trace_h, trace_h - lower});
    } else {
        report.context += "; hypothesis violated: lower bound skipped";
    }
    report.items.push_back({"upper", trace_h, upper, upper - trace_h});
    report.finalize();
    return report;
}

CertificateReport check_determinant(const HermitianMatrix& a, const HermitianMatrix& b,
                                    const HermitianMatrix& x, bool force, double tol) {
    const Index n = a.dim();
    if (b.dim() != n || x.dim() != n) {
        throw InvalidInput("check_determinant: A, B, X must share one dimension");
    }
    ComplexMatrix hm(2 * n, 2 * n);
    hm.topLeftCorner(n, n) = a.mat();
    hm.topRightCorner(n, n) = x.mat();
    hm.bottomLeftCorner(n, n) = x.mat();
    hm.bottomRightCorner(n, n) = b.mat();
    const HermitianMatrix h(hm);

    CertificateReport report;
    report.name = "determinant";
    report.context = "n=" + std::to_string(n);
    double lambda_min = 0.0;
    check_hypothesis(is_psd(h, &lambda_min), force,
                     "check_determinant: [[A,X],[X,B]] is not PSD", report.context);

    // Sum log(1+lambda) beats forming determinants for conditioning.
    const ConcaveFunctionSpec log1p = ConcaveFunctionSpec::log1p_fn();
    const double logdet_h = trace_function(h, log1p);
    const double logdet_sum = trace_function(HermitianMatrix(a.mat() + b.mat()), log1p);
    const double logdet_a = trace_function(a, log1p);
    const double logdet_b = trace_function(b, log1p);

    report.tolerance = tol * norm_scale(psd_operator_norm(h));
    report.items.push_back({"lower", logdet_sum, logdet_h, logdet_h - logdet_sum});
    report.items.push_back(
        {"upper", logdet_h, logdet_a + logdet_b, logdet_a + logdet_b - logdet_h});
    report.finalize();
    return report;
}

CertificateReport check_nielsen_kempe(const SeparableState& z, bool force, double tol) {
    CertificateReport report;
    report.name = "nielsen-kempe";
    const std::string issue = z.validate();
    report.context = "n_h=" + std::to_string(z.dim_h()) +
                     " n_f=" + std::to_string(z.dim_f()) +
                     " terms=" + std::to_string(z.terms.size());
    check_hypothesis(issue.empty(), force,
                     ("check_nielsen_kempe: " + (issue.empty() ? "" : issue)).c_str(),
                     report.context);

    const BlockMatrix assembled = z.assemble();
    const HermitianMatrix traced = z.reduced();
    const Spectrum spec_z = hermitian_spectrum(assembled.carrier());
    const Spectrum spec_tr = hermitian_spectrum(traced);
    report.tolerance = tol * norm_scale(spec_z.at(1));

    for (Index j = 1; j <= assembled.dim(); ++j) {
        const double lhs = spec_z.prefix_sum(j);
        const double rhs = spec_tr.prefix_sum(j);
        report.items.push_back({item_label("kyfan k", j), lhs, rhs, rhs - lhs});
    }

    const Index beta = smallest_dyadic_at_least(z.dim_h());
    report.context += "; dyadic beta=" + std::to_string(beta);
    for (Index k = 0; k < z.dim_f(); ++k) {
        const double lhs = spec_z.at(1 + beta * k);
        report.items.push_back(
            {item_label("step k", k), lhs, spec_tr.at(1 + k), spec_tr.at(1 + k) - lhs});

        // Averaged variants: the balanced split reproduces the step bound;
        // the one-sided split concentrates the whole budget on one index.
        double balanced = spec_tr.at(1 + k);
        double lopsided =
            (spec_tr.at(1 + beta * k) + static_cast<double>(beta - 1) * spec_tr.at(1)) /
            static_cast<double>(beta);
        report.items.push_back(
            {item_label("avg-balanced k", k), lhs, balanced, balanced - lhs});
        report.items.push_back(
            {item_label("avg-lopsided k", k), lhs, lopsided, lopsided - lhs});
    }
    report.finalize();
    return report;
}

CertificateReport check_block_norm_bound(const BlockMatrix& h, double p, double tol) {
    if (h.beta() != 2) {
        throw InvalidInput("check_block_norm_bound: requires beta = 2");
    }
    const ComplexMatrix a = h.block(0, 0);
    const ComplexMatrix b = h.block(1, 1);
    const double lhs = schatten_norm(h.mat(), p);
    const double rhs = schatten_norm(a, p) + schatten_norm(b, p);

    CertificateReport report;
    report.name = "norm-bound";
    report.context = block_context(h);
    report.tolerance = tol * norm_scale(schatten_norm(h.mat(), schatten_inf));
    std::ostringstream label;
    label << "p=" << p;
    report.items.push_back({label.str(), lhs, rhs, rhs - lhs});
    report.finalize();
    return report;
}

}  // namespace hermblock
