#include "hermblock/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hermblock {

EigResult hermitian_eig(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.mat());
    if (solver.info() != Eigen::Success) {
        const double off = (a.mat() - a.mat().diagonal().asDiagonal().toDenseMatrix()).norm();
        std::ostringstream msg;
        msg << "hermitian_eig: solver did not converge, dim " << a.dim()
            << ", off-diagonal residual " << off;
        throw NumericalFailure(msg.str());
    }
    const Index d = a.dim();
    EigResult out;
    out.spectrum.values.resize(static_cast<std::size_t>(d));
    out.vectors.resize(d, d);
    // Eigen returns ascending order; flip to descending. The reversal is a
    // stable relabeling, so ties keep the solver's pairing.
    for (Index i = 0; i < d; ++i) {
        out.spectrum.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(d - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

Spectrum hermitian_spectrum(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.mat(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("hermitian_spectrum: solver did not converge");
    }
    const Index d = a.dim();
    Spectrum s;
    s.values.resize(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        s.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(d - 1 - i);
    }
    return s;
}

double psd_operator_norm(const HermitianMatrix& a) {
    if (a.dim() == 0) {
        return 0.0;
    }
    return std::max(0.0, hermitian_spectrum(a).at(1));
}

bool is_psd(const HermitianMatrix& a, double* min_eigenvalue) {
    const Spectrum s = hermitian_spectrum(a);
    const double lambda_min = s.dim() == 0 ? 0.0 : s.values.back();
    if (min_eigenvalue != nullptr) {
        *min_eigenvalue = lambda_min;
    }
    return lambda_min >= -tol_eig * (1.0 + frobenius(a.mat()));
}

HermitianMatrix psd_sqrt(const HermitianMatrix& a) {
    EigResult eig = hermitian_eig(a);
    const double floor = -tol_eig * (1.0 + frobenius(a.mat()));
    const Index d = a.dim();
    RealVector roots(d);
    for (Index i = 0; i < d; ++i) {
        double lambda = eig.spectrum.values[static_cast<std::size_t>(i)];
        if (lambda < floor) {
            std::ostringstream msg;
            msg << "psd_sqrt: input not PSD, min eigenvalue " << eig.spectrum.values.back();
            throw InvalidInput(msg.str());
        }
        roots(i) = std::sqrt(std::max(lambda, 0.0));
    }
    ComplexMatrix s = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    return HermitianMatrix(s);
}

PolarResult polar_isometry_factor(const ComplexMatrix& c) {
    if (c.rows() < c.cols()) {
        throw InvalidInput("polar_isometry_factor: requires rows >= cols");
    }
    require_finite(c, "polar_isometry_factor");
    const Index q = c.cols();
    Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // V = U_q W*, P = W Sigma W*. The trailing columns of the full U span the
    // orthogonal complement of range(C), which completes the null directions.
    ComplexMatrix v = svd.matrixU().leftCols(q) * svd.matrixV().adjoint();
    ComplexMatrix p = svd.matrixV() * svd.singularValues().head(q).asDiagonal() *
                      svd.matrixV().adjoint();
    return PolarResult{Isometry(v), HermitianMatrix(p)};
}

RealVector singular_values(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues();
}

double schatten_norm(const ComplexMatrix& a, double p) {
    if (!(p >= 1.0)) {
        throw InvalidInput("schatten_norm: requires p >= 1");
    }
    const RealVector sigma = singular_values(a);
    if (sigma.size() == 0) {
        return 0.0;
    }
    if (std::isinf(p)) {
        return sigma(0);
    }
    if (p == 1.0) {
        return sigma.sum();
    }
    if (p == 2.0) {
        return sigma.norm();
    }
    // Factor out sigma_max for stable powers.
    const double top = sigma(0);
    if (top == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (Index i = 0; i < sigma.size(); ++i) {
        acc += std::pow(sigma(i) / top, p);
    }
    return top * std::pow(acc, 1.0 / p);
}

double ky_fan_norm(const ComplexMatrix& a, Index k) {
    const Index bound = std::min(a.rows(), a.cols());
    if (k < 1 || k > bound) {
        throw InvalidInput("ky_fan_norm: k out of range");
    }
    const RealVector sigma = singular_values(a);
    return sigma.head(k).sum();
}

ConcaveFunctionSpec ConcaveFunctionSpec::sqrt_fn() {
    return ConcaveFunctionSpec(Kind::Sqrt, "sqrt", {});
}

ConcaveFunctionSpec ConcaveFunctionSpec::log1p_fn() {
    return ConcaveFunctionSpec(Kind::Log1p, "log1p", {});
}

ConcaveFunctionSpec ConcaveFunctionSpec::power(double q) {
    if (!(q > 0.0 && q <= 1.0)) {
        throw InvalidInput("concave power: requires 0 < q <= 1");
    }
    return ConcaveFunctionSpec(Kind::Power, "power", {q});
}

ConcaveFunctionSpec ConcaveFunctionSpec::rational() {
    return ConcaveFunctionSpec(Kind::Rational, "rational", {});
}

ConcaveFunctionSpec ConcaveFunctionSpec::clamp(double c) {
    if (!(c > 0.0)) {
        throw InvalidInput("concave clamp: requires c > 0");
    }
    return ConcaveFunctionSpec(Kind::Clamp, "clamp", {c});
}

ConcaveFunctionSpec ConcaveFunctionSpec::affine(double a, double b) {
    if (!(a >= 0.0)) {
        throw InvalidInput("concave affine: requires a >= 0");
    }
    return ConcaveFunctionSpec(Kind::Affine, "affine", {a, b});
}

ConcaveFunctionSpec ConcaveFunctionSpec::parse(const std::string& name,
                                               const std::vector<double>& params) {
    auto want = [&](std::size_t n) {
        if (params.size() != n) {
            throw InvalidInput("concave function '" + name + "' expects " +
                               std::to_string(n) + " parameter(s)");
        }
    };
    if (name == "sqrt") {
        want(0);
        return sqrt_fn();
    }
    if (name == "log1p") {
        want(0);
        return log1p_fn();
    }
    if (name == "power") {
        want(1);
        return power(params[0]);
    }
    if (name == "rational") {
        want(0);
        return rational();
    }
    if (name == "clamp") {
        want(1);
        return clamp(params[0]);
    }
    if (name == "affine") {
        want(2);
        return affine(params[0], params[1]);
    }
    throw InvalidInput("unknown concave function '" + name +
                       "'; catalog: sqrt, log1p, power q, rational, clamp c, affine a b");
}

double ConcaveFunctionSpec::operator()(double t) const {
    switch (kind_) {
        case Kind::Sqrt:
            return std::sqrt(t);
        case Kind::Log1p:
            return std::log1p(t);
        case Kind::Power:
            return std::pow(t, params_[0]);
        case Kind::Rational:
            return t / (1.0 + t);
        case Kind::Clamp:
            return std::min(t, params_[0]);
        case Kind::Affine:
            return params_[0] + params_[1] * t;
    }
    throw NumericalFailure("concave function: unreachable kind");
}

const std::vector<std::string>& ConcaveFunctionSpec::catalog_names() {
    static const std::vector<std::string> names = {"sqrt",     "log1p", "power",
                                                   "rational", "clamp", "affine"};
    return names;
}

namespace {

RealVector clamped_psd_eigenvalues(const HermitianMatrix& a, const Spectrum& s) {
    const double floor = -tol_eig * (1.0 + frobenius(a.mat()));
    // Relative snap: exact rank deficiencies come back as ~1e-16 noise, and
    // functions with unbounded slope at 0 (sqrt, powers) would amplify it.
    const double snap = 1e-12 * std::max(0.0, s.dim() > 0 ? s.at(1) : 0.0);
    RealVector out(s.dim());
    for (Index i = 0; i < s.dim(); ++i) {
        const double lambda = s.values[static_cast<std::size_t>(i)];
        if (lambda < floor) {
            throw InvalidInput("matrix_function: input not PSD, min eigenvalue " +
                               std::to_string(s.values.back()));
        }
        out(i) = lambda <= snap ? 0.0 : lambda;
    }
    return out;
}

}  // namespace

HermitianMatrix matrix_function(const HermitianMatrix& a, const ConcaveFunctionSpec& f) {
    EigResult eig = hermitian_eig(a);
    RealVector lambda = clamped_psd_eigenvalues(a, eig.spectrum);
    RealVector mapped(lambda.size());
    for (Index i = 0; i < lambda.size(); ++i) {
        mapped(i) = f(lambda(i));
    }
    return HermitianMatrix(eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint());
}

double trace_function(const HermitianMatrix& a, const ConcaveFunctionSpec& f) {
    const Spectrum s = hermitian_spectrum(a);
    RealVector lambda = clamped_psd_eigenvalues(a, s);
    double acc = 0.0;
    for (Index i = 0; i < lambda.size(); ++i) {
        acc += f(lambda(i));
    }
    return acc;
}

namespace {

// 1-based lookup with the zero convention, valid for PSD inputs only.
double eigenvalue_with_convention(const HermitianMatrix& a, const Spectrum& s,
                                  Index one_based, const char* what) {
    if (one_based <= s.dim()) {
        return s.at(one_based);
    }
    double lambda_min = s.dim() == 0 ? 0.0 : s.values.back();
    if (lambda_min < -tol_eig * (1.0 + frobenius(a.mat()))) {
        throw InvalidInput(std::string(what) +
                           ": index past dimension requires a PSD matrix");
    }
    return 0.0;
}

}  // namespace

CertificateReport weyl_bound(const HermitianMatrix& y, const HermitianMatrix& z,
                             Index r, Index s, double tol) {
    if (y.dim() != z.dim()) {
        throw InvalidInput("weyl_bound: dimension mismatch");
    }
    if (r < 0 || s < 0) {
        throw InvalidInput("weyl_bound: indices must be nonnegative");
    }
    const Spectrum sy = hermitian_spectrum(y);
    const Spectrum sz = hermitian_spectrum(z);
    const HermitianMatrix sum(y.mat() + z.mat());
    const Spectrum ss = hermitian_spectrum(sum);

    const double lhs = eigenvalue_with_convention(sum, ss, r + s + 1, "weyl_bound");
    const double rhs = eigenvalue_with_convention(y, sy, r + 1, "weyl_bound") +
                       eigenvalue_with_convention(z, sz, s + 1, "weyl_bound");

    CertificateReport report;
    report.name = "weyl";
    const double scale = std::max({1.0, std::abs(sy.at(1)), std::abs(sz.at(1))});
    report.tolerance = tol * scale;
    std::ostringstream label;
    label << "r=" << r << ",s=" << s;
    report.items.push_back({label.str(), lhs, rhs, rhs - lhs});
    report.context = "dim=" + std::to_string(y.dim());
    report.finalize();
    return report;
}

}  // namespace hermblock
