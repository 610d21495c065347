#pragma once

#include "hermblock/report.hpp"
#include "hermblock/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hermblock {

struct EigResult {
    Spectrum spectrum;      // descending
    ComplexMatrix vectors;  // columns follow the spectrum order, unitary
};

// A = U diag(lambda) U*, eigenvalues descending.
EigResult hermitian_eig(const HermitianMatrix& a);

// Spectrum only (descending), same solver.
Spectrum hermitian_spectrum(const HermitianMatrix& a);

// Largest eigenvalue of a PSD matrix; equals its operator norm.
double psd_operator_norm(const HermitianMatrix& a);

// PSD square root; eigenvalues in [-tol_eig*(1+||A||_F), 0) are clamped to 0,
// more negative ones are an error.
HermitianMatrix psd_sqrt(const HermitianMatrix& a);

bool is_psd(const HermitianMatrix& a, double* min_eigenvalue = nullptr);

struct PolarResult {
    Isometry isometry;          // V, rows x cols of the input
    HermitianMatrix psd_factor; // P = (C*C)^{1/2}
};

// C = V P with V an exact isometry; rank-deficient inputs get their null
// directions completed from the orthogonal complement of range(C).
PolarResult polar_isometry_factor(const ComplexMatrix& c);

// Descending singular values.
RealVector singular_values(const ComplexMatrix& a);

// (sum sigma_i^p)^{1/p}; p = inf (use schatten_inf) returns sigma_max.
double schatten_norm(const ComplexMatrix& a, double p);
inline constexpr double schatten_inf = std::numeric_limits<double>::infinity();

// Sum of the k largest singular values, 1 <= k <= min(rows, cols).
double ky_fan_norm(const ComplexMatrix& a, Index k);

// Closed catalog of concave functions on R+ with f(0) >= 0.
class ConcaveFunctionSpec {
public:
    enum class Kind { Sqrt, Log1p, Power, Rational, Clamp, Affine };

    static ConcaveFunctionSpec sqrt_fn();
    static ConcaveFunctionSpec log1p_fn();
    static ConcaveFunctionSpec power(double q);        // t^q, 0 < q <= 1
    static ConcaveFunctionSpec rational();             // t / (1 + t)
    static ConcaveFunctionSpec clamp(double c);        // min(t, c), c > 0
    static ConcaveFunctionSpec affine(double a, double b);  // a + b t, a >= 0

    // Names: sqrt, log1p, power, rational, clamp, affine.
    static ConcaveFunctionSpec parse(const std::string& name,
                                     const std::vector<double>& params);

    double operator()(double t) const;
    double value_at_zero() const { return (*this)(0.0); }
    const std::string& name() const { return name_; }
    const std::vector<double>& parameters() const { return params_; }

    static const std::vector<std::string>& catalog_names();

private:
    ConcaveFunctionSpec(Kind kind, std::string name, std::vector<double> params)
        : kind_(kind), name_(std::move(name)), params_(std::move(params)) {}

    Kind kind_;
    std::string name_;
    std::vector<double> params_;
};

// U f(diag lambda) U* for a PSD input (negative roundoff clamped to 0).
HermitianMatrix matrix_function(const HermitianMatrix& a,
                                const ConcaveFunctionSpec& f);

// sum of f over the (clamped) eigenvalues; equals Tr f(A).
double trace_function(const HermitianMatrix& a, const ConcaveFunctionSpec& f);

// Weyl: lambda_{r+s+1}(Y+Z) <= lambda_{r+1}(Y) + lambda_{s+1}(Z),
// 0-based r, s; indices past dim use the PSD zero convention.
CertificateReport weyl_bound(const HermitianMatrix& y, const HermitianMatrix& z,
                             Index r, Index s, double tol = tol_cert);

}  // namespace hermblock
