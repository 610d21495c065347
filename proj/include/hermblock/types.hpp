#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermblock {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Residual tolerance for spectral identities, relative and Frobenius-scaled:
// residual <= tol_eig * (1 + ||A||_F).
inline constexpr double tol_eig = 1e-9;
// Isometry defect tolerance: ||V*V - I_q||_F <= tol_iso * sqrt(q).
inline constexpr double tol_iso = 1e-10;
// Certificate margin tolerance, absolute after scaling the input so its
// operator norm is <= 1.
inline constexpr double tol_cert = 1e-8;

// Input/shape violations (CLI exit 2).
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense-size guard refusals (CLI exit 3).
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A checker precondition failed and the caller did not force the run
// (CLI exit 4).
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal numerical failure (non-convergence, consistency check).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

inline void require_finite(const ComplexMatrix& m, const std::string& what) {
    if (!all_finite(m)) {
        throw InvalidInput(what + ": entries must be finite");
    }
}

inline double frobenius(const ComplexMatrix& m) {
    return m.norm();
}

// Square matrix canonically symmetrized at construction: A <- (A + A*)/2.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m) {
        if (m.rows() != m.cols()) {
            throw InvalidInput("HermitianMatrix: matrix must be square");
        }
        require_finite(m, "HermitianMatrix");
        mat_ = 0.5 * (m + m.adjoint().eval());
    }

    static HermitianMatrix identity(Index dim) {
        return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
    }

    static HermitianMatrix zero(Index dim) {
        return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
    }

    Index dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

private:
    ComplexMatrix mat_;
};

// Descending real eigenvalue list.
struct Spectrum {
    std::vector<double> values;

    Index dim() const { return static_cast<Index>(values.size()); }

    // 1-based access with the PSD convention lambda_j = 0 for j > dim.
    double at(Index one_based) const {
        if (one_based < 1) {
            throw InvalidInput("Spectrum: index must be >= 1");
        }
        if (one_based > dim()) {
            return 0.0;
        }
        return values[static_cast<std::size_t>(one_based - 1)];
    }

    // Sum of the j largest values (zero-extended past dim).
    double prefix_sum(Index j) const {
        double s = 0.0;
        for (Index i = 1; i <= j; ++i) {
            s += at(i);
        }
        return s;
    }
};

// Tall matrix with orthonormal columns, checked at construction.
class Isometry {
public:
    explicit Isometry(const ComplexMatrix& v) : mat_(v) {
        if (v.rows() < v.cols()) {
            throw InvalidInput("Isometry: requires rows >= cols");
        }
        require_finite(v, "Isometry");
        const double q = static_cast<double>(v.cols());
        if (defect() > tol_iso * std::sqrt(std::max(q, 1.0))) {
            throw InvalidInput("Isometry: columns not orthonormal, defect " +
                               std::to_string(defect()));
        }
    }

    Index rows() const { return mat_.rows(); }
    Index cols() const { return mat_.cols(); }
    const ComplexMatrix& mat() const { return mat_; }

    // ||V*V - I||_F
    double defect() const {
        const Index q = mat_.cols();
        return (mat_.adjoint() * mat_ - ComplexMatrix::Identity(q, q)).norm();
    }

private:
    ComplexMatrix mat_;
};

}  // namespace hermblock
