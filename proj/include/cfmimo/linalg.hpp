#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Cholesky factorization of a Hermitian positive definite matrix. On failure a
// diagonal jitter of 1e-12 * trace / dim is added once before giving up.
class HermitianSolver {
public:
    explicit HermitianSolver(const CMat &A, bool allow_jitter = true);

    bool ok() const { return ok_; }
    bool jittered() const { return jittered_; }

    CVec solve(const CVec &b) const { return llt_.solve(b); }
    CMat solve(const CMat &B) const { return llt_.solve(B); }

    // Ratio of extreme diagonal entries of the Cholesky factor, squared. A cheap
    // lower bound on the 2-norm condition number.
    double condition_estimate() const;

private:
    Eigen::LLT<CMat> llt_;
    bool ok_ = false;
    bool jittered_ = false;
};

inline void make_hermitian(CMat &A)
{
    A = (0.5 * (A + A.adjoint())).eval();
}

// Hermitian square root with negative eigenvalues clipped to zero.
CMat hermitian_sqrt(const CMat &A);

double min_eigenvalue(const CMat &A);

} // namespace cfmimo
