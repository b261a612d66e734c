#include "cfmimo/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace cfmimo {

namespace {

bool factor_ok(const Eigen::LLT<CMat> &llt)
{
    if (llt.info() != Eigen::Success)
        return false;
    const auto d = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double x = d[i].real();
        if (!(x > 0) || !std::isfinite(x))
            return false;
    }
    return true;
}

} // namespace

HermitianSolver::HermitianSolver(const CMat &A, bool allow_jitter)
{
    llt_.compute(A);
    ok_ = factor_ok(llt_);
    if (!ok_ && allow_jitter && A.rows() > 0) {
        const double jitter = 1e-12 * std::abs(A.trace().real()) / static_cast<double>(A.rows());
        CMat B = A;
        B.diagonal().array() += jitter;
        llt_.compute(B);
        ok_ = factor_ok(llt_);
        jittered_ = true;
    }
}

double HermitianSolver::condition_estimate() const
{
    const auto d = llt_.matrixLLT().diagonal().real();
    const double hi = d.maxCoeff();
    const double lo = d.minCoeff();
    if (!(lo > 0))
        return std::numeric_limits<double>::infinity();
    return (hi / lo) * (hi / lo);
}

CMat hermitian_sqrt(const CMat &A)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(A);
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const CMat &A)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace cfmimo
