#include "opsplit/levy/psd.hpp"

#include <Eigen/Eigenvalues>

#include "opsplit/common/errors.hpp"

namespace opsplit::levy {

SmallMatrix sqrt_psd(const SmallMatrix& sigma)
{
    constexpr double kTol = 1e-10;
    if (sigma.rows() != sigma.cols())
        throw DomainError("sqrt_psd: matrix is not square");
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kTol * std::max(1.0, sigma.cwiseAbs().maxCoeff()))
        throw DomainError("sqrt_psd: matrix is not symmetric");
    const Eigen::MatrixXd s = sigma;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    Eigen::VectorXd ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -kTol)
            throw DomainError("sqrt_psd: negative eigenvalue " + std::to_string(ev[i]));
        ev[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
    }
    return SmallMatrix(solver.eigenvectors() * ev.asDiagonal());
}

} // namespace opsplit::levy
