#include "rabi/linalg.hpp"

#include <cmath>
#include <sstream>

namespace rabi {

double antihermiticity_defect(const Matrix& m) {
    return (m + m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix expm_antihermitian(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("expm_antihermitian: matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double defect = antihermiticity_defect(m);
    if (defect > 1e-10 * scale) {
        std::ostringstream os;
        os << "expm_antihermitian: input not anti-Hermitian, ||m + m^dag||_max = " << defect;
        throw std::invalid_argument(os.str());
    }
    // i*m is Hermitian; exp(m) = V exp(-i diag(theta)) V^dag
    Eigen::SelfAdjointEigenSolver<Matrix> es(Complex(0.0, 1.0) * m);
    const Eigen::VectorXd& theta = es.eigenvalues();
    Vector phases(theta.size());
    for (int k = 0; k < theta.size(); ++k)
        phases[k] = std::exp(Complex(0.0, -theta[k]));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace rabi
