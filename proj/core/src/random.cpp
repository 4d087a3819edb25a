#include "robtherm/random.hpp"

#include <cmath>

namespace robtherm {

ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    return g;
}

HermitianOperator random_hermitian(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    return HermitianOperator(ComplexMatrix(0.5 * (g + g.adjoint())));
}

PureState random_pure_state(Eigen::Index dim, Rng& rng) {
    return PureState::normalized(random_ginibre(dim, 1, rng).col(0));
}

DensityMatrix random_density_matrix(Eigen::Index dim, Rng& rng, Eigen::Index rank) {
    const ComplexMatrix g = random_ginibre(dim, rank > 0 ? rank : dim, rng);
    return make_density_unchecked(g * g.adjoint());
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases of R's diagonal so Q is Haar distributed.
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

std::vector<ComplexMatrix> random_kraus(Eigen::Index dim, int n_kraus, Rng& rng) {
    if (n_kraus < 1) throw ValidationError("random_kraus: need at least one Kraus operator");
    const Eigen::Index big = dim * n_kraus;
    const ComplexMatrix g = random_ginibre(big, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(big, dim);
    std::vector<ComplexMatrix> kraus;
    for (int i = 0; i < n_kraus; ++i) kraus.push_back(v.block(i * dim, 0, dim, dim));
    return kraus;
}

RealVector random_simplex_point(Eigen::Index size, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    RealVector p(size);
    for (Eigen::Index i = 0; i < size; ++i) p(i) = expo(rng);
    return p / p.sum();
}

}  // namespace robtherm
