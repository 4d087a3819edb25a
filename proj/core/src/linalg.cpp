#include "robtherm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robtherm {

Beta Beta::finite(double value) {
    if (!(value >= 0.0) || std::isinf(value)) {
        throw ValidationError("beta must be a finite non-negative number (use Beta::infinite())");
    }
    return Beta(value);
}

double max_entry_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, std::abs(m(i, j)));
    return best;
}

void require_hermitian(const ComplexMatrix& m, const std::string& what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionMismatch(what + ": expected a non-empty square matrix");
    }
    if (!m.allFinite()) throw ValidationError(what + ": non-finite entries");
    const double residue = max_entry_norm(m - m.adjoint());
    if (residue > kNumericPolicy.hermiticity) {
        std::ostringstream os;
        os << what << ": not Hermitian (max |A - A^dagger| = " << residue << ")";
        throw ValidationError(os.str());
    }
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
    require_hermitian(m, "HermitianOperator");
    m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& diag) {
    return HermitianOperator(ComplexMatrix(diag.cast<Complex>().asDiagonal()));
}

HermitianOperator HermitianOperator::scaled(double factor) const {
    return HermitianOperator(ComplexMatrix(m_ * factor));
}

PureState::PureState(const ComplexVector& amplitudes) : v_(amplitudes) {
    if (v_.size() == 0) throw ValidationError("PureState: empty amplitude vector");
    if (!v_.allFinite()) throw ValidationError("PureState: non-finite amplitudes");
    const double n2 = v_.squaredNorm();
    if (std::abs(n2 - 1.0) > kNumericPolicy.norm) {
        std::ostringstream os;
        os << "PureState: squared norm " << n2 << " differs from 1";
        throw ValidationError(os.str());
    }
}

PureState PureState::normalized(const ComplexVector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw ValidationError("PureState::normalized: zero vector");
    return PureState(ComplexVector(v / n));
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
    if (dim < 1 || index < 0 || index >= dim) throw ValidationError("PureState::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return PureState(v);
}

DensityMatrix::DensityMatrix(const HermitianOperator& h) : h_(h) {
    const Complex tr = h_.matrix().trace();
    if (std::abs(tr.real() - 1.0) > kNumericPolicy.trace) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr.real() << " differs from 1";
        throw ValidationError(os.str());
    }
    const double lmin = hermitian_eig(h_).values(0);
    if (lmin < -kNumericPolicy.psd) {
        std::ostringstream os;
        os << "DensityMatrix: negative eigenvalue " << lmin;
        throw ValidationError(os.str());
    }
}

DensityMatrix make_density_unchecked(const ComplexMatrix& m) {
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (!(tr > 0.0)) throw ValidationError("make_density_unchecked: non-positive trace");
    h /= tr;
    return DensityMatrix(HermitianOperator(h), DensityMatrix::Trusted{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return make_density_unchecked(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
    return make_density_unchecked(ComplexMatrix::Identity(dim, dim));
}

Eigensystem hermitian_eig(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double log_partition(const RealVector& energies, double beta) {
    const double emin = energies.minCoeff();
    double z = 0.0;
    for (Eigen::Index i = 0; i < energies.size(); ++i) z += std::exp(-beta * (energies(i) - emin));
    return -beta * emin + std::log(z);
}

DensityMatrix gibbs_state(const HermitianOperator& h, Beta beta) {
    const Eigensystem es = hermitian_eig(h);
    const double emin = es.values(0);
    RealVector w(es.values.size());
    if (beta.is_infinite()) {
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w(i) = (es.values(i) - emin <= kNumericPolicy.degeneracy) ? 1.0 : 0.0;
    } else {
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta.value() * (es.values(i) - emin));
    }
    w /= w.sum();
    return make_density_unchecked(es.vectors * w.cast<Complex>().asDiagonal() * es.vectors.adjoint());
}

double entropy_of_spectrum(const RealVector& probabilities) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
        const double p = std::clamp(probabilities(i), 0.0, 1.0);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_of_spectrum(hermitian_eig(rho.op()).values);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return make_density_unchecked(tensor(a.matrix(), b.matrix()));
}

PureState tensor(const PureState& a, const PureState& b) {
    ComplexVector v(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) v.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
    return PureState::normalized(v);
}

PureState tensor_power(const PureState& a, int n) {
    if (n < 1) throw ValidationError("tensor_power: n must be >= 1");
    PureState out = a;
    for (int k = 1; k < n; ++k) out = tensor(out, a);
    return out;
}

HermitianOperator tensor_power(const HermitianOperator& a, int n) {
    if (n < 1) throw ValidationError("tensor_power: n must be >= 1");
    HermitianOperator out = a;
    for (int k = 1; k < n; ++k) out = tensor(out, a);
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem traced, BipartiteDims dims) {
    if (dims.a < 1 || dims.b < 1 || m.rows() != dims.a * dims.b || m.cols() != m.rows()) {
        throw DimensionMismatch("partial_trace: operator dimension does not match dA*dB");
    }
    if (traced == Subsystem::B) {
        ComplexMatrix out = ComplexMatrix::Zero(dims.a, dims.a);
        for (Eigen::Index i = 0; i < dims.a; ++i)
            for (Eigen::Index j = 0; j < dims.a; ++j)
                for (Eigen::Index k = 0; k < dims.b; ++k) out(i, j) += m(i * dims.b + k, j * dims.b + k);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dims.b, dims.b);
    for (Eigen::Index i = 0; i < dims.b; ++i)
        for (Eigen::Index j = 0; j < dims.b; ++j)
            for (Eigen::Index k = 0; k < dims.a; ++k) out(i, j) += m(k * dims.b + i, k * dims.b + j);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem traced, BipartiteDims dims) {
    return make_density_unchecked(partial_trace(rho.matrix(), traced, dims));
}

ComplexMatrix transpose(const ComplexMatrix& a) { return a.transpose(); }

double trace_inner(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("trace_inner: dimension mismatch");
    // Tr[AB] = sum_ij A_ij B_ji
    const Complex t = (a.matrix().array() * b.matrix().transpose().array()).sum();
    const double scale = std::max(1.0, a.matrix().norm() * b.matrix().norm());
    if (std::abs(t.imag()) > kNumericPolicy.hermiticity * scale) {
        throw ValidationError("trace_inner: imaginary residue on Hermitian inputs");
    }
    return t.real();
}

double expectation(const HermitianOperator& h, const DensityMatrix& rho) { return trace_inner(h, rho.op()); }

double expectation(const HermitianOperator& h, const PureState& psi) {
    if (h.dim() != psi.dim()) throw DimensionMismatch("expectation: dimension mismatch");
    return psi.amplitudes().dot(h.matrix() * psi.amplitudes()).real();
}

}  // namespace robtherm
