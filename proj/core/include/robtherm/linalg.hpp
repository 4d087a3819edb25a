#pragma once

// Dense complex Hermitian linear algebra used by every other module:
// validated operator/state types, eigendecomposition, Gibbs states,
// entropies and the tensor/partial-trace algebra.

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace robtherm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Global numeric tolerances. Every validation in the library reads from
/// this single record.
struct NumericPolicy {
    double hermiticity = 1e-10;  // max-entry norm of A - A^dagger
    double psd = 1e-9;           // smallest admissible eigenvalue is -psd
    double trace = 1e-9;         // |Tr rho - 1|
    double norm = 1e-10;         // | <psi|psi> - 1 |
    double degeneracy = 1e-9;    // ground-space width at zero temperature
};

inline constexpr NumericPolicy kNumericPolicy{};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Inverse temperature. Either a finite non-negative value or the
/// zero-temperature sentinel, which selects dedicated ground-space code.
class Beta {
public:
    static Beta finite(double value);
    static Beta infinite() { return Beta(std::numeric_limits<double>::infinity()); }

    bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
    double value() const { return value_; }
    /// 1/beta, which is 0 at zero temperature.
    double temperature() const { return is_infinite() ? 0.0 : 1.0 / value_; }

    friend bool operator==(const Beta&, const Beta&) = default;

private:
    explicit Beta(double v) : value_(v) {}
    double value_;
};

class HermitianOperator {
public:
    /// Validates Hermiticity within kNumericPolicy.hermiticity and stores
    /// the exactly Hermitian part (A + A^dagger) / 2.
    explicit HermitianOperator(const ComplexMatrix& m);

    static HermitianOperator identity(Eigen::Index dim);
    static HermitianOperator zero(Eigen::Index dim);
    static HermitianOperator diagonal(const RealVector& diag);

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    HermitianOperator scaled(double factor) const;

private:
    ComplexMatrix m_;
};

class PureState {
public:
    explicit PureState(const ComplexVector& amplitudes);
    /// Normalizes `v`; throws on a zero vector.
    static PureState normalized(const ComplexVector& v);
    static PureState basis(Eigen::Index dim, Eigen::Index index);

    const ComplexVector& amplitudes() const { return v_; }
    Eigen::Index dim() const { return v_.size(); }
    ComplexMatrix projector() const { return v_ * v_.adjoint(); }

private:
    ComplexVector v_;
};

class DensityMatrix {
public:
    /// Validates unit trace and positivity (one eigendecomposition).
    explicit DensityMatrix(const HermitianOperator& h);
    explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianOperator(m)) {}
    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(Eigen::Index dim);

    const HermitianOperator& op() const { return h_; }
    const ComplexMatrix& matrix() const { return h_.matrix(); }
    Eigen::Index dim() const { return h_.dim(); }

private:
    struct Trusted {};
    DensityMatrix(HermitianOperator h, Trusted) : h_(std::move(h)) {}
    friend DensityMatrix make_density_unchecked(const ComplexMatrix& m);

    HermitianOperator h_;
};

/// Builds a density matrix whose invariants are guaranteed by construction
/// (Gibbs states, pure projectors, convex mixtures). Renormalizes the trace
/// and symmetrizes but skips the eigenvalue check.
DensityMatrix make_density_unchecked(const ComplexMatrix& m);

struct Eigensystem {
    RealVector values;     // ascending
    ComplexMatrix vectors; // columns are eigenvectors
};

Eigensystem hermitian_eig(const HermitianOperator& a);

/// Throws ValidationError unless `m` is Hermitian within policy.
void require_hermitian(const ComplexMatrix& m, const std::string& what);

/// Applies a real scalar function to the spectrum of `a`.
template <typename F>
ComplexMatrix spectral_apply(const Eigensystem& es, F&& f) {
    RealVector fv(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) fv(i) = f(es.values(i));
    return es.vectors * fv.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

DensityMatrix gibbs_state(const HermitianOperator& h, Beta beta);

/// Shannon entropy (nats) of a probability vector; entries are clamped to
/// [0, 1] and 0 ln 0 = 0.
double entropy_of_spectrum(const RealVector& probabilities);
double von_neumann_entropy(const DensityMatrix& rho);

/// log of the partition function, ln Tr exp(-beta H), evaluated stably.
double log_partition(const RealVector& energies, double beta);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor(const PureState& a, const PureState& b);
/// n-fold tensor power, n >= 1.
PureState tensor_power(const PureState& a, int n);
HermitianOperator tensor_power(const HermitianOperator& a, int n);

enum class Subsystem { A, B };

struct BipartiteDims {
    Eigen::Index a;
    Eigen::Index b;
};

/// Traces out `traced` from a state on A (x) B.
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem traced, BipartiteDims dims);
/// Same contraction on an arbitrary operator.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem traced, BipartiteDims dims);

ComplexMatrix transpose(const ComplexMatrix& a);

/// Tr[AB]; the imaginary residue is asserted below policy and dropped.
double trace_inner(const HermitianOperator& a, const HermitianOperator& b);
double expectation(const HermitianOperator& h, const DensityMatrix& rho);
/// <psi| H |psi>
double expectation(const HermitianOperator& h, const PureState& psi);

double max_entry_norm(const ComplexMatrix& m);

}  // namespace robtherm
