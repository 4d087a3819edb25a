#include "robtherm/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace robtherm {

std::string to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Converged: return "Converged";
        case SolverStatus::MaxIterations: return "MaxIterations";
        case SolverStatus::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

namespace {

// Orthonormal (under Tr[AB]) real coordinates for Hermitian r x r
// matrices: diagonal units, then (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2
// for each i < j.
class HermitianCoordinates {
public:
    explicit HermitianCoordinates(Eigen::Index r) : r_(r) {
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = i + 1; j < r; ++j) pairs_.emplace_back(i, j);
    }

    Eigen::Index size() const { return r_ * r_; }

    RealVector coords(const ComplexMatrix& a) const {
        RealVector x(size());
        for (Eigen::Index i = 0; i < r_; ++i) x(i) = a(i, i).real();
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            const auto [i, j] = pairs_[p];
            const Eigen::Index k = r_ + 2 * static_cast<Eigen::Index>(p);
            x(k) = std::numbers::sqrt2 * a(i, j).real();
            x(k + 1) = std::numbers::sqrt2 * a(i, j).imag();
        }
        return x;
    }

    ComplexMatrix matrix(const RealVector& x) const {
        ComplexMatrix a(r_, r_);
        for (Eigen::Index i = 0; i < r_; ++i) a(i, i) = x(i);
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            const auto [i, j] = pairs_[p];
            const Eigen::Index k = r_ + 2 * static_cast<Eigen::Index>(p);
            const Complex v = Complex(x(k), x(k + 1)) / std::numbers::sqrt2;
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
        return a;
    }

    // Matrix of X -> W X W in these coordinates, i.e. the Hessian of
    // -log det Y at Y = W^{-1}.
    RealMatrix congruence(const ComplexMatrix& w) const {
        RealMatrix h(size(), size());
        for (Eigen::Index i = 0; i < r_; ++i) {
            h.row(i) = coords(w.col(i) * w.row(i)).transpose();
        }
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            const auto [i, j] = pairs_[p];
            const Eigen::Index k = r_ + 2 * static_cast<Eigen::Index>(p);
            const ComplexMatrix wij = w.col(i) * w.row(j);
            const ComplexMatrix wji = w.col(j) * w.row(i);
            h.row(k) = coords((wij + wji) / std::numbers::sqrt2).transpose();
            h.row(k + 1) = coords(Complex(0.0, 1.0) * (wij - wji) / std::numbers::sqrt2).transpose();
        }
        return 0.5 * (h + h.transpose());
    }

private:
    Eigen::Index r_;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs_;
};

// Beyond this weight the centering steps are below double precision.
constexpr double kMaxBarrierWeight = 1e18;

double log_det_llt(const Eigen::LLT<ComplexMatrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

double min_eigenvalue(const ComplexMatrix& m) {
    return hermitian_eig(HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())))).values(0);
}

// Witness Y and mixing weights q, each feasible on its own.
struct Certificates {
    ComplexMatrix witness;
    double lower{-std::numeric_limits<double>::infinity()};
    RealVector weights;
    double upper{std::numeric_limits<double>::infinity()};
};

class BarrierSolver {
public:
    BarrierSolver(const DensityMatrix& rho, const FreeSetSpec& spec, const SolverOptions& options)
        : rho_(rho), spec_(spec), options_(options), d_(rho.dim()), m_(static_cast<Eigen::Index>(spec.size())) {}

    RobustnessResult solve() {
        if (d_ != spec_.dim()) throw DimensionMismatch("robustness: state and free set dimensions differ");
        if (!(options_.tol > 0.0)) throw ValidationError("robustness: tol must be positive");

        if (!reduce()) return infeasible();

        const HermitianCoordinates hc(r_);
        const Eigen::Index n = hc.size();
        a_.resize(m_, n);
        for (Eigen::Index k = 0; k < m_; ++k) a_.row(k) = hc.coords(reduced_points_[k]).transpose();
        const RealVector r = hc.coords(reduced_rho_);

        double max_trace = 0.0;
        for (const auto& s : reduced_points_) max_trace = std::max(max_trace, s.trace().real());
        RealVector x = hc.coords(ComplexMatrix::Identity(r_, r_) * (0.5 / max_trace));

        double t = 1.0;
        int newton = 0;
        Certificates best;
        SolverStatus status = SolverStatus::MaxIterations;

        while (newton < options_.max_newton_iterations && t < kMaxBarrierWeight) {
            // Centering: Newton with backtracking on the self-concordant barrier
            //   -t <r, x> - log det Y(x) - sum_k log(1 - <a_k, x>).
            NewtonStep step_data = newton_step(hc, r, x, t);
            double previous = std::numeric_limits<double>::infinity();
            for (int inner = 0; inner < 60 && newton < options_.max_newton_iterations; ++inner) {
                const double dec = step_data.decrement;
                // Quadratic convergence has stalled once the decrement stops
                // shrinking; that is the floating-point floor of centering.
                if (!step_data.dx.allFinite() || dec < 1e-7 || (dec < 1e-4 && dec > 0.25 * previous)) break;
                ++newton;
                if (!line_search(hc, r, t, step_data, x)) break;
                previous = dec;
                step_data = newton_step(hc, r, x, t);
            }

            absorb(best, extract(hc, step_data, t));
            if (best.upper - best.lower <= options_.tol) {
                status = SolverStatus::Converged;
                break;
            }
            t *= options_.barrier_growth;
        }
        return finish(best, status, newton);
    }

private:
    struct NewtonStep {
        RealVector x;
        RealVector s;  // constraint slacks 1 - <a_k, x>
        RealVector dx;
        RealVector grad;
        double log_det{0.0};
        double decrement{0.0};
    };

    NewtonStep newton_step(const HermitianCoordinates& hc, const RealVector& r, const RealVector& x, double t) const {
        NewtonStep ns;
        ns.x = x;
        Eigen::LLT<ComplexMatrix> llt(hc.matrix(x));
        ns.log_det = log_det_llt(llt);
        const ComplexMatrix w = llt.solve(ComplexMatrix::Identity(r_, r_));
        ns.s = RealVector::Ones(m_) - a_ * x;
        const RealVector inv_s = ns.s.cwiseInverse();
        ns.grad = -t * r - hc.coords(0.5 * (w + w.adjoint())) + a_.transpose() * inv_s;
        RealMatrix hess = hc.congruence(w);
        hess.noalias() += a_.transpose() * inv_s.cwiseAbs2().asDiagonal() * a_;
        ns.dx = -hess.ldlt().solve(ns.grad);
        ns.decrement = std::sqrt(std::max(0.0, -ns.grad.dot(ns.dx)));
        return ns;
    }

    // Backtracking on the barrier change, evaluated term by term so that the
    // large linear part never cancels. Returns false when no step is taken.
    bool line_search(const HermitianCoordinates& hc, const RealVector& r, double t, const NewtonStep& ns,
                     RealVector& x) const {
        const double slope = ns.grad.dot(ns.dx);
        const RealVector a_dx = a_ * ns.dx;
        const double r_dx = r.dot(ns.dx);
        double step = 1.0;
        for (int halvings = 0; halvings < 40; ++halvings, step *= 0.5) {
            const RealVector s_new = ns.s - step * a_dx;
            if (s_new.minCoeff() <= 0.0) continue;
            const RealVector cand = ns.x + step * ns.dx;
            Eigen::LLT<ComplexMatrix> llt(hc.matrix(cand));
            if (llt.info() != Eigen::Success) continue;
            double change = -t * step * r_dx - (log_det_llt(llt) - ns.log_det);
            for (Eigen::Index k = 0; k < m_; ++k) change -= std::log(s_new(k) / ns.s(k));
            if (change <= 0.01 * step * slope) {
                x = cand;
                return true;
            }
        }
        return false;
    }

    // Restricts to the span of the extreme points. Returns false when rho
    // has weight outside it (no mixture can dominate rho).
    bool reduce() {
        ComplexMatrix avg = ComplexMatrix::Zero(d_, d_);
        for (const auto& s : spec_.extreme_points()) avg += s.matrix();
        avg /= static_cast<double>(m_);
        const Eigensystem es = hermitian_eig(HermitianOperator(avg));
        const double cutoff = 1e-10 * std::max(1.0, es.values.maxCoeff());
        Eigen::Index first = 0;
        while (first < d_ && es.values(first) <= cutoff) ++first;
        r_ = d_ - first;
        if (r_ == 0) return false;
        basis_ = first == 0 ? ComplexMatrix(ComplexMatrix::Identity(d_, d_)) : ComplexMatrix(es.vectors.rightCols(r_));
        avg_min_eigenvalue_ = es.values(first);

        if (first > 0) {
            const ComplexMatrix null = es.vectors.leftCols(first);
            const double leak = (null.adjoint() * rho_.matrix() * null).trace().real();
            if (leak > kNumericPolicy.psd) return false;
        }
        reduced_rho_ = basis_.adjoint() * rho_.matrix() * basis_;
        reduced_points_.clear();
        for (const auto& s : spec_.extreme_points()) reduced_points_.push_back(basis_.adjoint() * s.matrix() * basis_);
        return true;
    }

    Certificates extract(const HermitianCoordinates& hc, const NewtonStep& ns, double t) const {
        Certificates c;

        // Witness: clip any negative spectrum, then scale into the constraints.
        const ComplexMatrix y_raw = hc.matrix(ns.x);
        const Eigensystem es = hermitian_eig(HermitianOperator(ComplexMatrix(0.5 * (y_raw + y_raw.adjoint()))));
        const ComplexMatrix y_reduced = spectral_apply(es, [](double v) { return std::max(v, 0.0); });
        ComplexMatrix y = basis_ * y_reduced * basis_.adjoint();
        double worst = 0.0;
        for (const auto& s : spec_.extreme_points()) worst = std::max(worst, (y * s.matrix()).trace().real());
        if (worst > 1.0) y /= worst;
        c.witness = 0.5 * (y + y.adjoint());
        c.lower = (c.witness * rho_.matrix()).trace().real() - 1.0;

        // Mixing weights: the multipliers implied by the Newton step,
        // q_k = (1 + <a_k, dx>/s_k) / (t s_k), which satisfy stationarity to
        // second order; then shift along the uniform mixture until
        // sum q sigma - rho >= 0.
        RealVector q(m_);
        const RealVector a_dx = a_ * (ns.dx.allFinite() ? ns.dx : RealVector(RealVector::Zero(ns.dx.size())));
        for (Eigen::Index k = 0; k < m_; ++k) q(k) = std::max(0.0, (1.0 + a_dx(k) / ns.s(k)) / (t * ns.s(k)));
        ComplexMatrix dom = -reduced_rho_;
        for (Eigen::Index k = 0; k < m_; ++k) dom += q(k) * reduced_points_[k];
        const double lmin = min_eigenvalue(dom);
        if (lmin < 0.0) {
            const double shift = (-lmin * (1.0 + 1e-9) + 1e-15) / avg_min_eigenvalue_;
            q.array() += shift / static_cast<double>(m_);
        }
        c.weights = q;
        c.upper = q.sum() - 1.0;
        return c;
    }

    static void absorb(Certificates& best, const Certificates& c) {
        if (c.lower > best.lower) {
            best.lower = c.lower;
            best.witness = c.witness;
        }
        if (c.upper < best.upper) {
            best.upper = c.upper;
            best.weights = c.weights;
        }
    }

    RobustnessResult finish(const Certificates& best, SolverStatus status, int newton) const {
        RobustnessResult out;
        out.primal_weights = best.weights;
        out.upper = best.upper;
        out.newton_iterations = newton;
        out.status = status;
        if (best.upper <= options_.tol) {
            // Free state: canonical identity witness, Tr[I sigma] = 1 exactly.
            out.witness = HermitianOperator::identity(d_);
            out.lower = rho_.matrix().trace().real() - 1.0;
        } else {
            out.witness = HermitianOperator(best.witness);
            out.lower = best.lower;
        }
        out.gap = std::max(0.0, out.upper - out.lower);
        if (out.gap <= options_.tol) out.status = SolverStatus::Converged;
        out.value = std::max(0.0, out.lower);
        return out;
    }

    RobustnessResult infeasible() const {
        RobustnessResult out;
        out.value = std::numeric_limits<double>::infinity();
        out.witness = HermitianOperator::identity(d_);
        out.primal_weights = RealVector::Zero(m_);
        out.lower = rho_.matrix().trace().real() - 1.0;
        out.upper = std::numeric_limits<double>::infinity();
        out.gap = std::numeric_limits<double>::infinity();
        out.status = SolverStatus::Infeasible;
        return out;
    }

    const DensityMatrix& rho_;
    const FreeSetSpec& spec_;
    SolverOptions options_;
    Eigen::Index d_;
    Eigen::Index m_;
    Eigen::Index r_{0};
    ComplexMatrix basis_;
    double avg_min_eigenvalue_{1.0};
    ComplexMatrix reduced_rho_;
    std::vector<ComplexMatrix> reduced_points_;
    RealMatrix a_;
};

}  // namespace

RobustnessResult robustness_dual(const DensityMatrix& rho, const FreeSetSpec& spec, const SolverOptions& options) {
    return BarrierSolver(rho, spec, options).solve();
}

RobustnessResult robustness_dual(const DensityMatrix& rho, const FreeSetSpec& spec, double tol) {
    SolverOptions options;
    options.tol = tol;
    return robustness_dual(rho, spec, options);
}

PrimalSolution robustness_primal(const DensityMatrix& rho, const FreeSetSpec& spec, double tol) {
    const RobustnessResult r = robustness_dual(rho, spec, tol);
    return {r.upper, r.primal_weights, r.status};
}

bool CertificateCheck::witness_feasible() const {
    return witness_min_eigenvalue >= -kNumericPolicy.psd && witness_max_constraint <= 1.0 + 1e-8;
}

bool CertificateCheck::primal_feasible() const {
    return weights_min >= 0.0 && mixture_min_eigenvalue >= -kNumericPolicy.psd;
}

CertificateCheck check_certificates(const RobustnessResult& result, const DensityMatrix& rho, const FreeSetSpec& spec) {
    CertificateCheck c;
    const ComplexMatrix& y = result.witness.matrix();
    c.witness_min_eigenvalue = hermitian_eig(result.witness).values(0);
    c.witness_max_constraint = -std::numeric_limits<double>::infinity();
    for (const auto& s : spec.extreme_points())
        c.witness_max_constraint = std::max(c.witness_max_constraint, trace_inner(result.witness, s.op()));
    c.lower = (y * rho.matrix()).trace().real() - 1.0;

    const auto& q = result.primal_weights;
    if (q.size() != static_cast<Eigen::Index>(spec.size())) {
        c.weights_min = -std::numeric_limits<double>::infinity();
        c.mixture_min_eigenvalue = -std::numeric_limits<double>::infinity();
        c.upper = std::numeric_limits<double>::infinity();
        return c;
    }
    c.weights_min = q.minCoeff();
    ComplexMatrix dom = -rho.matrix();
    for (std::size_t k = 0; k < spec.size(); ++k) dom += q(static_cast<Eigen::Index>(k)) * spec.extreme_points()[k].matrix();
    c.mixture_min_eigenvalue = min_eigenvalue(dom);
    c.upper = q.sum() - 1.0;
    return c;
}

bool witness_is_feasible(const HermitianOperator& y, const FreeSetSpec& spec, double slack) {
    if (y.dim() != spec.dim()) throw DimensionMismatch("witness_is_feasible: dimension mismatch");
    if (hermitian_eig(y).values(0) < -kNumericPolicy.psd) return false;
    for (const auto& s : spec.extreme_points())
        if (trace_inner(y, s.op()) > 1.0 + slack) return false;
    return true;
}

double robustness_pure_coherence(const PureState& psi) {
    const double l1 = psi.amplitudes().cwiseAbs().sum();
    return l1 * l1 - 1.0;
}

RobustnessResult coherence_closed_form(const PureState& psi) {
    const Rank1Witness w = coherence_rank1_witness(psi);
    const RealVector mags = psi.amplitudes().cwiseAbs();
    RobustnessResult out;
    out.witness = w.op();
    out.primal_weights = mags * mags.sum();
    out.lower = w.achieved;
    out.upper = out.primal_weights.sum() - 1.0;
    out.value = std::max(0.0, out.lower);
    out.gap = std::max(0.0, out.upper - out.lower);
    out.status = SolverStatus::Converged;
    return out;
}

double tstate_magic_robustness(int n_copies) {
    if (n_copies < 1) throw ValidationError("tstate_magic_robustness: N must be >= 1");
    return std::pow(4.0 - 2.0 * std::numbers::sqrt2, n_copies) - 1.0;
}

HermitianOperator single_qubit_magic_witness() {
    ComplexMatrix m(2, 2);
    const Complex off = Complex(1.0, -1.0) / std::numbers::sqrt2;  // entry (0,1) of (X + Y)/sqrt2
    m << 1.0, off, std::conj(off), 1.0;
    return HermitianOperator(ComplexMatrix(m / (1.0 + 1.0 / std::numbers::sqrt2)));
}

HermitianOperator Rank1Witness::op() const {
    return HermitianOperator(ComplexMatrix(c * y.projector()));
}

namespace {

std::optional<Rank1Witness> rescale(const ComplexVector& direction, const PureState& psi, const FreeSetSpec& spec) {
    if (!(direction.norm() > 0.0)) return std::nullopt;
    const PureState y = PureState::normalized(direction);
    double worst = 0.0;
    for (const auto& s : spec.extreme_points()) worst = std::max(worst, expectation(s.op(), y));
    if (!(worst > 0.0)) return std::nullopt;
    const double c = 1.0 / worst;
    const double overlap = std::norm(y.amplitudes().dot(psi.amplitudes()));
    return Rank1Witness{c, y, c * overlap - 1.0};
}

}  // namespace

Rank1Witness rank1_witness_from_pure(const PureState& psi, const FreeSetSpec& spec, double tol) {
    return rank1_witness_from_pure(psi, spec, robustness_dual(DensityMatrix::from_pure(psi), spec, tol), tol);
}

Rank1Witness rank1_witness_from_pure(const PureState& psi, const FreeSetSpec& spec, const RobustnessResult& solved,
                                     double tol) {
    if (solved.value <= tol) throw ValidationError("rank1_witness_from_pure: state is free");
    const Eigensystem es = hermitian_eig(solved.witness);

    std::optional<Rank1Witness> best;
    for (const ComplexVector& dir : {ComplexVector(es.vectors.col(es.values.size() - 1)),
                                     ComplexVector(solved.witness.matrix() * psi.amplitudes())}) {
        auto cand = rescale(dir, psi, spec);
        if (cand && (!best || cand->achieved > best->achieved)) best = cand;
    }
    if (!best || best->achieved < solved.value - 10.0 * tol) {
        throw Rank1NotTight("rank-one witness loses more than 10 tol of the solved robustness");
    }
    return *best;
}

Rank1Witness coherence_rank1_witness(const PureState& psi) {
    const Eigen::Index d = psi.dim();
    ComplexVector y(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex a = psi.amplitudes()(j);
        y(j) = std::abs(a) > 0.0 ? a / std::abs(a) : Complex(1.0, 0.0);
    }
    const double c = static_cast<double>(d);
    const double l1 = psi.amplitudes().cwiseAbs().sum();
    return Rank1Witness{c, PureState::normalized(y), l1 * l1 - 1.0};
}

}  // namespace robtherm
