#include "robtherm/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace robtherm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroWork = 1e-12;

void require_beta(Beta beta, const char* what) {
    if (!beta.is_infinite() && !(beta.value() > 0.0)) {
        throw ValidationError(std::string(what) + ": beta must be positive or infinite");
    }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

bool is_pure(const DensityMatrix& rho) {
    const Eigensystem es = hermitian_eig(rho.op());
    return es.values(es.values.size() - 1) > 1.0 - 1e-9;
}

// Free energies of every extreme point relative to a fixed thermal value.
std::vector<double> free_works(const FreeSetSpec& spec, const HermitianOperator& h, Beta beta, double f_tau) {
    std::vector<double> out;
    out.reserve(spec.size());
    if (spec.all_pure()) {
        for (const auto& psi : spec.pure_extreme_points()) out.push_back(expectation(h, psi) - f_tau);
    } else {
        for (const auto& s : spec.extreme_points()) out.push_back(free_energy(s, h, beta) - f_tau);
    }
    return out;
}

BoundReport xi_cost_report(const DensityMatrix& rho, const HermitianOperator& witness, double robustness,
                           const FreeSetSpec& spec, const ThermoContext& ctx) {
    const HermitianOperator h = witness.scaled(ctx.lambda);
    const ThermalSummary tau = thermal_summary(h, ctx.beta);
    const double s_rho = von_neumann_entropy(rho);

    BoundReport r;
    r.check = "xi_cost";
    r.direction = BoundDirection::AtMost;
    r.robustness = robustness;
    r.rhs = corollary1_bound(robustness, s_rho, tau.entropy, ctx);
    r.precondition_met = advantage_precondition(robustness, s_rho, ctx);

    const double w_rho = free_energy(rho, h, ctx.beta) - tau.free_energy;
    double w_free = 0.0;
    for (double w : free_works(spec, h, ctx.beta, tau.free_energy)) w_free = std::max(w_free, w);
    if (w_rho <= kZeroWork) {
        r.lhs = w_free <= kZeroWork ? 0.0 : kInf;
        r.note = "rho has zero work cost under the witness Hamiltonian";
    } else {
        r.lhs = w_free / w_rho;
    }
    if (!r.precondition_met && r.note.empty()) r.note = "lambda below S(rho)/(beta R)";
    return finalize(r);
}

}  // namespace

ThermalSummary thermal_summary(const RealVector& energies, Beta beta) {
    const double emin = energies(0);
    if (beta.is_infinite()) {
        int ground = 0;
        for (Eigen::Index i = 0; i < energies.size(); ++i)
            if (energies(i) - emin <= kNumericPolicy.degeneracy) ++ground;
        return {emin, std::log(static_cast<double>(ground))};
    }
    const double b = beta.value();
    RealVector p(energies.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = std::exp(-b * (energies(i) - emin));
    p /= p.sum();
    return {-log_partition(energies, b) / b, entropy_of_spectrum(p)};
}

ThermalSummary thermal_summary(const HermitianOperator& h, Beta beta) {
    return thermal_summary(hermitian_eig(h).values, beta);
}

ThermoContext ThermoContext::make(Beta beta, double lambda) {
    require_beta(beta, "ThermoContext");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("ThermoContext: lambda must be positive");
    return ThermoContext{beta, lambda};
}

double ThermoContext::lambda_beta() const { return beta.is_infinite() ? kInf : lambda * beta.value(); }

double ThermoContext::entropy_weight() const { return beta.is_infinite() ? 0.0 : 1.0 / (lambda * beta.value()); }

BoundReport finalize(BoundReport report, double slack) {
    if (std::isnan(report.lhs) || std::isnan(report.rhs)) {
        report.satisfied = false;
        report.slack = std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    if (report.direction == BoundDirection::AtLeast) {
        report.slack = report.lhs == kInf ? kInf : report.lhs - report.rhs;
    } else {
        report.slack = report.lhs == kInf ? -kInf : report.rhs - report.lhs;
    }
    report.satisfied = report.slack >= -slack;
    return report;
}

double free_energy(const DensityMatrix& rho, const HermitianOperator& h, Beta beta) {
    require_beta(beta, "free_energy");
    require_same_dim(rho.dim(), h.dim(), "free_energy");
    const double energy = expectation(h, rho);
    if (beta.is_infinite()) return energy;
    return energy - von_neumann_entropy(rho) / beta.value();
}

double thermal_free_energy(const HermitianOperator& h, Beta beta) {
    require_beta(beta, "thermal_free_energy");
    return thermal_summary(h, beta).free_energy;
}

double extractable_work(const DensityMatrix& rho, const HermitianOperator& h, Beta beta) {
    return free_energy(rho, h, beta) - thermal_free_energy(h, beta);
}

double work_cost(const DensityMatrix& rho, const HermitianOperator& h, Beta beta) {
    return extractable_work(rho, h, beta);
}

FreeWorkMaximum max_free_extractable_work(const FreeSetSpec& spec, const HermitianOperator& h, Beta beta) {
    require_beta(beta, "max_free_extractable_work");
    require_same_dim(spec.dim(), h.dim(), "max_free_extractable_work");
    if (spec.size() == 0) throw ValidationError("max_free_extractable_work: empty free set");
    const std::vector<double> w = free_works(spec, h, beta, thermal_free_energy(h, beta));
    FreeWorkMaximum best{w[0], 0};
    for (std::size_t k = 1; k < w.size(); ++k) {
        if (w[k] > best.value + 1e-12) best = {w[k], k};
    }
    return best;
}

double theorem1_bound(double robustness, double entropy_rho, double entropy_tau, const ThermoContext& ctx) {
    const double a = ctx.entropy_weight();
    return 1.0 + (robustness - a * entropy_rho) / (1.0 + a * entropy_tau);
}

bool advantage_precondition(double robustness, double entropy_rho, const ThermoContext& ctx) {
    if (!(robustness > 0.0)) return false;
    if (ctx.beta.is_infinite()) return true;
    return entropy_rho <= ctx.lambda_beta() * robustness + 1e-12;
}

ProtocolTrace simulate_protocol(const DensityMatrix& rho, const HermitianOperator& witness, const ThermoContext& ctx) {
    require_beta(ctx.beta, "simulate_protocol");
    require_same_dim(rho.dim(), witness.dim(), "simulate_protocol");
    const Eigensystem es = hermitian_eig(witness);
    if (es.values(0) < -kNumericPolicy.psd) throw ValidationError("simulate_protocol: witness is not PSD");

    const Eigen::Index d = rho.dim();
    const HermitianOperator h = witness.scaled(ctx.lambda);
    const double f_tau = thermal_summary(RealVector(ctx.lambda * es.values), ctx.beta).free_energy;
    const double f_mixed_bare = ctx.beta.is_infinite() ? 0.0 : -std::log(static_cast<double>(d)) / ctx.beta.value();

    ProtocolTrace t;
    t.dW_a = f_mixed_bare - f_tau;
    t.dW_b = 0.0;
    t.dW_c = free_energy(rho, h, ctx.beta) - f_tau;
    t.dW_d = -t.dW_a;
    t.total = t.dW_a + t.dW_b + t.dW_c + t.dW_d;
    t.hamiltonian = h;
    t.final_state = gibbs_state(h, ctx.beta);
    return t;
}

ProtocolWitness protocol_witness(const DensityMatrix& rho, const FreeSetSpec& spec, double tol) {
    ProtocolWitness out;
    out.solve = robustness_dual(rho, spec, tol);
    out.witness = out.solve.witness;
    out.robustness = out.solve.value > 0.0 ? trace_inner(out.witness, rho.op()) - 1.0 : 0.0;
    if (out.solve.value <= tol || !is_pure(rho)) return out;

    const Eigensystem es = hermitian_eig(rho.op());
    const PureState psi = PureState::normalized(es.vectors.col(es.values.size() - 1));
    try {
        Rank1Witness r1 = rank1_witness_from_pure(psi, spec, out.solve, tol);
        if (r1.achieved >= out.robustness - 10.0 * tol) {
            out.witness = r1.op();
            out.robustness = r1.achieved;
            out.rank1 = std::move(r1);
        }
    } catch (const Rank1NotTight&) {
        // keep the full-rank witness
    }
    return out;
}

double achieved_advantage(const DensityMatrix& rho, const HermitianOperator& witness, const FreeSetSpec& spec,
                          const ThermoContext& ctx) {
    const HermitianOperator h = witness.scaled(ctx.lambda);
    const double w_rho = extractable_work(rho, h, ctx.beta);
    const double w_free = max_free_extractable_work(spec, h, ctx.beta).value;
    if (w_free <= kZeroWork) return w_rho <= kZeroWork ? 1.0 : kInf;
    return w_rho / w_free;
}

BoundReport verify_theorem1(const DensityMatrix& rho, const FreeSetSpec& spec, const ThermoContext& ctx, double tol) {
    require_same_dim(rho.dim(), spec.dim(), "verify_theorem1");
    return verify_theorem1(rho, spec, protocol_witness(rho, spec, tol), ctx);
}

BoundReport verify_theorem1(const DensityMatrix& rho, const FreeSetSpec& spec, const ProtocolWitness& pw,
                            const ThermoContext& ctx) {
    require_same_dim(rho.dim(), spec.dim(), "verify_theorem1");
    const HermitianOperator h = pw.witness.scaled(ctx.lambda);
    const double s_rho = von_neumann_entropy(rho);
    const double s_tau = thermal_summary(h, ctx.beta).entropy;

    BoundReport r;
    r.check = "theorem1";
    r.direction = BoundDirection::AtLeast;
    r.robustness = pw.robustness;
    r.rhs = theorem1_bound(pw.robustness, s_rho, s_tau, ctx);
    r.lhs = achieved_advantage(rho, pw.witness, spec, ctx);
    r.precondition_met = advantage_precondition(pw.robustness, s_rho, ctx);
    if (!(pw.robustness > 0.0)) {
        r.note = s_rho > 1e-12 ? "R = 0 with S(rho) > 0: precondition unsatisfiable" : "free state";
    } else if (!r.precondition_met) {
        r.note = "lambda below S(rho)/(beta R)";
    }
    return finalize(r);
}

BoundReport verify_eq10_ratio(const DensityMatrix& rho, const FreeSetSpec& spec, const ThermoContext& ctx,
                              const Eq10Options& options) {
    require_same_dim(rho.dim(), spec.dim(), "verify_eq10_ratio");
    return verify_eq10_ratio(rho, spec, protocol_witness(rho, spec, options.tol), ctx, options);
}

BoundReport verify_eq10_ratio(const DensityMatrix& rho, const FreeSetSpec& spec, const ProtocolWitness& pw,
                              const ThermoContext& ctx, const Eq10Options& options) {
    require_same_dim(rho.dim(), spec.dim(), "verify_eq10_ratio");
    const HermitianOperator h = pw.witness.scaled(ctx.lambda);
    const double f_tau = thermal_summary(h, ctx.beta).free_energy;
    const double w_rho = free_energy(rho, h, ctx.beta) - f_tau;

    double ratio = kInf;
    int skipped = 0;
    for (double w : free_works(spec, h, ctx.beta, f_tau)) {
        if (w <= kZeroWork) {
            ++skipped;
            continue;
        }
        ratio = std::min(ratio, w_rho / w);
    }

    BoundReport r;
    r.check = "eq10_ratio";
    r.direction = BoundDirection::AtLeast;
    r.robustness = pw.robustness;
    r.lhs = ratio;
    r.rhs = (1.0 + pw.robustness) * (1.0 - options.epsilon);
    const double needed = options.lambda_beta_factor * std::log(static_cast<double>(rho.dim()));
    r.precondition_met = ctx.lambda_beta() >= needed;
    std::ostringstream note;
    if (!r.precondition_met) note << "lambda beta below " << needed << "; ";
    if (skipped > 0) note << skipped << " free states with zero work skipped";
    r.note = note.str();
    if (r.note.size() >= 2 && r.note.substr(r.note.size() - 2) == "; ") r.note.resize(r.note.size() - 2);
    return finalize(r);
}

DensityMatrix residual_thermal_closed_form(const PureState& y, double c, const ThermoContext& ctx) {
    if (!(c > 0.0)) throw ValidationError("residual_thermal_closed_form: c must be positive");
    const double x = ctx.beta.is_infinite() ? 1.0 : -std::expm1(-ctx.beta.value() * ctx.lambda * c);
    const Eigen::Index d = y.dim();
    ComplexMatrix m = ComplexMatrix::Identity(d, d) - x * y.projector();
    m /= static_cast<double>(d) - x;
    return make_density_unchecked(m);
}

BoundReport verify_theorem2(const PureState& y, double c, const ThermoContext& ctx, const FreeSetSpec& spec_prime,
                            double tol) {
    const Eigen::Index d = y.dim();
    require_same_dim(d, spec_prime.dim(), "verify_theorem2");
    if (d < 2) throw ValidationError("verify_theorem2: dimension must be at least 2");
    if (!spec_prime.contains_maximally_mixed() &&
        !membership(spec_prime, DensityMatrix::maximally_mixed(d), 1e-7)) {
        throw ValidationError("verify_theorem2: I/d is not in the free set");
    }
    const RobustnessResult res = robustness_dual(residual_thermal_closed_form(y, c, ctx), spec_prime, tol);

    BoundReport r;
    r.check = "theorem2";
    r.direction = BoundDirection::AtMost;
    r.robustness = res.value;
    r.lhs = res.upper;
    r.rhs = 1.0 / static_cast<double>(d - 1);
    r.precondition_met = true;
    return finalize(r, 1e-7);
}

double corollary1_bound(double robustness, double entropy_rho, double entropy_tau, const ThermoContext& ctx) {
    const double a = ctx.entropy_weight();
    return (1.0 + a * entropy_tau) / (1.0 + robustness + a * (entropy_tau - entropy_rho));
}

BoundReport verify_xi_cost(const DensityMatrix& rho, const FreeSetSpec& spec, const ThermoContext& ctx, double tol) {
    require_same_dim(rho.dim(), spec.dim(), "verify_xi_cost");
    return verify_xi_cost(rho, spec, protocol_witness(rho, spec, tol), ctx);
}

BoundReport verify_xi_cost(const DensityMatrix& rho, const FreeSetSpec& spec, const ProtocolWitness& pw,
                           const ThermoContext& ctx) {
    require_same_dim(rho.dim(), spec.dim(), "verify_xi_cost");
    return xi_cost_report(rho, pw.witness, pw.robustness, spec, ctx);
}

BoundReport verify_xi_cost_with_witness(const DensityMatrix& rho, const HermitianOperator& witness,
                                        const FreeSetSpec& spec, const ThermoContext& ctx) {
    require_same_dim(rho.dim(), spec.dim(), "verify_xi_cost");
    require_same_dim(rho.dim(), witness.dim(), "verify_xi_cost");
    const double r = std::max(0.0, trace_inner(witness, rho.op()) - 1.0);
    return xi_cost_report(rho, witness, r, spec, ctx);
}

}  // namespace robtherm
