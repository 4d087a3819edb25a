#include "robtherm/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robtherm {

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ValidationError("QuantumChannel: empty Kraus list");
    dim_ = kraus_.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& k : kraus_) {
        if (k.rows() != dim_ || k.cols() != dim_) throw DimensionMismatch("QuantumChannel: Kraus operators must be d x d");
        sum += k.adjoint() * k;
    }
    if (max_entry_norm(sum - ComplexMatrix::Identity(dim_, dim_)) > 1e-9) {
        throw ValidationError("QuantumChannel: not trace preserving");
    }
}

QuantumChannel QuantumChannel::unitary(const ComplexMatrix& u) { return QuantumChannel({u}); }

QuantumChannel QuantumChannel::identity(Eigen::Index dim) { return unitary(ComplexMatrix::Identity(dim, dim)); }

QuantumChannel QuantumChannel::completely_depolarizing(Eigen::Index dim) {
    std::vector<ComplexMatrix> ks;
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
            k(i, j) = s;
            ks.push_back(std::move(k));
        }
    }
    return QuantumChannel(std::move(ks));
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
    if (rho.dim() != dim_) throw DimensionMismatch("QuantumChannel::apply: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& k : kraus_) out += k * rho.matrix() * k.adjoint();
    return make_density_unchecked(out);
}

ChoiState::ChoiState(DensityMatrix state, Eigen::Index dim) : state_(std::move(state)), dim_(dim) {
    if (state_.dim() != dim * dim) throw DimensionMismatch("ChoiState: state must live on d^2");
    const ComplexMatrix marginal = partial_trace(state_.matrix(), Subsystem::A, {dim, dim});
    const ComplexMatrix mixed = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
    if (max_entry_norm(marginal - mixed) > 1e-8) throw ValidationError("ChoiState: reference marginal is not I/d");
}

ChoiState choi_state(const QuantumChannel& channel) {
    const Eigen::Index d = channel.dim();
    ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
    // J = (1/d) sum_{ij} E(|i><j|) (x) |i><j|
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            ComplexMatrix unit = ComplexMatrix::Zero(d, d);
            unit(a, b) = 1.0;
            ComplexMatrix image = ComplexMatrix::Zero(d, d);
            for (const auto& k : channel.kraus()) image += k * unit * k.adjoint();
            j += tensor(image, unit);
        }
    }
    j /= static_cast<double>(d);
    return ChoiState(make_density_unchecked(j), d);
}

DensityMatrix apply_via_choi(const ChoiState& choi, const DensityMatrix& rho) {
    const Eigen::Index d = choi.dim();
    if (rho.dim() != d) throw DimensionMismatch("apply_via_choi: dimension mismatch");
    const ComplexMatrix lifted = tensor(ComplexMatrix::Identity(d, d), transpose(rho.matrix())) * choi.state().matrix();
    return make_density_unchecked(static_cast<double>(d) * partial_trace(lifted, Subsystem::B, {d, d}));
}

RobustnessResult channel_robustness_lower(const QuantumChannel& channel, const FreeSetSpec& bipartite_spec,
                                          double tol) {
    const Eigen::Index d = channel.dim();
    if (bipartite_spec.dim() != d * d) {
        throw DimensionMismatch("channel_robustness_lower: free set must live on d^2");
    }
    return robustness_dual(choi_state(channel).state(), bipartite_spec, tol);
}

double channel_cost_proxy(const QuantumChannel& channel, const HermitianOperator& h_ab, Beta beta) {
    const Eigen::Index d = channel.dim();
    if (h_ab.dim() != d * d) throw DimensionMismatch("channel_cost_proxy: H_AB must live on d^2");
    return work_cost(choi_state(channel).state(), h_ab, beta);
}

BoundReport theorem3_bound(const QuantumChannel& channel, const DensityMatrix& sigma_in, const FreeSetSpec& spec,
                           const ThermoContext& ctx, double tol) {
    if (sigma_in.dim() != channel.dim() || spec.dim() != channel.dim()) {
        throw DimensionMismatch("theorem3_bound: dimension mismatch");
    }
    BoundReport r;
    r.check = "theorem3";
    r.direction = BoundDirection::AtMost;

    const Eigensystem in_es = hermitian_eig(sigma_in.op());
    if (in_es.values(in_es.values.size() - 1) < 1.0 - 1e-9) {
        r.note = "input state is not pure";
        r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
        return finalize(r);
    }
    if (!membership(spec, sigma_in, 1e-7)) {
        r.note = "input state is not free";
        r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
        return finalize(r);
    }

    const DensityMatrix out = channel.apply(sigma_in);
    const ProtocolWitness pw = protocol_witness(out, spec, tol);
    const double s_out = von_neumann_entropy(out);
    r.robustness = pw.robustness;
    if (!(pw.robustness > 0.0)) {
        r.note = "output is free: bound undefined";
        r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
        return finalize(r);
    }

    const double denom_bound = pw.robustness - ctx.entropy_weight() * s_out;
    r.precondition_met = advantage_precondition(pw.robustness, s_out, ctx) && denom_bound > 0.0;
    r.rhs = denom_bound > 0.0 ? 1.0 / denom_bound : std::numeric_limits<double>::infinity();

    const HermitianOperator h = pw.witness.scaled(ctx.lambda);
    const double f_in = free_energy(sigma_in, h, ctx.beta);
    const double denom = free_energy(out, h, ctx.beta) - f_in;
    if (!(denom > 0.0)) {
        r.precondition_met = false;
        r.note = "non-positive work difference F(E(sigma_in)) - F(sigma_in)";
        r.lhs = std::numeric_limits<double>::quiet_NaN();
        return finalize(r);
    }
    double numer = -std::numeric_limits<double>::infinity();
    for (const auto& s : spec.extreme_points()) numer = std::max(numer, free_energy(s, h, ctx.beta) - f_in);
    r.lhs = numer / denom;
    if (!r.precondition_met) r.note = "lambda below S(E(sigma_in))/(beta R)";
    return finalize(r);
}

BoundReport theorem4_bound(const QuantumChannel& channel, const FreeSetSpec& bipartite_spec, const ThermoContext& ctx,
                           double tol) {
    const Eigen::Index d = channel.dim();
    if (bipartite_spec.dim() != d * d) throw DimensionMismatch("theorem4_bound: free set must live on d^2");
    const DensityMatrix j = choi_state(channel).state();
    const ProtocolWitness pw = protocol_witness(j, bipartite_spec, tol);
    if (!(pw.robustness > tol)) {
        BoundReport r;
        r.check = "theorem4";
        r.direction = BoundDirection::AtMost;
        r.robustness = pw.robustness;
        r.lhs = 1.0;
        r.rhs = 1.0;
        r.note = "channel is free under the relaxation: trivial bound 1";
        return finalize(r);
    }
    BoundReport r = verify_xi_cost_with_witness(j, pw.witness, bipartite_spec, ctx);
    r.check = "theorem4";
    return r;
}

}  // namespace robtherm
