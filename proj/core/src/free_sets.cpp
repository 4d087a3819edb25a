#include "robtherm/free_sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "robtherm/robustness.hpp"

namespace robtherm {

namespace {

constexpr Complex kI{0.0, 1.0};

std::uint32_t pack(const PauliString& p, int n) { return p.x | (p.z << n); }

// Rank over GF(2) of packed symplectic rows.
int gf2_rank(std::vector<std::uint32_t> rows) {
    int rank = 0;
    for (int bit = 31; bit >= 0; --bit) {
        const std::uint32_t mask = std::uint32_t{1} << bit;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint32_t r) { return r & mask; });
        if (pivot == rows.end()) continue;
        std::swap(*pivot, rows[rank]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (static_cast<int>(i) != rank && (rows[i] & mask)) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank;
}

// Sorted list of all 2^n elements of the span; identifies the subspace.
std::vector<std::uint32_t> span_key(const std::vector<std::uint32_t>& rows) {
    std::vector<std::uint32_t> span{0};
    for (std::uint32_t r : rows) {
        const std::size_t n = span.size();
        for (std::size_t i = 0; i < n; ++i) span.push_back(span[i] ^ r);
    }
    std::sort(span.begin(), span.end());
    return span;
}

}  // namespace

std::string FreeSetSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case FreeSetKind::Incoherent: os << "incoherent(" << dim_ << ")"; break;
        case FreeSetKind::Stabilizer: os << "stabilizer(" << parameter_ << ")"; break;
        case FreeSetKind::FiniteHull: os << "hull(" << parameter_ << ")"; break;
    }
    return os.str();
}

FreeSetSpec FreeSetSpec::incoherent(Eigen::Index dim) {
    FreeSetSpec spec;
    spec.kind_ = FreeSetKind::Incoherent;
    spec.dim_ = dim;
    spec.parameter_ = static_cast<int>(dim);
    auto pure = incoherent_extreme_points(dim);
    std::vector<DensityMatrix> points;
    points.reserve(pure.size());
    for (const auto& p : pure) points.push_back(DensityMatrix::from_pure(p));
    spec.points_ = std::make_shared<const std::vector<DensityMatrix>>(std::move(points));
    spec.pure_ = std::make_shared<const std::vector<PureState>>(std::move(pure));
    return spec;
}

FreeSetSpec FreeSetSpec::stabilizer(int n_qubits) {
    FreeSetSpec spec;
    spec.kind_ = FreeSetKind::Stabilizer;
    spec.dim_ = Eigen::Index{1} << n_qubits;
    spec.parameter_ = n_qubits;
    auto pure = enumerate_stabilizer_states(n_qubits);
    std::vector<DensityMatrix> points;
    points.reserve(pure.size());
    for (const auto& p : pure) points.push_back(DensityMatrix::from_pure(p));
    spec.points_ = std::make_shared<const std::vector<DensityMatrix>>(std::move(points));
    spec.pure_ = std::make_shared<const std::vector<PureState>>(std::move(pure));
    return spec;
}

FreeSetSpec FreeSetSpec::finite_hull(std::vector<DensityMatrix> states) {
    if (states.empty()) throw ValidationError("finite_hull: empty extreme-point list");
    const Eigen::Index dim = states.front().dim();
    std::vector<PureState> pure;
    for (const auto& s : states) {
        if (s.dim() != dim) throw DimensionMismatch("finite_hull: states of different dimension");
        const Eigensystem es = hermitian_eig(s.op());
        if (es.values(dim - 1) > 1.0 - 1e-9) pure.push_back(PureState::normalized(es.vectors.col(dim - 1)));
    }
    FreeSetSpec spec;
    spec.kind_ = FreeSetKind::FiniteHull;
    spec.dim_ = dim;
    spec.parameter_ = static_cast<int>(states.size());
    if (pure.size() != states.size()) pure.clear();
    spec.points_ = std::make_shared<const std::vector<DensityMatrix>>(std::move(states));
    spec.pure_ = std::make_shared<const std::vector<PureState>>(std::move(pure));
    return spec;
}

ComplexMatrix pauli_matrix(const PauliString& p, int n_qubits) {
    ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    y << 0.0, -kI, kI, 0.0;
    z << 1.0, 0.0, 0.0, -1.0;
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
        const bool xb = (p.x >> q) & 1u;
        const bool zb = (p.z >> q) & 1u;
        out = tensor(out, xb ? (zb ? y : x) : (zb ? z : i2));
    }
    return p.negative ? ComplexMatrix(-out) : out;
}

bool paulis_commute(const PauliString& a, const PauliString& b) {
    return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) == 0;
}

void validate(const StabilizerGroupDescriptor& group) {
    if (group.n < 1 || static_cast<int>(group.generators.size()) != group.n) {
        throw ValidationError("stabilizer group: need exactly n generators");
    }
    std::vector<std::uint32_t> rows;
    for (const auto& g : group.generators) {
        if ((g.x | g.z) >> group.n) throw ValidationError("stabilizer group: generator acts outside n qubits");
        rows.push_back(pack(g, group.n));
    }
    if (gf2_rank(rows) != group.n) throw ValidationError("stabilizer group: generators are dependent over GF(2)");
    for (std::size_t i = 0; i < group.generators.size(); ++i)
        for (std::size_t j = i + 1; j < group.generators.size(); ++j)
            if (!paulis_commute(group.generators[i], group.generators[j]))
                throw ValidationError("stabilizer group: generators do not commute");
}

std::vector<StabilizerGroupDescriptor> enumerate_stabilizer_groups(int n) {
    if (n < 1 || n > 3) throw ValidationError("stabilizer enumeration supports 1..3 qubits");
    const std::uint32_t count = std::uint32_t{1} << (2 * n);
    const std::uint32_t low = (std::uint32_t{1} << n) - 1;
    auto unpack = [&](std::uint32_t v) { return PauliString{v & low, v >> n, false}; };

    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::vector<std::uint32_t>> bases;
    std::vector<std::uint32_t> chosen;
    // Depth-first search over increasing tuples of commuting, independent rows.
    auto extend = [&](auto&& self, std::uint32_t start) -> void {
        if (static_cast<int>(chosen.size()) == n) {
            auto key = span_key(chosen);
            if (seen.insert(key).second) bases.push_back(chosen);
            return;
        }
        for (std::uint32_t v = start; v < count; ++v) {
            bool ok = true;
            for (std::uint32_t c : chosen) ok = ok && paulis_commute(unpack(c), unpack(v));
            if (!ok) continue;
            chosen.push_back(v);
            if (gf2_rank(chosen) == static_cast<int>(chosen.size())) self(self, v + 1);
            chosen.pop_back();
        }
    };
    extend(extend, 1);

    std::vector<StabilizerGroupDescriptor> groups;
    for (const auto& basis : bases) {
        for (std::uint32_t signs = 0; signs < (std::uint32_t{1} << n); ++signs) {
            StabilizerGroupDescriptor g{n, {}};
            for (int k = 0; k < n; ++k) {
                PauliString p = unpack(basis[k]);
                p.negative = (signs >> k) & 1u;
                g.generators.push_back(p);
            }
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

PureState stabilizer_state(const StabilizerGroupDescriptor& group) {
    validate(group);
    const Eigen::Index dim = Eigen::Index{1} << group.n;
    ComplexMatrix proj = ComplexMatrix::Identity(dim, dim);
    for (const auto& g : group.generators) {
        proj = proj * (0.5 * (ComplexMatrix::Identity(dim, dim) + pauli_matrix(g, group.n)));
    }
    Eigen::Index best = 0;
    proj.colwise().norm().maxCoeff(&best);
    return PureState::normalized(proj.col(best));
}

std::vector<PureState> incoherent_extreme_points(Eigen::Index dim) {
    if (dim < 2) throw ValidationError("incoherent free set needs dim >= 2");
    std::vector<PureState> out;
    out.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j) out.push_back(PureState::basis(dim, j));
    return out;
}

std::vector<std::int64_t> state_fingerprint(const ComplexVector& amplitudes) {
    const double biggest = amplitudes.cwiseAbs().maxCoeff();
    Complex phase{1.0, 0.0};
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        if (std::abs(amplitudes(i)) >= 0.5 * biggest) {
            phase = std::abs(amplitudes(i)) / amplitudes(i);
            break;
        }
    }
    std::vector<std::int64_t> key;
    key.reserve(2 * static_cast<std::size_t>(amplitudes.size()));
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        const Complex a = amplitudes(i) * phase;
        key.push_back(std::llround(a.real() * 1e8));
        key.push_back(std::llround(a.imag() * 1e8));
    }
    return key;
}

std::vector<PureState> enumerate_stabilizer_states(int n) {
    std::vector<PureState> states;
    std::set<std::vector<std::int64_t>> seen;
    for (const auto& group : enumerate_stabilizer_groups(n)) {
        PureState psi = stabilizer_state(group);
        if (seen.insert(state_fingerprint(psi.amplitudes())).second) states.push_back(std::move(psi));
    }
    return states;
}

bool membership(const FreeSetSpec& spec, const DensityMatrix& rho, double tol) {
    if (rho.dim() != spec.dim()) throw DimensionMismatch("membership: dimension mismatch");
    // Solve an order of magnitude tighter than the decision threshold.
    return robustness_dual(rho, spec, 0.1 * tol).value <= tol;
}

}  // namespace robtherm
