#include "robtherm/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "robtherm/named.hpp"
#include "robtherm/random.hpp"

namespace robtherm {

namespace {

// Field access on one JSON object with unknown-key rejection.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path, std::initializer_list<const char*> allowed)
        : j_(j), path_(std::move(path)) {
        if (!j.is_object()) throw InputError(path_, "expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!ok.count(it.key())) throw InputError(sub(it.key()), "unknown field");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json& at(const std::string& key) const {
        if (!has(key)) throw InputError(sub(key), "missing required field");
        return j_.at(key);
    }

    long long integer(const std::string& key, long long min_value) const {
        const Json& v = at(key);
        if (!v.is_number_integer()) throw InputError(sub(key), "expected an integer");
        const auto out = v.get<long long>();
        if (out < min_value) throw InputError(sub(key), "must be >= " + std::to_string(min_value));
        return out;
    }

    double number(const std::string& key) const {
        const Json& v = at(key);
        if (!v.is_number()) throw InputError(sub(key), "expected a number");
        return v.get<double>();
    }

    std::string string(const std::string& key) const {
        const Json& v = at(key);
        if (!v.is_string()) throw InputError(sub(key), "expected a string");
        return v.get<std::string>();
    }

private:
    const Json& j_;
    std::string path_;
};

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

int exact_log2(Eigen::Index d) {
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    return (Eigen::Index{1} << n) == d ? n : -1;
}

StateSpec parse_state(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("kind")) throw InputError(path, "expected an object with a \"kind\"");
    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    StateSpec s;
    if (kind == "golden") {
        ObjectReader r(j, path, {"kind", "d"});
        s.kind = StateKind::Golden;
        s.d = r.integer("d", 2);
    } else if (kind == "tstate") {
        ObjectReader r(j, path, {"kind", "n"});
        s.kind = StateKind::TState;
        s.copies = static_cast<int>(r.integer("n", 1));
        if (s.copies > 12) throw InputError(r.sub("n"), "at most 12 copies");
        s.d = Eigen::Index{1} << s.copies;
    } else if (kind == "basis") {
        ObjectReader r(j, path, {"kind", "d", "index"});
        s.kind = StateKind::Basis;
        s.d = r.integer("d", 2);
        s.index = r.integer("index", 0);
        if (s.index >= s.d) throw InputError(r.sub("index"), "must be < d");
    } else if (kind == "plus") {
        ObjectReader r(j, path, {"kind"});
        s.kind = StateKind::Plus;
        s.d = 2;
    } else if (kind == "depolarized_tstate") {
        ObjectReader r(j, path, {"kind", "n", "p"});
        s.kind = StateKind::DepolarizedTState;
        s.copies = static_cast<int>(r.integer("n", 1));
        if (s.copies > 6) throw InputError(r.sub("n"), "at most 6 copies");
        s.d = Eigen::Index{1} << s.copies;
        s.noise = r.number("p");
        if (s.noise < 0.0 || s.noise > 1.0) throw InputError(r.sub("p"), "must lie in [0, 1]");
    } else if (kind == "random") {
        ObjectReader r(j, path, {"kind", "d", "rank"});
        s.kind = StateKind::Random;
        s.d = r.integer("d", 2);
        s.rank = r.has("rank") ? static_cast<int>(r.integer("rank", 0)) : 0;
        if (s.rank > s.d) throw InputError(r.sub("rank"), "must be <= d");
    } else if (kind == "vector") {
        ObjectReader r(j, path, {"kind", "amplitudes"});
        s.kind = StateKind::Vector;
        s.vector = vector_from_json(r.at("amplitudes"), r.sub("amplitudes"));
        s.d = s.vector.size();
        try {
            PureState check(s.vector);
        } catch (const ValidationError& e) {
            throw InputError(r.sub("amplitudes"), e.what());
        }
    } else if (kind == "matrix") {
        ObjectReader r(j, path, {"kind", "matrix"});
        s.kind = StateKind::Matrix;
        s.matrix = matrix_from_json(r.at("matrix"), r.sub("matrix"));
        s.d = s.matrix.rows();
        try {
            DensityMatrix check(s.matrix);
        } catch (const ValidationError& e) {
            throw InputError(r.sub("matrix"), e.what());
        }
    } else {
        throw InputError(path + ".kind",
                         "expected one of golden, tstate, basis, plus, depolarized_tstate, random, vector, matrix");
    }
    return s;
}

FreeSetConfig parse_free_set(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("kind")) throw InputError(path, "expected an object with a \"kind\"");
    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    FreeSetConfig f;
    if (kind == "incoherent") {
        ObjectReader r(j, path, {"kind", "d"});
        f.kind = FreeSetKind::Incoherent;
        if (r.has("d")) f.parameter = static_cast<int>(r.integer("d", 2));
    } else if (kind == "stabilizer") {
        ObjectReader r(j, path, {"kind", "n"});
        f.kind = FreeSetKind::Stabilizer;
        if (r.has("n")) {
            f.parameter = static_cast<int>(r.integer("n", 1));
            if (*f.parameter > 3) throw InputError(r.sub("n"), "stabilizer sets are enumerated for 1..3 qubits");
        }
    } else if (kind == "hull") {
        ObjectReader r(j, path, {"kind", "states"});
        f.kind = FreeSetKind::FiniteHull;
        const Json& states = r.at("states");
        if (!states.is_array() || states.empty()) throw InputError(r.sub("states"), "expected a non-empty array");
        for (std::size_t i = 0; i < states.size(); ++i) {
            const StateSpec s = parse_state(states[i], index_path(r.sub("states"), i));
            if (s.randomized()) throw InputError(index_path(r.sub("states"), i), "random states cannot define a free set");
            f.hull.push_back(s.build(0).matrix());
        }
        f.parameter = static_cast<int>(f.hull.size());
    } else {
        throw InputError(path + ".kind", "expected one of incoherent, stabilizer, hull");
    }
    return f;
}

ChannelSpec parse_channel(const Json& j, const std::string& path) {
    ObjectReader r(j, path, {"gates", "kraus", "name", "d", "input"});
    ChannelSpec c;
    const int forms = int(r.has("gates")) + int(r.has("kraus")) + int(r.has("name"));
    if (forms != 1) throw InputError(path, "give exactly one of gates, kraus, name");
    if (r.has("gates")) {
        const Json& g = r.at("gates");
        if (!g.is_array() || g.empty()) throw InputError(r.sub("gates"), "expected a non-empty array of gate names");
        for (std::size_t i = 0; i < g.size(); ++i) {
            static const std::set<std::string> known{"i", "h", "s", "t", "x", "y", "z"};
            if (!g[i].is_string() || !known.count(g[i].get<std::string>())) {
                throw InputError(index_path(r.sub("gates"), i), "expected one of i, h, s, t, x, y, z");
            }
            c.gates.push_back(g[i].get<std::string>());
        }
        c.d = 2;
    } else if (r.has("kraus")) {
        const Json& k = r.at("kraus");
        if (!k.is_array() || k.empty()) throw InputError(r.sub("kraus"), "expected a non-empty array of matrices");
        for (std::size_t i = 0; i < k.size(); ++i) c.kraus.push_back(matrix_from_json(k[i], index_path(r.sub("kraus"), i)));
        c.d = c.kraus.front().rows();
    } else {
        c.name = r.string("name");
        if (c.name != "identity" && c.name != "depolarizing") {
            throw InputError(r.sub("name"), "expected identity or depolarizing");
        }
        c.d = r.has("d") ? r.integer("d", 2) : 2;
    }
    if (r.has("d") && !r.has("name")) throw InputError(r.sub("d"), "only used with a named channel");
    try {
        (void)c.build();
    } catch (const ValidationError& e) {
        throw InputError(path, e.what());
    }
    if (r.has("input")) {
        c.input = parse_state(r.at("input"), r.sub("input"));
        if (c.input->d != c.d) throw InputError(r.sub("input"), "input dimension differs from the channel");
    }
    return c;
}

std::vector<double> parse_positive_list(const Json& j, const std::string& path) {
    std::vector<double> out;
    const Json arr = j.is_array() ? j : Json::array({j});
    if (arr.empty()) throw InputError(path, "grid must be non-empty");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number() || !(arr[i].get<double>() > 0.0)) {
            throw InputError(index_path(path, i), "expected a positive number");
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

CheckKind parse_check(const Json& j, const std::string& path) {
    static const std::map<std::string, CheckKind> names{{"theorem1", CheckKind::Theorem1},
                                                         {"eq10", CheckKind::Eq10},
                                                         {"theorem2", CheckKind::Theorem2},
                                                         {"corollary1", CheckKind::Corollary1},
                                                         {"theorem3", CheckKind::Theorem3},
                                                         {"theorem4", CheckKind::Theorem4}};
    if (j.is_string()) {
        auto it = names.find(j.get<std::string>());
        if (it != names.end()) return it->second;
    }
    throw InputError(path, "expected one of theorem1, eq10, theorem2, corollary1, theorem3, theorem4");
}

bool is_state_check(CheckKind c) { return c != CheckKind::Theorem3 && c != CheckKind::Theorem4; }

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

BoundReport skipped(CheckKind c, const std::string& reason) {
    BoundReport r;
    r.check = to_string(c);
    r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
    r.note = reason;
    return finalize(r);
}

// Everything a (state, free set) pair needs for its grid of checks.
struct PairData {
    std::size_t state{0};
    std::size_t free_set{0};
    std::string state_label;
    std::string free_set_label;
    std::optional<DensityMatrix> rho;
    std::optional<FreeSetSpec> spec;
    std::optional<ProtocolWitness> pw;
    std::optional<PureState> psi;  // set on the closed-form path
    RobustnessEntry entry;
};

bool closed_form_eligible(const StateSpec& s, const FreeSetConfig& f) {
    return s.d > kSdpMaxDim && f.kind == FreeSetKind::Incoherent &&
           (s.kind == StateKind::Golden || s.kind == StateKind::TState || s.kind == StateKind::Basis ||
            s.kind == StateKind::Vector);
}

std::string free_set_label(const FreeSetConfig& f, Eigen::Index d) {
    switch (f.kind) {
        case FreeSetKind::Incoherent: return "incoherent(" + std::to_string(d) + ")";
        case FreeSetKind::Stabilizer: return "stabilizer(" + std::to_string(exact_log2(d)) + ")";
        case FreeSetKind::FiniteHull: return "hull(" + std::to_string(f.hull.size()) + ")";
    }
    return "";
}

void validate_pair(const StateSpec& s, const FreeSetConfig& f, const std::string& path) {
    if (f.parameter && f.kind == FreeSetKind::Incoherent && *f.parameter != s.d) {
        throw InputError(path, "free set dimension differs from the state");
    }
    if (f.kind == FreeSetKind::Stabilizer) {
        const int n = exact_log2(s.d);
        if (n < 1 || n > 3) throw InputError(path, "stabilizer sets need a 2, 4 or 8 dimensional state");
        if (f.parameter && *f.parameter != n) throw InputError(path, "free set qubit count differs from the state");
    }
    if (f.kind == FreeSetKind::FiniteHull && f.hull.front().rows() != s.d) {
        throw InputError(path, "free set dimension differs from the state");
    }
    if (s.d > kSdpMaxDim && !closed_form_eligible(s, f)) {
        throw InputError(path, "dimension above " + std::to_string(kSdpMaxDim) +
                                   " is only supported for pure states against the incoherent set");
    }
}

PairData prepare_pair(const Scenario& sc, std::size_t i, std::size_t f) {
    const StateSpec& s = sc.states[i];
    const FreeSetConfig& fc = sc.free_sets[f];
    const std::uint64_t seed = sc.seed.value_or(0) + i;
    PairData p;
    p.state = i;
    p.free_set = f;
    p.state_label = s.label();
    p.free_set_label = free_set_label(fc, s.d);
    p.entry.state = p.state_label;
    p.entry.free_set = p.free_set_label;
    if (closed_form_eligible(s, fc)) {
        p.psi = *s.pure(seed);
        p.entry.result = coherence_closed_form(*p.psi);
        p.entry.closed_form = true;
        return p;
    }
    p.rho = s.build(seed);
    p.spec = fc.build(s.d);
    p.pw = protocol_witness(*p.rho, *p.spec, sc.tol.solver);
    p.entry.result = p.pw->solve;
    p.entry.certificates = check_certificates(p.pw->solve, *p.rho, *p.spec);
    return p;
}

BoundReport evaluate_state_check(const Scenario& sc, const PairData& p, CheckKind c, const ThermoContext& ctx) {
    if (!p.pw) return skipped(c, "dimension above the SDP limit: closed-form robustness only");
    try {
        switch (c) {
            case CheckKind::Theorem1: return verify_theorem1(*p.rho, *p.spec, *p.pw, ctx);
            case CheckKind::Eq10: {
                Eq10Options o;
                o.epsilon = sc.tol.eq10_epsilon;
                o.lambda_beta_factor = sc.tol.eq10_factor;
                o.tol = sc.tol.solver;
                return verify_eq10_ratio(*p.rho, *p.spec, *p.pw, ctx, o);
            }
            case CheckKind::Corollary1: return verify_xi_cost(*p.rho, *p.spec, *p.pw, ctx);
            case CheckKind::Theorem2: {
                if (!p.pw->rank1) return skipped(c, "no rank-one witness: state is mixed, free, or not rank-one tight");
                return verify_theorem2(p.pw->rank1->y, p.pw->rank1->c, ctx, *p.spec, sc.tol.solver);
            }
            default: break;
        }
    } catch (const ValidationError& e) {
        return skipped(c, e.what());
    }
    return skipped(c, "not a state check");
}

struct SweepPoint {
    double robustness;
    double bound;
    double achieved;
};

// Rank-one phase witness c|y><y| with c = d: spectrum {0 (d - 1 times), lambda d},
// every basis state has <y|sigma_j|y> c = 1 and the pure state reaches 1 + R.
SweepPoint closed_form_point(const PureState& psi, const ThermoContext& ctx) {
    const double r = robustness_pure_coherence(psi);
    const Eigen::Index d = psi.dim();
    RealVector energies = RealVector::Zero(d);
    energies(d - 1) = ctx.lambda * static_cast<double>(d);
    const ThermalSummary tau = thermal_summary(energies, ctx.beta);
    const double w_rho = ctx.lambda * (1.0 + r) - tau.free_energy;
    const double w_free = ctx.lambda - tau.free_energy;
    return {r, theorem1_bound(r, 0.0, tau.entropy, ctx), w_rho / w_free};
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string StateSpec::label() const {
    std::ostringstream os;
    switch (kind) {
        case StateKind::Golden: os << "golden(" << d << ")"; break;
        case StateKind::TState: os << "tstate(" << copies << ")"; break;
        case StateKind::Basis: os << "basis(" << d << "," << index << ")"; break;
        case StateKind::Plus: os << "plus"; break;
        case StateKind::DepolarizedTState: os << "depolarized_tstate(" << copies << "," << noise << ")"; break;
        case StateKind::Random: os << "random(" << d << "," << rank << ")"; break;
        case StateKind::Vector: os << "vector(" << d << ")"; break;
        case StateKind::Matrix: os << "matrix(" << d << ")"; break;
    }
    return os.str();
}

int StateSpec::qubits() const {
    if (kind == StateKind::TState || kind == StateKind::DepolarizedTState) return copies;
    return 0;
}

std::optional<PureState> StateSpec::pure(std::uint64_t seed) const {
    switch (kind) {
        case StateKind::Golden: return golden_state(d);
        case StateKind::TState: return tensor_power(t_state(), copies);
        case StateKind::Basis: return PureState::basis(d, index);
        case StateKind::Plus: return plus_state();
        case StateKind::Vector: return PureState(vector);
        case StateKind::Random:
            if (rank == 1) {
                Rng rng(seed);
                return random_pure_state(d, rng);
            }
            return std::nullopt;
        default: return std::nullopt;
    }
}

DensityMatrix StateSpec::build(std::uint64_t seed) const {
    if (auto psi = pure(seed)) return DensityMatrix::from_pure(*psi);
    switch (kind) {
        case StateKind::DepolarizedTState: {
            const ComplexMatrix one = (1.0 - noise) * DensityMatrix::from_pure(t_state()).matrix() +
                                      noise * ComplexMatrix::Identity(2, 2) / 2.0;
            ComplexMatrix out = one;
            for (int k = 1; k < copies; ++k) out = tensor(out, one);
            return make_density_unchecked(out);
        }
        case StateKind::Random: {
            Rng rng(seed);
            return random_density_matrix(d, rng, rank);
        }
        case StateKind::Matrix: return DensityMatrix(matrix);
        default: break;
    }
    throw ValidationError("StateSpec: unsupported state kind");
}

std::string ChannelSpec::label() const {
    if (!gates.empty()) {
        std::string out = "gates(";
        for (std::size_t i = 0; i < gates.size(); ++i) out += (i ? "," : "") + gates[i];
        return out + ")";
    }
    if (!kraus.empty()) return "kraus(" + std::to_string(kraus.size()) + ")";
    return name + "(" + std::to_string(d) + ")";
}

QuantumChannel ChannelSpec::build() const {
    if (!gates.empty()) {
        ComplexMatrix u = ComplexMatrix::Identity(2, 2);
        for (const auto& g : gates) {
            ComplexMatrix m = ComplexMatrix::Identity(2, 2);
            if (g == "h") m = hadamard_gate();
            else if (g == "s") m = phase_gate();
            else if (g == "t") m = t_gate();
            else if (g == "x") m = pauli_x();
            else if (g == "y") m = pauli_y();
            else if (g == "z") m = pauli_z();
            u = m * u;
        }
        return QuantumChannel::unitary(u);
    }
    if (!kraus.empty()) return QuantumChannel(kraus);
    if (name == "depolarizing") return QuantumChannel::completely_depolarizing(d);
    return QuantumChannel::identity(d);
}

FreeSetSpec FreeSetConfig::build(Eigen::Index dim) const {
    switch (kind) {
        case FreeSetKind::Incoherent: return FreeSetSpec::incoherent(dim);
        case FreeSetKind::Stabilizer: return FreeSetSpec::stabilizer(exact_log2(dim));
        case FreeSetKind::FiniteHull: {
            std::vector<DensityMatrix> states;
            for (const auto& m : hull) states.push_back(DensityMatrix(m));
            return FreeSetSpec::finite_hull(std::move(states));
        }
    }
    throw ValidationError("FreeSetConfig: unknown kind");
}

FreeSetSpec FreeSetConfig::build_bipartite(Eigen::Index dim) const {
    switch (kind) {
        case FreeSetKind::Incoherent: return FreeSetSpec::incoherent(dim * dim);
        case FreeSetKind::Stabilizer: return FreeSetSpec::stabilizer(2 * exact_log2(dim));
        case FreeSetKind::FiniteHull: break;
    }
    throw InputError("bipartite_free_set", "hull free sets need an explicit bipartite_free_set");
}

std::string to_string(CheckKind c) {
    switch (c) {
        case CheckKind::Theorem1: return "theorem1";
        case CheckKind::Eq10: return "eq10";
        case CheckKind::Theorem2: return "theorem2";
        case CheckKind::Corollary1: return "corollary1";
        case CheckKind::Theorem3: return "theorem3";
        case CheckKind::Theorem4: return "theorem4";
    }
    return "unknown";
}

Beta BetaEntry::resolve(double lambda, Eigen::Index d) const {
    if (beta) return *beta;
    return Beta::finite(per_log_d * std::log(static_cast<double>(d)) / lambda);
}

std::string BetaEntry::label() const {
    if (!beta) return format_number(per_log_d) + " ln d / lambda";
    return beta->is_infinite() ? "inf" : format_number(beta->value());
}

Scenario parse_scenario(const Json& j) {
    ObjectReader r(j, "", {"schema", "name", "state", "states", "channel", "free_set", "free_sets",
                           "bipartite_free_set", "lambda", "beta", "lambda_beta_log_d", "checks", "seed",
                           "tolerances"});
    Scenario sc;
    sc.schema = static_cast<int>(r.integer("schema", 1));
    if (sc.schema != kScenarioSchema) {
        throw InputError("schema", "unsupported schema version " + std::to_string(sc.schema));
    }
    sc.name = r.string("name");

    if (r.has("state") && r.has("states")) throw InputError("states", "give either state or states");
    if (r.has("state")) sc.states.push_back(parse_state(r.at("state"), "state"));
    if (r.has("states")) {
        const Json& arr = r.at("states");
        if (!arr.is_array() || arr.empty()) throw InputError("states", "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) sc.states.push_back(parse_state(arr[i], index_path("states", i)));
    }
    if (r.has("channel")) sc.channel = parse_channel(r.at("channel"), "channel");
    if (sc.states.empty() && !sc.channel) throw InputError("states", "a scenario needs states or a channel");

    if (r.has("free_set") && r.has("free_sets")) throw InputError("free_sets", "give either free_set or free_sets");
    if (r.has("free_set")) sc.free_sets.push_back(parse_free_set(r.at("free_set"), "free_set"));
    if (r.has("free_sets")) {
        const Json& arr = r.at("free_sets");
        if (!arr.is_array() || arr.empty()) throw InputError("free_sets", "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            sc.free_sets.push_back(parse_free_set(arr[i], index_path("free_sets", i)));
    }
    if (sc.free_sets.empty()) throw InputError("free_set", "missing required field");
    if (r.has("bipartite_free_set")) sc.bipartite_free_set = parse_free_set(r.at("bipartite_free_set"), "bipartite_free_set");

    sc.lambdas = r.has("lambda") ? parse_positive_list(r.at("lambda"), "lambda") : std::vector<double>{1.0};
    if (r.has("beta") && r.has("lambda_beta_log_d")) {
        throw InputError("lambda_beta_log_d", "give either beta or lambda_beta_log_d");
    }
    if (r.has("beta")) {
        const Json& b = r.at("beta");
        const Json arr = b.is_array() ? b : Json::array({b});
        if (arr.empty()) throw InputError("beta", "grid must be non-empty");
        for (std::size_t i = 0; i < arr.size(); ++i) sc.betas.push_back({beta_from_json(arr[i], index_path("beta", i)), 0.0});
    } else if (r.has("lambda_beta_log_d")) {
        for (double v : parse_positive_list(r.at("lambda_beta_log_d"), "lambda_beta_log_d")) {
            sc.betas.push_back({std::nullopt, v});
        }
    } else {
        sc.betas.push_back({Beta::infinite(), 0.0});
    }

    if (r.has("checks")) {
        const Json& arr = r.at("checks");
        if (!arr.is_array()) throw InputError("checks", "expected an array");
        std::set<CheckKind> seen;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const CheckKind c = parse_check(arr[i], index_path("checks", i));
            if (!seen.insert(c).second) throw InputError(index_path("checks", i), "duplicate check");
            if (is_state_check(c) && sc.states.empty()) throw InputError(index_path("checks", i), "needs states");
            if (!is_state_check(c) && !sc.channel) throw InputError(index_path("checks", i), "needs a channel");
            if (c == CheckKind::Theorem3 && !sc.channel->input) {
                throw InputError(index_path("checks", i), "theorem3 needs channel.input");
            }
            sc.checks.push_back(c);
        }
    }

    if (r.has("seed")) sc.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
    if (r.has("tolerances")) {
        ObjectReader t(r.at("tolerances"), "tolerances", {"solver", "eq10_epsilon", "eq10_factor", "bound"});
        auto positive = [&](const char* key, double& out) {
            if (!t.has(key)) return;
            out = t.number(key);
            if (!(out > 0.0)) throw InputError(t.sub(key), "must be positive");
        };
        positive("solver", sc.tol.solver);
        positive("eq10_epsilon", sc.tol.eq10_epsilon);
        positive("eq10_factor", sc.tol.eq10_factor);
        positive("bound", sc.tol.bound);
        if (sc.tol.eq10_epsilon >= 1.0) throw InputError("tolerances.eq10_epsilon", "must be < 1");
    }

    const bool randomized = std::any_of(sc.states.begin(), sc.states.end(), [](const StateSpec& s) { return s.randomized(); }) ||
                            (sc.channel && sc.channel->input && sc.channel->input->randomized());
    if (randomized && !sc.seed) throw InputError("seed", "required when random states are used");

    for (std::size_t i = 0; i < sc.states.size(); ++i)
        for (std::size_t f = 0; f < sc.free_sets.size(); ++f)
            validate_pair(sc.states[i], sc.free_sets[f], index_path("states", i));
    if (sc.channel) {
        if (sc.channel->input) validate_pair(*sc.channel->input, sc.free_sets.front(), "channel.input");
        if (!sc.bipartite_free_set && sc.free_sets.front().kind == FreeSetKind::FiniteHull) {
            throw InputError("bipartite_free_set", "hull free sets need an explicit bipartite_free_set");
        }
        if (!sc.bipartite_free_set && sc.free_sets.front().kind == FreeSetKind::Stabilizer &&
            2 * exact_log2(sc.channel->d) > 3) {
            throw InputError("channel", "bipartite stabilizer set would exceed 3 qubits");
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open scenario file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path, std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(j);
}

int RunReport::failed() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckEntry& c) {
        return c.report.precondition_met && !c.report.satisfied;
    }));
}

int RunReport::skipped() const {
    return static_cast<int>(
        std::count_if(checks.begin(), checks.end(), [](const CheckEntry& c) { return !c.report.precondition_met; }));
}

int RunReport::nonconverged() const {
    return static_cast<int>(std::count_if(robustness.begin(), robustness.end(), [](const RobustnessEntry& e) {
        return e.result.status != SolverStatus::Converged;
    }));
}

int RunReport::exit_code() const {
    if (failed() > 0) return kExitCheckFailed;
    if (nonconverged() > 0) return kExitNonConvergence;
    return kExitOk;
}

RunReport run_scenario(const Scenario& sc, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.scenario = sc.name;
    report.seed = sc.seed;

    std::vector<PairData> pairs(sc.states.size() * sc.free_sets.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        pairs[k] = prepare_pair(sc, k / sc.free_sets.size(), k % sc.free_sets.size());
    });
    for (const auto& p : pairs) report.robustness.push_back(p.entry);

    std::optional<QuantumChannel> channel;
    std::optional<FreeSetSpec> bipartite;
    std::optional<FreeSetSpec> channel_spec;
    std::optional<DensityMatrix> channel_input;
    if (sc.channel) {
        channel = sc.channel->build();
        bipartite = sc.bipartite_free_set ? sc.bipartite_free_set->build(channel->dim() * channel->dim())
                                          : sc.free_sets.front().build_bipartite(channel->dim());
        RobustnessEntry e;
        e.state = "choi:" + sc.channel->label();
        e.free_set = bipartite->describe();
        e.result = channel_robustness_lower(*channel, *bipartite, sc.tol.solver);
        e.certificates = check_certificates(e.result, choi_state(*channel).state(), *bipartite);
        report.robustness.push_back(std::move(e));
        if (sc.channel->input) {
            channel_spec = sc.free_sets.front().build(channel->dim());
            channel_input = sc.channel->input->build(sc.seed.value_or(0));
        }
    }

    // Grid points in (pair, lambda, beta, check) order; channel points last.
    struct Point {
        const PairData* pair;
        double lambda;
        const BetaEntry* beta;
        CheckKind check;
    };
    std::vector<Point> points;
    for (const auto& p : pairs)
        for (double lambda : sc.lambdas)
            for (const auto& b : sc.betas)
                for (CheckKind c : sc.checks)
                    if (is_state_check(c)) points.push_back({&p, lambda, &b, c});
    if (sc.channel)
        for (double lambda : sc.lambdas)
            for (const auto& b : sc.betas)
                for (CheckKind c : sc.checks)
                    if (!is_state_check(c)) points.push_back({nullptr, lambda, &b, c});

    report.checks.resize(points.size());
    parallel_for(points.size(), threads, [&](std::size_t k) {
        const Point& pt = points[k];
        CheckEntry& out = report.checks[k];
        out.lambda = pt.lambda;
        if (pt.pair) {
            const Eigen::Index d = sc.states[pt.pair->state].d;
            out.state = pt.pair->state_label;
            out.free_set = pt.pair->free_set_label;
            out.beta = pt.beta->resolve(pt.lambda, d);
            out.report = evaluate_state_check(sc, *pt.pair, pt.check, ThermoContext::make(out.beta, pt.lambda));
            return;
        }
        const Eigen::Index d = channel->dim();
        out.beta = pt.beta->resolve(pt.lambda, d);
        const ThermoContext ctx = ThermoContext::make(out.beta, pt.lambda);
        out.state = sc.channel->label();
        if (pt.check == CheckKind::Theorem3) {
            out.free_set = channel_spec->describe();
            out.report = theorem3_bound(*channel, *channel_input, *channel_spec, ctx, sc.tol.solver);
        } else {
            out.free_set = bipartite->describe();
            out.report = theorem4_bound(*channel, *bipartite, ctx, sc.tol.solver);
        }
    });

    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Json to_json(const RunReport& r, bool with_wall_time) {
    Json j;
    j["schema"] = kScenarioSchema;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
    Json rob = Json::array();
    for (const auto& e : r.robustness) {
        Json item{{"state", e.state}, {"free_set", e.free_set}, {"closed_form", e.closed_form}};
        item.update(to_json(e.result, false));
        item["certificates"] = e.certificates ? to_json(*e.certificates) : Json(nullptr);
        rob.push_back(std::move(item));
    }
    j["robustness"] = std::move(rob);
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json item{{"state", c.state}, {"free_set", c.free_set}, {"lambda", c.lambda}, {"beta", beta_to_json(c.beta)}};
        item.update(to_json(c.report));
        checks.push_back(std::move(item));
    }
    j["checks"] = std::move(checks);
    j["summary"] = Json{{"checks", r.checks.size()},
                        {"failed", r.failed()},
                        {"skipped", r.skipped()},
                        {"nonconverged", r.nonconverged()},
                        {"exit_code", r.exit_code()}};
    if (with_wall_time) j["wall_time_s"] = r.wall_time_s;
    return j;
}

std::vector<SweepRow> sweep(const Scenario& sc, unsigned threads) {
    if (sc.states.empty()) throw InputError("states", "sweeps run over states");
    std::vector<PairData> pairs(sc.states.size() * sc.free_sets.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        pairs[k] = prepare_pair(sc, k / sc.free_sets.size(), k % sc.free_sets.size());
    });

    struct Point {
        const PairData* pair;
        double lambda;
        const BetaEntry* beta;
    };
    std::vector<Point> points;
    for (const auto& p : pairs)
        for (double lambda : sc.lambdas)
            for (const auto& b : sc.betas) points.push_back({&p, lambda, &b});

    std::vector<SweepRow> rows(points.size());
    parallel_for(points.size(), threads, [&](std::size_t k) {
        const Point& pt = points[k];
        const StateSpec& s = sc.states[pt.pair->state];
        SweepRow& row = rows[k];
        row.state = pt.pair->state_label;
        row.free_set = pt.pair->free_set_label;
        row.d = s.d;
        row.n = s.qubits();
        row.lambda = pt.lambda;
        row.beta = pt.beta->resolve(pt.lambda, s.d);
        const ThermoContext ctx = ThermoContext::make(row.beta, pt.lambda);
        if (pt.pair->psi) {
            const SweepPoint sp = closed_form_point(*pt.pair->psi, ctx);
            row.robustness = sp.robustness;
            row.bound = sp.bound;
            row.achieved = sp.achieved;
        } else {
            const BoundReport b = verify_theorem1(*pt.pair->rho, *pt.pair->spec, *pt.pair->pw, ctx);
            row.robustness = b.robustness;
            row.bound = b.rhs;
            row.achieved = b.lhs;
        }
        row.satisfied = row.achieved >= row.bound - sc.tol.bound;
    });

    auto beta_key = [](Beta b) { return b.is_infinite() ? std::numeric_limits<double>::infinity() : b.value(); };
    std::stable_sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.n != b.n) return a.n < b.n;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return beta_key(a.beta) < beta_key(b.beta);
    });
    return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << kSweepHeader << "\n";
    for (const auto& r : rows) {
        os << csv_field(r.state) << "," << csv_field(r.free_set) << "," << r.d << "," << r.n << ","
           << format_number(r.lambda) << "," << (r.beta.is_infinite() ? "inf" : format_number(r.beta.value())) << ","
           << format_number(r.robustness) << "," << format_number(r.bound) << "," << format_number(r.achieved) << ","
           << (r.satisfied ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace robtherm
