#pragma once

// Scenario files: named states/channels, free sets, (lambda, beta) grids and
// the bound checks to run over them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robtherm/channels.hpp"
#include "robtherm/json_io.hpp"

namespace robtherm {

inline constexpr int kScenarioSchema = 1;
/// Largest dimension handed to the SDP in scenario runs.
inline constexpr Eigen::Index kSdpMaxDim = 16;

enum class StateKind { Golden, TState, Basis, Plus, DepolarizedTState, Random, Vector, Matrix };

struct StateSpec {
    StateKind kind{StateKind::Golden};
    Eigen::Index d{2};
    int copies{1};          // tstate / depolarized tstate
    Eigen::Index index{0};  // basis
    double noise{0.0};      // depolarized tstate: (1 - p)|T><T| + p I/2 per copy
    int rank{0};            // random: 0 means full rank
    ComplexVector vector;
    ComplexMatrix matrix;

    std::string label() const;
    /// Qubit count for qubit-power states, 0 otherwise.
    int qubits() const;
    bool randomized() const { return kind == StateKind::Random; }
    DensityMatrix build(std::uint64_t seed) const;
    std::optional<PureState> pure(std::uint64_t seed) const;
};

struct ChannelSpec {
    std::vector<std::string> gates;  // applied in order: first entry acts first
    std::vector<ComplexMatrix> kraus;
    std::string name;  // "depolarizing" or "identity"
    Eigen::Index d{2};
    std::optional<StateSpec> input;

    std::string label() const;
    QuantumChannel build() const;
};

struct FreeSetConfig {
    FreeSetKind kind{FreeSetKind::Incoherent};
    std::optional<int> parameter;  // dim or qubit count; inferred from the state when absent
    std::vector<ComplexMatrix> hull;

    /// Builds the set for a system of dimension `dim`.
    FreeSetSpec build(Eigen::Index dim) const;
    /// Bipartite set on dim^2 for channel checks.
    FreeSetSpec build_bipartite(Eigen::Index dim) const;
};

enum class CheckKind { Theorem1, Eq10, Theorem2, Corollary1, Theorem3, Theorem4 };

std::string to_string(CheckKind c);

struct Tolerances {
    double solver = 1e-7;
    double eq10_epsilon = 0.05;
    double eq10_factor = 100.0;
    double bound = 1e-6;  // sweep `satisfied` column
};

/// One inverse-temperature grid entry. A `per_log_d` entry v resolves to
/// beta = v ln d / lambda for each point.
struct BetaEntry {
    std::optional<Beta> beta;
    double per_log_d{0.0};

    Beta resolve(double lambda, Eigen::Index d) const;
    std::string label() const;
};

struct Scenario {
    int schema{kScenarioSchema};
    std::string name;
    std::vector<StateSpec> states;
    std::optional<ChannelSpec> channel;
    std::vector<FreeSetConfig> free_sets;
    std::optional<FreeSetConfig> bipartite_free_set;
    std::vector<double> lambdas;
    std::vector<BetaEntry> betas;
    std::vector<CheckKind> checks;
    std::optional<std::uint64_t> seed;
    Tolerances tol;
};

/// Strict parse: unknown fields and malformed values raise InputError with
/// the JSON path.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

struct RobustnessEntry {
    std::string state;
    std::string free_set;
    RobustnessResult result;
    std::optional<CertificateCheck> certificates;  // not re-checked above kSdpMaxDim
    bool closed_form{false};
};

struct CheckEntry {
    std::string state;
    std::string free_set;
    double lambda{0.0};
    Beta beta = Beta::infinite();
    BoundReport report;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 2, kExitNonConvergence = 3, kExitInputError = 4 };

struct RunReport {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::vector<RobustnessEntry> robustness;
    std::vector<CheckEntry> checks;
    double wall_time_s{0.0};

    int failed() const;
    int skipped() const;
    int nonconverged() const;
    int exit_code() const;
};

/// Evaluates every (state, free set, lambda, beta, check) point; points run
/// in parallel and are reassembled in grid order.
RunReport run_scenario(const Scenario& s, unsigned threads = 0);

/// `wall_time_s` is written only when requested so that reports can be
/// compared byte for byte.
Json to_json(const RunReport& r, bool with_wall_time = true);

struct SweepRow {
    std::string state;
    std::string free_set;
    Eigen::Index d{0};
    int n{0};
    double lambda{0.0};
    Beta beta = Beta::infinite();
    double robustness{0.0};
    double bound{0.0};
    double achieved{0.0};
    bool satisfied{false};
};

/// One row per (state, free set, lambda, beta), sorted by (d, N, lambda,
/// beta) with beta = inf last. `bound` is the advantage lower bound and
/// `achieved` the work ratio under H = lambda Y*.
std::vector<SweepRow> sweep(const Scenario& s, unsigned threads = 0);

inline constexpr const char* kSweepHeader = "state,free_set,d,N,lambda,beta,R,bound,achieved,satisfied";
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace robtherm
