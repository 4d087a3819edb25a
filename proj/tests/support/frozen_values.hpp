#pragma once

// Values printed by dump_oracles and frozen here. The tests compare the
// library against these numbers and, separately, the oracles against them.

namespace frozen {

inline constexpr long long kStabilizerCount[4] = {0, 6, 60, 1080};

// Golden state of dimension d under H = d |g><g| (lambda = 1) at
// beta = v ln d, v = 1e2 and 1e4.
struct GoldenPoint {
    int d;
    double per_log_d;
    double ratio;
    double theorem1_bound;
    double cost_ratio;
    double corollary1_bound;
};

inline constexpr GoldenPoint kGolden[] = {
    {2, 1e2, 2.0, 2.0, 0.5, 0.5},
    {4, 1e2, 3.97641248909057, 3.97641248909057, 0.251482964290937, 0.251482964290937},
    {8, 1e2, 7.93510235423621, 7.93510235423621, 0.126022318976912, 0.126022318976912},
    {2, 1e4, 2.0, 2.0, 0.5, 0.5},
    {4, 1e4, 3.9997622744642, 3.99976227446419, 0.250014858729063, 0.250014858729063},
    {8, 1e4, 7.999345011811, 7.999345011811, 0.125010235028431, 0.125010235028431},
};

// Gibbs weights of lambda c |y><y| on C^2 at beta lambda c = 1.
inline constexpr double kRankOneWeightY = 0.2689414213699951;
inline constexpr double kRankOneWeightPerp = 0.7310585786300049;

// Choi-state robustness of the T gate against the two-qubit stabilizer
// hull, recorded from the solver as a regression constant.
inline constexpr double kTGateChoiStabilizer = 0.1715728751;

}  // namespace frozen
