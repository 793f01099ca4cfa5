#ifndef MCTSOPT_ORACLES_HPP
#define MCTSOPT_ORACLES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mctsopt/knapsack.hpp"
#include "mctsopt/qcsp.hpp"

// Independent exact references used by tests and the acceptance suite only.
// They share no bound or domain-reduction code with the adapters and refuse
// loudly (std::domain_error) when an input exceeds their size guards instead
// of approximating.
namespace mctsopt::oracles {

struct QcspBruteResult {
    std::int64_t relaxOptimum = 0;    // best makespan over all assignments
    std::int64_t originalOptimum = 0; // best makespan over original-feasible ones
    std::vector<int> relaxArgmin;
    std::vector<int> originalArgmin;
};

/// Enumerates all m^n crane assignments. Guard: m^n <= 1e8.
QcspBruteResult qcspBruteForce(const qcsp::Instance& instance);

struct TickResult {
    bool feasible = false;
    std::vector<std::int64_t> completion; // valid only when feasible
    std::int64_t makespan = 0;
};

/// Discrete-time simulation of the move-ASAP schedule. Each tick, idle cranes
/// try to start their next assigned bay, rightmost crane first; a start is
/// allowed only if the working cranes keep strictly increasing positions with
/// one bay per crane in between and nobody is pushed off the ship. A stall
/// with work remaining means the assignment is infeasible.
/// Guard: sum of processing times <= 1e6 ticks.
TickResult tickSimulate(const qcsp::Instance& instance, std::span<const int> sigma);

struct KnapsackDpResult {
    std::int64_t optimum = 0;
    std::vector<std::uint8_t> take; // one optimal solution, sorted item order
};

/// Textbook capacity-indexed dynamic program. Guard: n*c <= 1e9.
KnapsackDpResult knapsackDp(const knapsack::Instance& instance);

} // namespace mctsopt::oracles

#endif
