#ifndef MCTSOPT_SELECTION_HPP
#define MCTSOPT_SELECTION_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mctsopt/sense.hpp"

namespace mctsopt {

/// Visit statistics of one child edge as seen by the selection policy.
struct ChildStat {
    std::uint64_t visits = 0;
    double averageObjective = 0.0; // defined only when visits >= 1
};

/// Rank-based exploitation scores for visited children.
///
/// The children are ranked from bad to good by average objective value
/// (for minimization high averages are bad, for maximization low ones are).
/// Rank 1 is the worst child, rank k the best; ties are broken by input
/// position, earlier input ranking worse. The returned scores are aligned
/// with the input order and equal rank / (k*(k+1)/2), so they sum to 1.
std::vector<double> rankScores(std::span<const double> averages, ObjectiveSense sense);

/// Exploitation + exploration value of a visited child:
/// normalizedScore + sqrt(2*ln(parentVisits)/childVisits).
double uctValue(std::uint64_t parentVisits, std::uint64_t childVisits, double normalizedScore);

/// Selection policy over the active children of a node.
///
/// With probability k1/(k1+k2), where k1 counts unvisited and k2 visited
/// children, a uniformly random unvisited child is returned; otherwise the
/// visited child maximizing uctValue (ties broken by smallest input index).
/// `children` must be non-empty; the result is an index into it.
std::size_t selectIndex(std::span<const ChildStat> children, std::uint64_t parentVisits,
                        ObjectiveSense sense, std::mt19937_64& rng);

} // namespace mctsopt

#endif
