#ifndef MCTSOPT_SENSE_HPP
#define MCTSOPT_SENSE_HPP

namespace mctsopt {

/// Optimization direction. Every "better/worse" comparison in the solver is
/// expressed through this value; flipping it reverses all of them.
enum class ObjectiveSense { Minimize, Maximize };

/// True when candidate strictly improves on reference.
template <typename T>
constexpr bool strictlyBetter(const T& candidate, const T& reference, ObjectiveSense sense)
{
    return sense == ObjectiveSense::Minimize ? candidate < reference : candidate > reference;
}

/// True when a subtree with this bound can still contain a solution strictly
/// better than the incumbent. The negation is the prune condition.
template <typename Bound, typename Objective>
constexpr bool boundCanBeat(const Bound& bound, const Objective& incumbent, ObjectiveSense sense)
{
    return sense == ObjectiveSense::Minimize ? bound < incumbent : bound > incumbent;
}

} // namespace mctsopt

#endif
