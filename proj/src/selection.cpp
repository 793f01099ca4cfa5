#include "mctsopt/selection.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace mctsopt {

std::vector<double> rankScores(std::span<const double> averages, ObjectiveSense sense)
{
    assert(!averages.empty());
    const std::size_t k = averages.size();

    // Order child indices from bad to good. stable_sort keeps equal averages
    // in input order, which makes the earlier child rank worse.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    if (sense == ObjectiveSense::Minimize) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return averages[a] > averages[b]; });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return averages[a] < averages[b]; });
    }

    const double rankSum = static_cast<double>(k) * static_cast<double>(k + 1) / 2.0;
    std::vector<double> scores(k);
    for (std::size_t pos = 0; pos < k; ++pos)
        scores[order[pos]] = static_cast<double>(pos + 1) / rankSum;
    return scores;
}

double uctValue(std::uint64_t parentVisits, std::uint64_t childVisits, double normalizedScore)
{
    assert(parentVisits >= 1 && childVisits >= 1);
    return normalizedScore +
           std::sqrt(2.0 * std::log(static_cast<double>(parentVisits)) /
                     static_cast<double>(childVisits));
}

std::size_t selectIndex(std::span<const ChildStat> children, std::uint64_t parentVisits,
                        ObjectiveSense sense, std::mt19937_64& rng)
{
    assert(!children.empty());
    std::vector<std::size_t> unvisited;
    std::vector<std::size_t> visited;
    for (std::size_t i = 0; i < children.size(); ++i)
        (children[i].visits == 0 ? unvisited : visited).push_back(i);

    // One uniform draw over all children decides both whether to explore an
    // unvisited child (probability k1/(k1+k2)) and, if so, which one.
    const std::size_t k1 = unvisited.size();
    const std::size_t draw =
        std::uniform_int_distribution<std::size_t>(0, children.size() - 1)(rng);
    if (draw < k1)
        return unvisited[draw];

    std::vector<double> averages;
    averages.reserve(visited.size());
    for (std::size_t i : visited)
        averages.push_back(children[i].averageObjective);
    const std::vector<double> scores = rankScores(averages, sense);

    std::size_t best = visited.front();
    double bestValue = -1.0;
    for (std::size_t j = 0; j < visited.size(); ++j) {
        const std::size_t i = visited[j];
        const double value = uctValue(parentVisits, children[i].visits, scores[j]);
        if (value > bestValue) {
            bestValue = value;
            best = i;
        }
    }
    return best;
}

} // namespace mctsopt
