#include "mctsopt/qcsp.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mctsopt::qcsp {

Instance::Instance(int craneCount, std::vector<std::int64_t> processingTimes)
    : bays(static_cast<int>(processingTimes.size()))
    , cranes(craneCount)
    , processing(std::move(processingTimes))
{
    if (cranes < 1 || cranes > bays)
        throw std::invalid_argument("qcsp: need 1 <= m <= n");
    for (std::int64_t p : processing)
        if (p < 1)
            throw std::invalid_argument("qcsp: processing times must be positive integers");

    suffixMaxP.assign(bays + 1, 0);
    suffixSumP.assign(bays + 1, 0);
    for (int b = bays - 1; b >= 0; --b) {
        suffixMaxP[b] = std::max(processing[b], suffixMaxP[b + 1]);
        suffixSumP[b] = processing[b] + suffixSumP[b + 1];
    }
}

EarliestTimes earliestTimeFull(const Instance& instance, std::span<const int> sigma)
{
    const int n = instance.bays;
    const int m = instance.cranes;
    if (static_cast<int>(sigma.size()) != n)
        throw std::invalid_argument("qcsp: sigma length must equal the bay count");
    for (int v : sigma)
        if (v < 0 || v >= m)
            throw std::invalid_argument("qcsp: sigma values must be crane indices");

    EarliestTimes times;
    times.cranes = m;
    times.bays = n;
    times.values.assign(static_cast<std::size_t>(m) * n, 0);
    auto at = [&](int k, int b) -> std::int64_t& {
        return times.values[static_cast<std::size_t>(k) * n + b];
    };

    for (int b = 0; b < n; ++b) {
        for (int k = m - 1; k >= 0; --k) {
            at(k, b) = b >= 1 ? at(k, b - 1) : 0;
            if (sigma[b] == k)
                at(k, b) += instance.processing[b];
            // Crane k has to wait for crane k+1.
            if (k + 1 < m && at(k + 1, b) > at(k, b))
                at(k, b) = at(k + 1, b);
        }
    }
    times.makespan = at(0, n - 1);
    return times;
}

std::vector<std::int64_t> completionTimes(const Instance& instance, std::span<const int> sigma,
                                          const EarliestTimes& times)
{
    // c_b is the instant crane sigma_b finishes bay b: its arrival after
    // clearing bay b-1 plus the processing time. Waiting for the right
    // neighbour only delays moving past the bay, not finishing it.
    std::vector<std::int64_t> completion(instance.bays);
    for (int b = 0; b < instance.bays; ++b) {
        const std::int64_t arrival = b >= 1 ? times.at(sigma[b], b - 1) : 0;
        completion[b] = arrival + instance.processing[b];
    }
    return completion;
}

namespace {

// One inner-loop pass of the dynamic program over the current column.
void advanceColumn(const Instance& instance, std::span<std::int64_t> column,
                   std::int64_t& slackSum, int bay, int crane)
{
    const int m = instance.cranes;
    for (int k = m - 1; k >= 0; --k) {
        if (crane == k)
            column[k] += instance.processing[bay];
        if (k + 1 < m && column[k + 1] > column[k])
            column[k] = column[k + 1];
    }
    std::int64_t slack = 0;
    for (int k = 1; k < m; ++k)
        slack += column[0] - column[k];
    slackSum = slack;
}

std::int64_t boundFromColumn(const Instance& instance, std::span<const std::int64_t> column,
                             std::int64_t slackSum, int prefixLength)
{
    const int n = instance.bays;
    const int m = instance.cranes;
    const int b = prefixLength;
    if (b == n)
        return column[0];

    // LB1: the remaining longest bay goes to the earliest available crane.
    const std::int64_t lb1 = column[m - 1] + instance.suffixMaxP[b];

    // LB2: remaining work first levels all cranes with the first one, then is
    // spread evenly over min(m, n-b) cranes.
    const std::int64_t remaining = instance.suffixSumP[b] - slackSum;
    const std::int64_t spread = std::min<std::int64_t>(m, n - b);
    std::int64_t lb2 = column[0];
    if (remaining > 0)
        lb2 += (remaining + spread - 1) / spread;

    return std::max(lb1, lb2);
}

} // namespace

void pushState(const Instance& instance, State& state, int crane)
{
    assert(crane >= 0 && crane < instance.cranes);
    assert(state.level() < static_cast<std::size_t>(instance.bays));
    advanceColumn(instance, state.column, state.slackSum, static_cast<int>(state.level()), crane);
    state.prefix.push_back(crane);
}

std::int64_t lowerBound(const Instance& instance, const State& state)
{
    return boundFromColumn(instance, state.column, state.slackSum,
                           static_cast<int>(state.level()));
}

std::vector<int> reducedDomain(const Instance& instance, const State& state)
{
    const int n = instance.bays;
    const int m = instance.cranes;
    const int b = static_cast<int>(state.level());
    assert(b < n);

    // Push-off constraints: crane k needs k bays to its left and m-1-k to its
    // right, so k <= b and m-k <= n-b.
    const int lo = std::max(0, m - (n - b));
    const int hi = std::min(m - 1, b);

    std::vector<int> domain;
    domain.reserve(hi - lo + 1);
    for (int k = lo; k <= hi; ++k) {
        // Equal column values make the assignment to the right crane of the
        // pair dominated, provided the left crane is itself assignable here
        // (the dominance swap needs it). Crane lo therefore always survives.
        if (k > lo && state.column[k - 1] == state.column[k])
            continue;
        domain.push_back(k);
    }
    assert(!domain.empty());
    return domain;
}

std::vector<int> heuristicComplete(const Instance& instance, const State& state)
{
    const int n = instance.bays;

    State current;
    current.prefix = state.prefix;
    current.prefix.reserve(n);
    current.column = state.column;
    current.slackSum = state.slackSum;

    std::vector<std::int64_t> scratchColumn(instance.cranes);
    while (current.level() < static_cast<std::size_t>(n)) {
        const int bay = static_cast<int>(current.level());
        const std::vector<int> domain = reducedDomain(instance, current);
        int bestCrane = domain.front();
        std::int64_t bestBound = -1;
        for (int crane : domain) {
            std::copy(current.column.begin(), current.column.end(), scratchColumn.begin());
            std::int64_t scratchSlack = current.slackSum;
            advanceColumn(instance, scratchColumn, scratchSlack, bay, crane);
            const std::int64_t candidate =
                boundFromColumn(instance, scratchColumn, scratchSlack, bay + 1);
            if (bestBound < 0 || candidate < bestBound) {
                bestBound = candidate;
                bestCrane = crane;
            }
        }
        pushState(instance, current, bestCrane);
    }
    return current.prefix;
}

std::optional<std::string> checkOriginalFeasible(const Instance& instance,
                                                 std::span<const int> sigma)
{
    const int n = instance.bays;
    const int m = instance.cranes;

    for (int b = 0; b < n; ++b) {
        if (sigma[b] > b || m - sigma[b] > n - b) {
            std::ostringstream msg;
            msg << "infeasible: crane " << sigma[b] << " on bay " << b
                << " pushes cranes off the ship";
            return msg.str();
        }
    }

    const EarliestTimes times = earliestTimeFull(instance, sigma);
    const std::vector<std::int64_t> completion = completionTimes(instance, sigma, times);
    for (int b = 0; b < n; ++b) {
        const std::int64_t startB = completion[b] - instance.processing[b];
        for (int b2 = b + 1; b2 < n; ++b2) {
            const std::int64_t startB2 = completion[b2] - instance.processing[b2];
            const bool overlap = startB < completion[b2] && startB2 < completion[b];
            if (!overlap)
                continue;
            if (sigma[b] >= sigma[b2]) {
                std::ostringstream msg;
                msg << "infeasible: crossing at pair (" << b << "," << b2 << ")";
                return msg.str();
            }
            if (sigma[b2] - sigma[b] > b2 - b) {
                std::ostringstream msg;
                msg << "infeasible: spacing at pair (" << b << "," << b2 << ")";
                return msg.str();
            }
        }
    }
    return std::nullopt;
}

Instance generateInstance(int bays, int cranes, std::uint64_t seed)
{
    if (cranes < 1 || cranes > bays)
        throw std::invalid_argument("qcsp: need 1 <= m <= n");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(30, 100);
    std::vector<std::int64_t> processing(bays);
    for (auto& p : processing)
        p = dist(rng);
    return Instance(cranes, std::move(processing));
}

Instance parseInstance(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("line 1: expected \"n m\"");
    std::istringstream header(line);
    long long n = 0;
    long long m = 0;
    if (!(header >> n >> m) || n < 1)
        throw std::invalid_argument("line 1: expected \"n m\" with positive n");
    if (m < 1 || m > n)
        throw std::invalid_argument("line 1: need 1 <= m <= n");
    if (!std::getline(in, line))
        throw std::invalid_argument("line 2: expected processing times");
    std::istringstream body(line);
    std::vector<std::int64_t> processing(n);
    for (long long b = 0; b < n; ++b) {
        if (!(body >> processing[b]) || processing[b] < 1)
            throw std::invalid_argument("line 2: expected " + std::to_string(n) +
                                        " positive integers");
    }
    std::int64_t trailing;
    if (body >> trailing)
        throw std::invalid_argument("line 2: too many values");
    return Instance(static_cast<int>(m), std::move(processing));
}

std::string serializeInstance(const Instance& instance)
{
    std::ostringstream out;
    out << instance.bays << ' ' << instance.cranes << '\n';
    for (int b = 0; b < instance.bays; ++b) {
        if (b > 0)
            out << ' ';
        out << instance.processing[b];
    }
    out << '\n';
    return out.str();
}

State Adapter::rootState() const
{
    State state;
    state.prefix.reserve(instance_.bays);
    state.column.assign(instance_.cranes, 0);
    state.slackSum = 0;
    return state;
}

std::vector<int> Adapter::reducedDomain(const State& state, std::size_t level) const
{
    assert(level == state.level());
    (void)level;
    return qcsp::reducedDomain(instance_, state);
}

} // namespace mctsopt::qcsp
