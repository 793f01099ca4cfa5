// Command-line front end: instance generation, single solves, solution
// validation and the seeded multi-run benchmark harness.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "mctsopt/engine.hpp"
#include "mctsopt/knapsack.hpp"
#include "mctsopt/qcsp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string readFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void writeFile(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string formatSeconds(double seconds)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.3f", seconds);
    return buffer;
}

std::string formatGapPercent(double objective, double rootBound)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4f", 100.0 * std::abs(objective - rootBound) /
                                                     rootBound);
    return buffer;
}

struct GenerateOptions {
    std::string family;
    int n = 0;
    int m = 4;
    double f = 0.5;
    std::int64_t c = 10'000'000'000;
    std::uint64_t seed = 0;
    std::string out;
};

int runGenerate(const GenerateOptions& options)
{
    std::string text;
    if (options.family == "qcsp") {
        text = mctsopt::qcsp::serializeInstance(
            mctsopt::qcsp::generateInstance(options.n, options.m, options.seed));
    } else if (options.family == "spanner") {
        text = mctsopt::knapsack::serializeInstance(
            mctsopt::knapsack::generateSpanner(options.n, options.f, options.seed));
    } else {
        text = mctsopt::knapsack::serializeInstance(
            mctsopt::knapsack::generateExp(options.n, options.seed, options.c));
    }
    if (options.out.empty())
        std::cout << text;
    else
        writeFile(options.out, text);
    return kExitOk;
}

struct SolveOptions {
    std::string problem;
    std::string instancePath;
    double timeBudget = 10.0;
    std::uint32_t beam = 10;
    std::uint64_t seed = 0;
    std::uint64_t maxIterations = 0;
    std::string out;
};

mctsopt::SearchParams toParams(const SolveOptions& options)
{
    mctsopt::SearchParams params;
    params.timeBudgetSeconds = options.timeBudget;
    params.beamWidth = options.beam;
    params.seed = options.seed;
    if (options.maxIterations > 0)
        params.maxIterations = options.maxIterations;
    return params;
}

// objective, rootBound, gapPercent, seconds, iterations, exhausted
void printSolveRow(std::int64_t objective, const std::string& rootBound, double rootBoundValue,
                   double seconds, bool deterministic, std::uint64_t iterations, bool exhausted)
{
    std::cout << objective << ',' << rootBound << ','
              << formatGapPercent(static_cast<double>(objective), rootBoundValue) << ','
              << formatSeconds(deterministic ? 0.0 : seconds) << ',' << iterations << ','
              << (exhausted ? 1 : 0) << '\n';
}

int runSolveQcsp(const SolveOptions& options)
{
    const auto instance = mctsopt::qcsp::parseInstance(readFile(options.instancePath));
    mctsopt::qcsp::Adapter adapter(instance);
    const std::int64_t rootBound = adapter.bound(adapter.rootState());

    const auto start = std::chrono::steady_clock::now();
    const auto report = mctsopt::solve(adapter, toParams(options));
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    if (!report.foundSolution()) {
        std::cerr << "no original-feasible solution found\n";
        return kExitInfeasible;
    }
    if (!options.out.empty()) {
        std::ostringstream text;
        text << report.bestObjective << '\n';
        for (std::size_t b = 0; b < report.bestSolution.size(); ++b)
            text << (b ? " " : "") << report.bestSolution[b];
        text << '\n';
        writeFile(options.out, text.str());
    }
    printSolveRow(report.bestObjective, std::to_string(rootBound),
                  static_cast<double>(rootBound), seconds, options.maxIterations > 0,
                  report.iterationsCompleted + report.iterationsPruned, report.exhausted);
    return kExitOk;
}

int runSolveKnapsack(const SolveOptions& options)
{
    const auto instance = mctsopt::knapsack::parseInstance(readFile(options.instancePath));
    mctsopt::knapsack::Adapter adapter(instance);
    const auto rootBound = adapter.bound(adapter.rootState());

    const auto start = std::chrono::steady_clock::now();
    const auto report = mctsopt::solve(adapter, toParams(options));
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    if (!report.foundSolution()) {
        std::cerr << "no feasible solution found\n";
        return kExitInfeasible;
    }
    if (!options.out.empty()) {
        // Solution files carry the decisions in input order.
        std::vector<int> inputOrder(instance.size(), 0);
        for (int i = 0; i < instance.size(); ++i)
            inputOrder[instance.originalIndex[i]] = report.bestSolution[i];
        std::ostringstream text;
        text << report.bestObjective << '\n';
        for (int i = 0; i < instance.size(); ++i)
            text << (i ? " " : "") << inputOrder[i];
        text << '\n';
        writeFile(options.out, text.str());
    }
    printSolveRow(report.bestObjective, rootBound.toDecimalString(), rootBound.toDouble(),
                  seconds, options.maxIterations > 0,
                  report.iterationsCompleted + report.iterationsPruned, report.exhausted);
    return kExitOk;
}

struct ValidateOptions {
    std::string problem;
    std::string instancePath;
    std::string solutionPath;
};

std::pair<std::int64_t, std::vector<int>> parseSolutionFile(const std::string& text,
                                                            std::size_t expected)
{
    std::istringstream in(text);
    std::int64_t claimed = 0;
    if (!(in >> claimed))
        throw std::runtime_error("solution: expected the objective on line 1");
    std::vector<int> values(expected);
    for (std::size_t i = 0; i < expected; ++i)
        if (!(in >> values[i]))
            throw std::runtime_error("solution: expected " + std::to_string(expected) +
                                     " values on line 2");
    return {claimed, std::move(values)};
}

int runValidate(const ValidateOptions& options)
{
    if (options.problem == "qcsp") {
        const auto instance = mctsopt::qcsp::parseInstance(readFile(options.instancePath));
        const auto [claimed, sigma] =
            parseSolutionFile(readFile(options.solutionPath), instance.bays);
        for (int v : sigma) {
            if (v < 0 || v >= instance.cranes) {
                std::cout << "invalid: crane index " << v << " out of range\n";
                return kExitInfeasible;
            }
        }
        if (const auto reason = mctsopt::qcsp::checkOriginalFeasible(instance, sigma)) {
            std::cout << *reason << '\n';
            return kExitInfeasible;
        }
        const auto makespan = mctsopt::qcsp::earliestTimeFull(instance, sigma).makespan;
        if (makespan != claimed) {
            std::cout << "objective mismatch: claimed " << claimed << ", recomputed " << makespan
                      << '\n';
            return kExitInfeasible;
        }
        std::cout << "ok: makespan " << makespan << '\n';
        return kExitOk;
    }

    const auto instance = mctsopt::knapsack::parseInstance(readFile(options.instancePath));
    const auto [claimed, bits] =
        parseSolutionFile(readFile(options.solutionPath), instance.size());
    std::int64_t profit = 0;
    std::int64_t weight = 0;
    for (int sorted = 0; sorted < instance.size(); ++sorted) {
        const int bit = bits[instance.originalIndex[sorted]];
        if (bit != 0 && bit != 1) {
            std::cout << "invalid: decisions must be 0 or 1\n";
            return kExitInfeasible;
        }
        if (bit) {
            profit += instance.items[sorted].profit;
            weight += instance.items[sorted].weight;
        }
    }
    if (weight > instance.capacity) {
        std::cout << "infeasible: weight " << weight << " exceeds capacity " << instance.capacity
                  << '\n';
        return kExitInfeasible;
    }
    if (profit != claimed) {
        std::cout << "objective mismatch: claimed " << claimed << ", recomputed " << profit
                  << '\n';
        return kExitInfeasible;
    }
    std::cout << "ok: profit " << profit << '\n';
    return kExitOk;
}

struct BenchConfig {
    std::string problem = "qcsp";
    std::vector<std::string> instances;
    std::vector<std::uint32_t> beams{1, 10, 100};
    std::vector<double> times{10, 100};
    int runs = 25;
    std::uint64_t seedBase = 1;
    std::uint64_t maxIterations = 0; // > 0 switches to deterministic mode
};

std::vector<std::string> splitList(const std::string& value)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ','))
        parts.push_back(item);
    return parts;
}

BenchConfig parseBenchConfig(const std::string& text)
{
    BenchConfig config;
    std::istringstream in(text);
    std::string line;
    int lineNumber = 0;
    while (std::getline(in, line)) {
        ++lineNumber;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        std::string key;
        row >> key;
        std::string value;
        std::getline(row, value);
        const auto first = value.find_first_not_of(" \t");
        value = first == std::string::npos ? std::string{} : value.substr(first);
        if (key == "problem") {
            config.problem = value;
        } else if (key == "instance") {
            config.instances.push_back(value);
        } else if (key == "beams") {
            config.beams.clear();
            for (const auto& part : splitList(value))
                config.beams.push_back(static_cast<std::uint32_t>(std::stoul(part)));
        } else if (key == "times") {
            config.times.clear();
            for (const auto& part : splitList(value))
                config.times.push_back(std::stod(part));
        } else if (key == "runs") {
            config.runs = std::stoi(value);
        } else if (key == "seed-base") {
            config.seedBase = std::stoull(value);
        } else if (key == "max-iterations") {
            config.maxIterations = std::stoull(value);
        } else {
            throw std::runtime_error("config line " + std::to_string(lineNumber) +
                                     ": unknown key \"" + key + "\"");
        }
    }
    if (config.instances.empty())
        throw std::runtime_error("config: at least one instance is required");
    if (config.problem != "qcsp" && config.problem != "knapsack")
        throw std::runtime_error("config: problem must be qcsp or knapsack");
    if (config.runs < 1)
        throw std::runtime_error("config: runs must be positive");
    return config;
}

struct BenchCell {
    std::size_t instanceIndex = 0;
    std::uint32_t beam = 0;
    double time = 0;
};

struct BenchRow {
    std::uint64_t feasibleRuns = 0;
    double meanObjective = 0;
    std::int64_t bestObjective = 0;
    std::int64_t worstObjective = 0;
    double meanGapPercent = 0;
    double meanSeconds = 0;
};

template <typename Adapter>
BenchRow runBenchCell(const Adapter& adapter, double rootBoundValue, bool maximize,
                      const BenchCell& cell, const BenchConfig& config)
{
    BenchRow row;
    double objectiveSum = 0;
    double secondsSum = 0;
    for (int run = 0; run < config.runs; ++run) {
        mctsopt::SearchParams params;
        params.timeBudgetSeconds = cell.time;
        params.beamWidth = cell.beam;
        params.seed = config.seedBase + static_cast<std::uint64_t>(run);
        if (config.maxIterations > 0)
            params.maxIterations = config.maxIterations;

        const auto start = std::chrono::steady_clock::now();
        const auto report = mctsopt::solve(adapter, params);
        secondsSum +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!report.foundSolution())
            continue;

        const std::int64_t objective = report.bestObjective;
        if (row.feasibleRuns == 0) {
            row.bestObjective = objective;
            row.worstObjective = objective;
        } else {
            if (maximize ? objective > row.bestObjective : objective < row.bestObjective)
                row.bestObjective = objective;
            if (maximize ? objective < row.worstObjective : objective > row.worstObjective)
                row.worstObjective = objective;
        }
        ++row.feasibleRuns;
        objectiveSum += static_cast<double>(objective);
    }
    if (row.feasibleRuns > 0) {
        row.meanObjective = objectiveSum / static_cast<double>(row.feasibleRuns);
        row.meanGapPercent =
            100.0 * std::abs(row.meanObjective - rootBoundValue) / rootBoundValue;
    }
    row.meanSeconds = config.maxIterations > 0 ? 0.0 : secondsSum / config.runs;
    return row;
}

struct BenchOptions {
    std::string configPath;
    int threads = 0;
    int runsOverride = 0;
    std::string out;
};

int runBench(const BenchOptions& options)
{
    BenchConfig config = parseBenchConfig(readFile(options.configPath));
    if (options.runsOverride > 0)
        config.runs = options.runsOverride;

    // Load every instance up front; the harness charges solve time only.
    std::vector<mctsopt::qcsp::Adapter> qcspAdapters;
    std::vector<mctsopt::knapsack::Adapter> knapsackAdapters;
    std::vector<double> rootBounds;
    const bool maximize = config.problem == "knapsack";
    for (const auto& path : config.instances) {
        if (maximize) {
            knapsackAdapters.emplace_back(mctsopt::knapsack::parseInstance(readFile(path)));
            rootBounds.push_back(
                knapsackAdapters.back().bound(knapsackAdapters.back().rootState()).toDouble());
        } else {
            qcspAdapters.emplace_back(mctsopt::qcsp::parseInstance(readFile(path)));
            rootBounds.push_back(static_cast<double>(
                qcspAdapters.back().bound(qcspAdapters.back().rootState())));
        }
    }

    std::vector<BenchCell> cells;
    for (std::size_t i = 0; i < config.instances.size(); ++i)
        for (std::uint32_t beam : config.beams)
            for (double time : config.times)
                cells.push_back(BenchCell{i, beam, time});

    // Independent cells may run in parallel; every run owns its tree and RNG
    // and rows are emitted in configuration order regardless of scheduling.
    std::vector<BenchRow> rows(cells.size());
    std::atomic<std::size_t> nextCell{0};
    const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = options.threads > 0
                                 ? static_cast<unsigned>(options.threads)
                                 : std::min<unsigned>(hardware, cells.size());
    auto worker = [&] {
        for (;;) {
            const std::size_t index = nextCell.fetch_add(1);
            if (index >= cells.size())
                return;
            const BenchCell& cell = cells[index];
            rows[index] = maximize
                              ? runBenchCell(knapsackAdapters[cell.instanceIndex],
                                             rootBounds[cell.instanceIndex], true, cell, config)
                              : runBenchCell(qcspAdapters[cell.instanceIndex],
                                             rootBounds[cell.instanceIndex], false, cell, config);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& thread : pool)
        thread.join();

    std::ostringstream csv;
    csv << "instance,beam,time,runs,feasibleRuns,meanObjective,bestObjective,worstObjective,"
           "meanGapPercent,meanSeconds\n";
    char buffer[128];
    for (std::size_t index = 0; index < cells.size(); ++index) {
        const BenchCell& cell = cells[index];
        const BenchRow& row = rows[index];
        std::snprintf(buffer, sizeof buffer, "%.4f,%lld,%lld,%.4f,%.3f",
                      row.meanObjective, static_cast<long long>(row.bestObjective),
                      static_cast<long long>(row.worstObjective), row.meanGapPercent,
                      row.meanSeconds);
        csv << config.instances[cell.instanceIndex] << ',' << cell.beam << ',' << cell.time << ','
            << config.runs << ',' << row.feasibleRuns << ',' << buffer << '\n';
    }
    // Grid averages across instances, one row per parameter setting.
    for (std::uint32_t beam : config.beams) {
        for (double time : config.times) {
            double objective = 0;
            double gap = 0;
            double seconds = 0;
            std::size_t counted = 0;
            for (std::size_t index = 0; index < cells.size(); ++index) {
                if (cells[index].beam != beam || cells[index].time != time)
                    continue;
                objective += rows[index].meanObjective;
                gap += rows[index].meanGapPercent;
                seconds += rows[index].meanSeconds;
                ++counted;
            }
            std::snprintf(buffer, sizeof buffer, "%.4f,,,%.4f,%.3f",
                          objective / static_cast<double>(counted), gap / counted,
                          seconds / counted);
            csv << "ALL," << beam << ',' << time << ',' << config.runs << ",," << buffer << '\n';
        }
    }

    if (options.out.empty())
        std::cout << csv.str();
    else
        writeFile(options.out, csv.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Anytime tree search solver for crane scheduling and 0-1 knapsack"};
    app.require_subcommand(1);

    GenerateOptions generateOptions;
    auto* generate = app.add_subcommand("generate", "Generate a benchmark instance");
    generate->add_option("--family", generateOptions.family, "Instance family")
        ->required()
        ->check(CLI::IsMember({"qcsp", "spanner", "exp"}));
    generate->add_option("--n", generateOptions.n, "Bay / item count")->required();
    generate->add_option("--m", generateOptions.m, "Crane count (qcsp)");
    generate->add_option("--f", generateOptions.f, "Capacity fraction (spanner)");
    generate->add_option("--c", generateOptions.c, "Capacity override (exp)");
    generate->add_option("--seed", generateOptions.seed, "Generator seed");
    generate->add_option("--out", generateOptions.out, "Output path (default stdout)");

    SolveOptions solveOptions;
    auto* solveCmd = app.add_subcommand("solve", "Solve an instance file");
    solveCmd->add_option("--problem", solveOptions.problem, "Problem type")
        ->required()
        ->check(CLI::IsMember({"qcsp", "knapsack"}));
    solveCmd->add_option("instance", solveOptions.instancePath, "Instance file")->required();
    solveCmd->add_option("--time", solveOptions.timeBudget, "Time budget in seconds")
        ->check(CLI::PositiveNumber);
    solveCmd->add_option("--beam", solveOptions.beam, "Beam width")->check(CLI::PositiveNumber);
    solveCmd->add_option("--seed", solveOptions.seed, "Random seed");
    solveCmd->add_option("--max-iterations", solveOptions.maxIterations,
                         "Iteration budget replacing the clock (deterministic)");
    solveCmd->add_option("--out", solveOptions.out, "Solution file path");

    ValidateOptions validateOptions;
    auto* validate = app.add_subcommand("validate", "Check a solution file");
    validate->add_option("--problem", validateOptions.problem, "Problem type")
        ->required()
        ->check(CLI::IsMember({"qcsp", "knapsack"}));
    validate->add_option("instance", validateOptions.instancePath, "Instance file")->required();
    validate->add_option("solution", validateOptions.solutionPath, "Solution file")->required();

    BenchOptions benchOptions;
    auto* bench = app.add_subcommand("bench", "Run a benchmark grid from a config file");
    bench->add_option("config", benchOptions.configPath, "Config file")->required();
    bench->add_option("--threads", benchOptions.threads, "Worker threads (default: auto)");
    bench->add_option("--runs", benchOptions.runsOverride, "Override the configured run count");
    bench->add_option("--out", benchOptions.out, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed())
            return runGenerate(generateOptions);
        if (solveCmd->parsed())
            return solveOptions.problem == "qcsp" ? runSolveQcsp(solveOptions)
                                                  : runSolveKnapsack(solveOptions);
        if (validate->parsed())
            return runValidate(validateOptions);
        return runBench(benchOptions);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}
