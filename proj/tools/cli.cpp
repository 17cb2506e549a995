#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "kaccess/chord.hpp"
#include "kaccess/cluster.hpp"
#include "kaccess/error.hpp"
#include "kaccess/explore.hpp"
#include "kaccess/io.hpp"
#include "kaccess/pose.hpp"
#include "kaccess/quality.hpp"
#include "kaccess/synthetic.hpp"
#include "kaccess/toy_rl.hpp"

#ifndef KACCESS_VERSION
#define KACCESS_VERSION "0.0.0"
#endif

namespace kaccess::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

fs::path sidecar(const fs::path& primary, std::string_view suffix) {
    return primary.parent_path() / (primary.stem().string() + std::string(suffix));
}

/// Records what a command read and wrote. Paths are stored by file name so
/// manifests from different output directories compare equal.
struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    json parameters = json::object();
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;

    void write(const fs::path& path) const {
        auto describe = [](const std::vector<fs::path>& files) {
            json list = json::array();
            for (const auto& f : files) {
                list.push_back({{"file", f.filename().string()}, {"sha256", sha256_hex(io::read_file(f))}});
            }
            return list;
        };
        json j{{"tool", "kaccess"},
               {"version", KACCESS_VERSION},
               {"command", command},
               {"seed", seed},
               {"parameters", parameters},
               {"inputs", describe(inputs)},
               {"outputs", describe(outputs)}};
        io::write_file(path, io::dump_json(j));
    }
};

fs::path manifest_path(const fs::path& primary) { return fs::path(primary.string() + ".manifest.json"); }

std::string goals_csv(const std::vector<std::size_t>& goals) {
    std::string out = "index\n";
    for (auto g : goals) out += std::to_string(g) + "\n";
    return out;
}

std::vector<std::size_t> read_goals(const fs::path& path) {
    std::istringstream in(io::read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "index") throw ParseError("goals CSV must start with header 'index'");
    std::vector<std::size_t> goals;
    while (std::getline(in, line)) {
        if (!line.empty()) goals.push_back(io::parse_index(line));
    }
    return goals;
}

ClusteringResult load_clusters(const fs::path& path, std::size_t n) {
    auto r = io::load_json(path).get<ClusteringResult>();
    require_valid(r, n);
    return r;
}

// ---------------------------------------------------------------- options

struct GenerateOptions {
    PlantedSpec spec;
    fs::path output;
};

struct EnvironmentOptions {
    EnvironmentSpec env;
    bool envSeedSet = false;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    double closeness = 1e-3;
};

struct EstimateOptions {
    double timeCap = 3.0;
    double floor = kDefaultFloor;
    double closeness = 1e-3;
};

struct ClusterOptions {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    std::size_t restarts = 5;
    std::size_t maxIterations = 1000;
    double alpha = 1.0;
};

struct SweepOptions {
    std::size_t kMin = 1;
    std::size_t kMax = 10;
    double alpha = 1.0;
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
    std::size_t maxIterations = 1000;
};

struct EvaluateOptions {
    double t0 = kDefaultHorizon;
    std::uint64_t seed = 0;
    std::size_t randomSets = 1;
};

struct TrainOptions {
    std::size_t episodes = 2000;
    double exploration = 0.1;
    double learningRate = 0.2;
    double discount = 0.987;
    std::size_t evalInterval = 10;
    double threshold = 0.9;
    std::size_t actions = 16;
    std::size_t episodeSteps = 75;
    std::uint64_t seed = 0;
};

struct ChordOptions {
    double hi = 0.15;
    double lo = 0.05;
};

void add_environment_flags(CLI::App* app, EnvironmentOptions& o) {
    app->add_option("--breakpoints", o.env.breakpoints, "Potential breakpoints")->capture_default_str();
    app->add_option("--valleys", o.env.valleys, "Large-scale valleys in the potential")->capture_default_str();
    app->add_option("--roughness", o.env.roughness, "Breakpoint height jitter")->capture_default_str();
    app->add_option("--speed", o.env.speed, "Travel speed (units/s)")->capture_default_str();
    app->add_option("--barrier-budget", o.env.barrierBudget, "Largest climb a probe can make")->capture_default_str();
    app->add_option("--barrier-penalty", o.env.barrierPenalty, "Seconds per unit of climb")->capture_default_str();
    app->add_option("--env-seed", o.env.seed, "Landscape seed (defaults to --seed)")
        ->each([&o](const std::string&) { o.envSeedSet = true; });
    app->add_option("--count", o.count, "Number of drop samples")->capture_default_str();
    app->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
    app->add_option("--closeness", o.closeness, "Merge tolerance for settled states")->capture_default_str();
}

void add_estimate_flags(CLI::App* app, EstimateOptions& o) {
    app->add_option("--time-cap", o.timeCap, "Probe time cap (s)")->capture_default_str();
    app->add_option("--floor", o.floor, "Accessibility floor")->capture_default_str();
}

void add_sweep_flags(CLI::App* app, SweepOptions& o) {
    app->add_option("--k-min", o.kMin, "Smallest k")->capture_default_str();
    app->add_option("--k-max", o.kMax, "Largest k (clamped to n)")->capture_default_str();
    app->add_option("--alpha", o.alpha, "Singleton penalty weight")->capture_default_str();
    app->add_option("--restarts", o.restarts, "Seeds per k")->capture_default_str();
    app->add_option("--max-iterations", o.maxIterations, "K-Access iteration cap")->capture_default_str();
}

void add_evaluate_flags(CLI::App* app, EvaluateOptions& o) {
    app->add_option("--t0", o.t0, "Exploration horizon (s)")->capture_default_str();
    app->add_option("--random-sets", o.randomSets, "Random comparison sets")->capture_default_str();
}

void add_train_flags(CLI::App* app, TrainOptions& o) {
    app->add_option("--episodes", o.episodes, "Training episodes per arm")->capture_default_str();
    app->add_option("--exploration", o.exploration, "Epsilon for epsilon-greedy")->capture_default_str();
    app->add_option("--learning-rate", o.learningRate, "Q-learning step size")->capture_default_str();
    app->add_option("--discount", o.discount, "Discount factor")->capture_default_str();
    app->add_option("--eval-interval", o.evalInterval, "Episodes between evaluations")->capture_default_str();
    app->add_option("--threshold", o.threshold, "Success rate that counts as learned")->capture_default_str();
    app->add_option("--actions", o.actions, "Actions per state")->capture_default_str();
    app->add_option("--episode-steps", o.episodeSteps, "Commands per episode")->capture_default_str();
}

void add_chord_flags(CLI::App* app, ChordOptions& o) {
    app->add_option("--hi", o.hi, "Highlight threshold")->capture_default_str();
    app->add_option("--lo", o.lo, "Omit threshold")->capture_default_str();
}

// ---------------------------------------------------------------- stages

SettlingEnvironment make_environment(const EnvironmentOptions& o) {
    auto spec = o.env;
    if (!o.envSeedSet) spec.seed = o.seed;
    return SettlingEnvironment::random(spec);
}

struct SweepOutcome {
    SweepResult result;
    const SweepRecord* best = nullptr;
};

SweepOutcome run_sweep(const AccessibilityMatrix& a, const SweepOptions& o, std::uint64_t seed) {
    SweepConfig config{o.kMin, std::min(o.kMax, a.size()), o.alpha, o.restarts, seed, o.maxIterations};
    SweepOutcome out{sweep_k(a, config), nullptr};
    if (!out.result.bestK) {
        const std::string first = out.result.runs.empty() ? "" : out.result.runs.front().error;
        throw NonConvergenceError("every sweep run failed: " + first);
    }
    for (const auto& rec : out.result.best) {
        if (rec.k == *out.result.bestK) out.best = &rec;
    }
    return out;
}

json sweep_reports_json(const SweepResult& s) {
    json records = json::array();
    for (const auto& rec : s.best) {
        records.push_back({{"k", rec.k}, {"quality", rec.report}, {"clustering", rec.result}});
    }
    json failures = json::array();
    for (const auto& run : s.runs) {
        if (!run.error.empty()) failures.push_back({{"k", run.k}, {"seed", run.seed}, {"error", run.error}});
    }
    return {{"bestK", s.bestK.value_or(0)}, {"records", records}, {"failures", failures}};
}

RankedCoverage run_evaluate(const AccessibilityMatrix& a, const ClusteringResult& clusters,
                            const EvaluateOptions& o, std::uint64_t seed) {
    std::vector<InitialStateSet> sets{{clusters.cIndex, "centroids"}};
    for (std::size_t r = 0; r < o.randomSets; ++r) {
        sets.push_back(random_initial_set(a.size(), clusters.cIndex.size(), seed + r, fmt::format("random{}", r)));
    }
    return compare_initializations(a, sets, o.t0);
}

struct TrainOutcome {
    json summary;
    std::string centroidCurve;
    std::string randomCurve;
};

TrainOutcome run_train(const AccessibilityMatrix& a, const std::vector<std::size_t>& goals,
                       const ClusteringResult& clusters, const TrainOptions& o, std::uint64_t seed) {
    RecoveryTask task;
    task.matrix = a;
    task.goalSet = goals;
    task.episodeSteps = o.episodeSteps;
    task.actionsPerState = o.actions;

    LearnerConfig learner;
    learner.episodes = o.episodes;
    learner.explorationRate = o.exploration;
    learner.learningRate = o.learningRate;
    learner.discount = o.discount;
    learner.seed = seed;
    learner.evalInterval = o.evalInterval;

    std::vector<std::size_t> population(a.size());
    std::iota(population.begin(), population.end(), std::size_t{0});

    InitialStateSet centroids{clusters.cIndex, "centroids"};
    auto random = random_initial_set(a.size(), clusters.cIndex.size(), seed, "random");
    auto tc = run_training(task, centroids, learner, population);
    auto tr = run_training(task, random, learner, population);

    auto arm = [&](const InitialStateSet& set, const TrainingResult& t) {
        auto reached = episodes_to_threshold(t.checkpoints, o.threshold);
        json checkpoints = json::array();
        for (const auto& c : t.checkpoints) checkpoints.push_back({c.episodes, c.successRate});
        return json{{"label", set.label},
                    {"initSet", set.indices},
                    {"episodesToThreshold", reached ? json(*reached) : json(nullptr)},
                    {"finalSuccessRate", t.checkpoints.empty() ? 0.0 : t.checkpoints.back().successRate},
                    {"checkpoints", checkpoints}};
    };
    TrainOutcome out;
    out.summary = {{"threshold", o.threshold}, {"arms", {arm(centroids, tc), arm(random, tr)}}};
    out.centroidCurve = curve_csv(tc.curve);
    out.randomCurve = curve_csv(tr.curve);
    return out;
}

/// Lowest-potential tenth of the sampled states (at least one).
std::vector<std::size_t> lowest_states(const std::vector<StateVector>& states) {
    std::vector<std::size_t> order(states.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return states[x].values[1] < states[y].values[1]; });
    order.resize(std::max<std::size_t>(1, states.size() / 10));
    std::sort(order.begin(), order.end());
    return order;
}

std::string states_csv(const std::vector<StateVector>& states) {
    std::ostringstream s;
    io::write_states_csv(s, states);
    return s.str();
}

std::string matrix_text(const fs::path& path, const AccessibilityMatrix& a) {
    if (path.extension() == ".json") return io::dump_json(io::matrix_to_json(a));
    std::ostringstream s;
    io::write_matrix_csv(s, a);
    return s.str();
}

struct ErrorInfo {
    int code;
    const char* kind;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"K-Access: accessibility-based discovery of initial states"};
    app.name("kaccess");
    app.require_subcommand(1);
    app.set_version_flag("--version", KACCESS_VERSION);
    // TOML/INI with one [section] per subcommand, keys named like the flags.
    app.set_config("--config", "", "Config file; usable before or after the subcommand");

    std::function<void()> action;

    // generate
    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Planted-partition accessibility matrix");
    generate->fallthrough();
    generate->add_option("--n", gen.spec.n, "Samples")->capture_default_str();
    generate->add_option("--k-star", gen.spec.kStar, "Planted groups")->capture_default_str();
    generate->add_option("--escape-max", gen.spec.escapeMax)->capture_default_str();
    generate->add_option("--depth-max", gen.spec.depthMax)->capture_default_str();
    generate->add_option("--hop-cost", gen.spec.hopCost)->capture_default_str();
    generate->add_option("--block-prob", gen.spec.blockProb)->capture_default_str();
    generate->add_option("--seed", gen.spec.seed)->capture_default_str();
    generate->add_option("--floor", gen.spec.floor)->capture_default_str();
    generate->add_option("--output", gen.output, "Matrix file (.csv or .json)")->required();
    generate->callback([&] {
        action = [&] {
            const auto data = generate_planted(gen.spec);
            io::save_matrix(gen.output, data.matrix);
            const auto labels = sidecar(gen.output, ".labels.csv");
            std::ostringstream s;
            io::write_labels_csv(s, data.labels);
            io::write_file(labels, s.str());
            Manifest m{"generate", gen.spec.seed,
                       {{"n", gen.spec.n}, {"kStar", gen.spec.kStar}, {"escapeMax", gen.spec.escapeMax},
                        {"depthMax", gen.spec.depthMax}, {"hopCost", gen.spec.hopCost},
                        {"blockProb", gen.spec.blockProb}, {"floor", gen.spec.floor}},
                       {}, {gen.output, labels}};
            m.write(manifest_path(gen.output));
            out << gen.output.string() << '\n';
        };
    });

    // sample
    EnvironmentOptions env;
    fs::path sampleOutput;
    auto* sample = app.add_subcommand("sample", "Sample stable states of a random settling landscape");
    sample->fallthrough();
    add_environment_flags(sample, env);
    sample->add_option("--output", sampleOutput, "States CSV")->required();
    sample->callback([&] {
        action = [&] {
            const auto landscape = make_environment(env);
            const auto states = sample_static_states(landscape, env.count, env.seed, env.closeness);
            io::write_file(sampleOutput, states_csv(states));
            const auto envPath = sidecar(sampleOutput, ".env.json");
            io::write_file(envPath, io::dump_json(environment_to_json(landscape)));
            Manifest m{"sample", env.seed,
                       {{"breakpoints", env.env.breakpoints}, {"count", env.count}, {"states", states.size()}},
                       {}, {sampleOutput, envPath}};
            m.write(manifest_path(sampleOutput));
            out << sampleOutput.string() << '\n';
        };
    });

    // estimate
    EstimateOptions est;
    fs::path estimateInput, estimateEnv, estimateOutput, probeLog;
    auto* estimate = app.add_subcommand("estimate", "Probe all state pairs into an accessibility matrix");
    estimate->fallthrough();
    estimate->add_option("--input", estimateInput, "States CSV")->required();
    estimate->add_option("--env", estimateEnv, "Environment JSON (default: <input>.env.json)");
    estimate->add_option("--closeness", est.closeness)->capture_default_str();
    add_estimate_flags(estimate, est);
    estimate->add_option("--probe-log", probeLog, "Optional JSON-lines probe log");
    estimate->add_option("--output", estimateOutput, "Matrix file")->required();
    estimate->callback([&] {
        action = [&] {
            if (estimateEnv.empty()) estimateEnv = sidecar(estimateInput, ".env.json");
            std::istringstream in(io::read_file(estimateInput));
            const auto states = io::read_states_csv(in);
            const auto landscape = environment_from_json(io::load_json(estimateEnv));
            std::vector<ProbeRecord> log;
            const auto a = estimate_matrix(landscape, states, {est.timeCap, est.floor, est.closeness},
                                           probeLog.empty() ? nullptr : &log);
            require_valid(a);
            io::save_matrix(estimateOutput, a);
            std::vector<fs::path> outputs{estimateOutput};
            if (!probeLog.empty()) {
                io::write_file(probeLog, probe_log_jsonl(log));
                outputs.push_back(probeLog);
            }
            Manifest m{"estimate", 0, {{"timeCap", est.timeCap}, {"floor", est.floor}, {"closeness", est.closeness}},
                       {estimateInput, estimateEnv}, outputs};
            m.write(manifest_path(estimateOutput));
            out << estimateOutput.string() << '\n';
        };
    });

    // cluster
    ClusterOptions clu;
    fs::path clusterInput, clusterOutput;
    auto* cluster = app.add_subcommand("cluster", "Run K-Access for one k");
    cluster->fallthrough();
    cluster->add_option("--input", clusterInput, "Matrix file")->required();
    cluster->add_option("--k", clu.k, "Number of clusters")->required();
    cluster->add_option("--seed", clu.seed)->capture_default_str();
    cluster->add_option("--restarts", clu.restarts, "Seeds tried; best objective kept")->capture_default_str();
    cluster->add_option("--max-iterations", clu.maxIterations)->capture_default_str();
    cluster->add_option("--alpha", clu.alpha, "Singleton penalty for the quality report")->capture_default_str();
    cluster->add_option("--output", clusterOutput, "Clustering JSON")->required();
    cluster->callback([&] {
        action = [&] {
            const auto a = io::load_matrix(clusterInput);
            const auto r = k_access_best_of(a, clu.k, clu.restarts, clu.seed, clu.maxIterations);
            const auto q = quality_index(a, r, clu.alpha);
            io::write_file(clusterOutput, io::dump_json(r));
            const auto qualityPath = sidecar(clusterOutput, ".quality.json");
            io::write_file(qualityPath, io::dump_json(q));
            Manifest m{"cluster", clu.seed,
                       {{"k", clu.k}, {"restarts", clu.restarts}, {"alpha", clu.alpha},
                        {"maxIterations", clu.maxIterations}},
                       {clusterInput}, {clusterOutput, qualityPath}};
            m.write(manifest_path(clusterOutput));
            out << clusterOutput.string() << '\n';
        };
    });

    // sweep
    SweepOptions swp;
    fs::path sweepInput, sweepOutput;
    auto* sweep = app.add_subcommand("sweep", "Quality index over a range of k");
    sweep->fallthrough();
    sweep->add_option("--input", sweepInput, "Matrix file")->required();
    sweep->add_option("--seed", swp.seed, "First seed per k")->capture_default_str();
    add_sweep_flags(sweep, swp);
    sweep->add_option("--output", sweepOutput, "Sweep CSV")->required();
    sweep->callback([&] {
        action = [&] {
            const auto a = io::load_matrix(sweepInput);
            const auto s = run_sweep(a, swp, swp.seed);
            io::write_file(sweepOutput, sweep_runs_csv(s.result));
            const auto reports = sidecar(sweepOutput, ".reports.json");
            const auto best = sidecar(sweepOutput, ".best.json");
            io::write_file(reports, io::dump_json(sweep_reports_json(s.result)));
            io::write_file(best, io::dump_json(s.best->result));
            Manifest m{"sweep", swp.seed,
                       {{"kMin", swp.kMin}, {"kMax", swp.kMax}, {"alpha", swp.alpha}, {"restarts", swp.restarts}},
                       {sweepInput}, {sweepOutput, reports, best}};
            m.write(manifest_path(sweepOutput));
            out << json{{"bestK", *s.result.bestK}, {"index", s.best->report.index}}.dump() << '\n';
        };
    });

    // evaluate
    EvaluateOptions eva;
    fs::path evaluateInput, evaluateClusters, evaluateOutput;
    auto* evaluate = app.add_subcommand("evaluate", "Coverage of centroids vs random initial sets");
    evaluate->fallthrough();
    evaluate->add_option("--input", evaluateInput, "Matrix file")->required();
    evaluate->add_option("--clusters", evaluateClusters, "Clustering JSON")->required();
    evaluate->add_option("--seed", eva.seed)->capture_default_str();
    add_evaluate_flags(evaluate, eva);
    evaluate->add_option("--output", evaluateOutput, "Coverage report JSON")->required();
    evaluate->callback([&] {
        action = [&] {
            const auto a = io::load_matrix(evaluateInput);
            const auto r = load_clusters(evaluateClusters, a.size());
            const auto ranked = run_evaluate(a, r, eva, eva.seed);
            io::write_file(evaluateOutput, io::dump_json(to_json(ranked)));
            const auto csv = sidecar(evaluateOutput, ".csv");
            io::write_file(csv, coverage_csv(ranked));
            Manifest m{"evaluate", eva.seed, {{"t0", eva.t0}, {"randomSets", eva.randomSets}},
                       {evaluateInput, evaluateClusters}, {evaluateOutput, csv}};
            m.write(manifest_path(evaluateOutput));
            out << evaluateOutput.string() << '\n';
        };
    });

    // train
    TrainOptions trn;
    fs::path trainInput, trainGoals, trainClusters, trainOutput;
    auto* train = app.add_subcommand("train", "Tabular learning from centroid vs random initial states");
    train->fallthrough();
    train->add_option("--input", trainInput, "Matrix file")->required();
    train->add_option("--goals", trainGoals, "Goal states CSV (header 'index')")->required();
    train->add_option("--clusters", trainClusters, "Clustering JSON")->required();
    train->add_option("--seed", trn.seed)->capture_default_str();
    add_train_flags(train, trn);
    train->add_option("--output", trainOutput, "Summary JSON")->required();
    train->callback([&] {
        action = [&] {
            const auto a = io::load_matrix(trainInput);
            const auto r = load_clusters(trainClusters, a.size());
            const auto t = run_train(a, read_goals(trainGoals), r, trn, trn.seed);
            io::write_file(trainOutput, io::dump_json(t.summary));
            const auto c = sidecar(trainOutput, ".centroids.csv");
            const auto rnd = sidecar(trainOutput, ".random.csv");
            io::write_file(c, t.centroidCurve);
            io::write_file(rnd, t.randomCurve);
            Manifest m{"train", trn.seed,
                       {{"episodes", trn.episodes}, {"exploration", trn.exploration},
                        {"learningRate", trn.learningRate}, {"discount", trn.discount}},
                       {trainInput, trainGoals, trainClusters}, {trainOutput, c, rnd}};
            m.write(manifest_path(trainOutput));
            out << trainOutput.string() << '\n';
        };
    });

    // export-chord
    ChordOptions chd;
    fs::path chordClusters, chordQuality, chordOutput;
    auto* chord = app.add_subcommand("export-chord", "Inter-cluster accessibility as a chord edge list");
    chord->fallthrough();
    chord->add_option("--clusters", chordClusters, "Clustering JSON")->required();
    chord->add_option("--quality", chordQuality, "Quality report JSON")->required();
    add_chord_flags(chord, chd);
    chord->add_option("--output", chordOutput, "Edge list CSV")->required();
    chord->callback([&] {
        action = [&] {
            const auto r = io::load_json(chordClusters).get<ClusteringResult>();
            const auto q = io::load_json(chordQuality).get<QualityReport>();
            io::write_file(chordOutput, chord_csv(chord_edges(r, q, chd.hi, chd.lo)));
            Manifest m{"export-chord", 0, {{"hi", chd.hi}, {"lo", chd.lo}}, {chordClusters, chordQuality},
                       {chordOutput}};
            m.write(manifest_path(chordOutput));
            out << chordOutput.string() << '\n';
        };
    });

    // pipeline
    EnvironmentOptions penv;
    penv.env.breakpoints = 1000;
    penv.count = 200;
    EstimateOptions pest;
    SweepOptions pswp;
    pswp.kMax = 20;
    EvaluateOptions peva;
    TrainOptions ptrn;
    ChordOptions pchd;
    std::size_t pipelineK = 0;
    fs::path pipelineDir;
    auto* pipeline = app.add_subcommand("pipeline", "Sample, estimate, sweep, cluster, evaluate and train");
    pipeline->fallthrough();
    add_environment_flags(pipeline, penv);
    add_estimate_flags(pipeline, pest);
    add_sweep_flags(pipeline, pswp);
    pipeline->add_option("--k", pipelineK, "Fix k instead of using the sweep's best");
    add_evaluate_flags(pipeline, peva);
    add_train_flags(pipeline, ptrn);
    add_chord_flags(pipeline, pchd);
    pipeline->add_option("--output", pipelineDir, "Output directory")->required();
    pipeline->callback([&] {
        action = [&] {
            fs::create_directories(pipelineDir);
            auto path = [&](const char* name) { return pipelineDir / name; };
            const std::uint64_t seed = penv.seed;

            const auto landscape = make_environment(penv);
            const auto states = sample_static_states(landscape, penv.count, seed, penv.closeness);
            io::write_file(path("states.csv"), states_csv(states));
            io::write_file(path("environment.json"), io::dump_json(environment_to_json(landscape)));

            const auto a = estimate_matrix(landscape, states, {pest.timeCap, pest.floor, penv.closeness});
            require_valid(a);
            io::write_file(path("matrix.csv"), matrix_text(path("matrix.csv"), a));

            const auto s = run_sweep(a, pswp, seed);
            io::write_file(path("sweep.csv"), sweep_runs_csv(s.result));
            io::write_file(path("sweep.reports.json"), io::dump_json(sweep_reports_json(s.result)));

            ClusteringResult clusters;
            QualityReport quality;
            if (pipelineK) {
                clusters = k_access_best_of(a, pipelineK, pswp.restarts, seed, pswp.maxIterations);
                quality = quality_index(a, clusters, pswp.alpha);
            } else {
                clusters = s.best->result;
                quality = s.best->report;
            }
            io::write_file(path("clusters.json"), io::dump_json(clusters));
            io::write_file(path("quality.json"), io::dump_json(quality));
            io::write_file(path("chord.csv"), chord_csv(chord_edges(clusters, quality, pchd.hi, pchd.lo)));

            const auto ranked = run_evaluate(a, clusters, peva, seed);
            io::write_file(path("coverage.json"), io::dump_json(to_json(ranked)));
            io::write_file(path("coverage.csv"), coverage_csv(ranked));

            const auto goals = lowest_states(states);
            io::write_file(path("goals.csv"), goals_csv(goals));
            const auto t = run_train(a, goals, clusters, ptrn, seed);
            io::write_file(path("training.json"), io::dump_json(t.summary));
            io::write_file(path("training.centroids.csv"), t.centroidCurve);
            io::write_file(path("training.random.csv"), t.randomCurve);

            Manifest m{"pipeline", seed,
                       {{"count", penv.count}, {"breakpoints", penv.env.breakpoints}, {"states", states.size()},
                        {"timeCap", pest.timeCap}, {"kMin", pswp.kMin}, {"kMax", pswp.kMax},
                        {"alpha", pswp.alpha}, {"restarts", pswp.restarts}, {"k", clusters.k}, {"t0", peva.t0},
                        {"episodes", ptrn.episodes}},
                       {},
                       {path("states.csv"), path("environment.json"), path("matrix.csv"), path("sweep.csv"),
                        path("sweep.reports.json"), path("clusters.json"), path("quality.json"), path("chord.csv"),
                        path("coverage.json"), path("coverage.csv"), path("goals.csv"), path("training.json"),
                        path("training.centroids.csv"), path("training.random.csv")}};
            m.write(path("manifest.json"));
            out << json{{"states", states.size()}, {"k", clusters.k}, {"index", quality.index}}.dump() << '\n';
        };
    });

    auto fail = [&](ErrorInfo info, const std::string& message) {
        err << json{{"error", info.kind}, {"message", message}, {"exitCode", info.code}}.dump() << '\n';
        return info.code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << KACCESS_VERSION << '\n';
        return kOk;
    } catch (const CLI::FileError& e) {
        return fail({kMissingInput, "missing-input"}, e.what());
    } catch (const CLI::ParseError& e) {
        return fail({kBadArgs, "bad-args"}, e.what());
    }

    try {
        if (action) action();
        return kOk;
    } catch (const MissingInputError& e) {
        return fail({kMissingInput, "missing-input"}, e.what());
    } catch (const NonConvergenceError& e) {
        return fail({kNonConvergence, "non-convergence"}, e.what());
    } catch (const ParseError& e) {
        return fail({kInvalidData, "parse"}, e.what());
    } catch (const InvariantError& e) {
        return fail({kInvalidData, "invariant"}, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail({kInvalidData, "parse"}, e.what());
    } catch (const std::invalid_argument& e) {
        return fail({kBadArgs, "bad-args"}, e.what());
    } catch (const std::out_of_range& e) {
        return fail({kBadArgs, "bad-args"}, e.what());
    } catch (const std::exception& e) {
        return fail({kInternal, "internal"}, e.what());
    }
}

}  // namespace kaccess::cli
