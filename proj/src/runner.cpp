#include "coauth/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "coauth/run_log.hpp"
#include "coauth/simulation.hpp"

namespace coauth {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const char* version_tag() { return "coauth-1.0.0"; }

namespace {

std::string run_dir_name(int pct, int rep) {
    std::ostringstream s;
    s << 'c' << std::setw(3) << std::setfill('0') << pct << "_r" << rep;
    return s.str();
}

void write_manifest(const fs::path& out, const std::string& kind, const Config& cfg, const std::vector<std::string>& outputs,
                    double seconds, long steps) {
    ojson m;
    m["kind"] = kind;
    m["seed"] = cfg.run.seed;
    m["version"] = version_tag();
    m["config"] = ojson::parse(to_json(cfg));
    m["outputs"] = outputs;
    m["wall_clock_seconds"] = seconds;
    m["steps"] = steps;
    std::ofstream f(out / "manifest.json");
    f << m.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

std::string d(double v) { return format_double(v); }
std::string o(const std::optional<double>& v) { return format_optional(v); }

}  // namespace

LabeledRun run_baseline(const Config& base, const fs::path& out) {
    auto t0 = std::chrono::steady_clock::now();
    Config cfg = base;
    cfg.run.strategic_fraction = 0.0;
    Simulation sim(cfg);
    sim.run();
    LabeledRun run{0, 0, cfg.run.seed, sim.data()};
    write_run(out, run.data, cfg, &sim.network());
    std::vector<LabeledRun> one{run};
    write_tables(one, out);
    {
        auto f = open_out(out / "greedy_calibration.json");
        f << greedy_calibration_report(one) << '\n';
    }
    write_manifest(out, "baseline", cfg,
                   {"events.csv", "votes.csv", "papers.csv", "agents.csv", "timeseries.csv", "network.csv", "run.json",
                    "core_outcomes.csv", "ultimatum_dynamics.csv", "ultimatum_gap.csv", "ultimatum_timing.csv",
                    "lotka_stats.csv", "greedy_calibration.json"},
                   seconds_since(t0), cfg.population.horizon);
    return run;
}

std::uint64_t sweep_seed(const Config& cfg, int composition, int replicate) {
    return cfg.random_source().child_seed("composition", static_cast<std::uint64_t>(replicate) * 1000 +
                                                             static_cast<std::uint64_t>(composition));
}

std::vector<LabeledRun> run_sweep(const Config& base, const QNetwork* qnet, const fs::path& out, const SweepOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    if (opt.replicates < 1 || opt.steps < 1) throw std::invalid_argument("sweep needs at least one replicate and step");
    struct Job {
        int composition, replicate;
    };
    std::vector<Job> jobs;
    for (int r = 0; r < opt.replicates; ++r)
        for (int c = 0; c <= opt.steps; ++c) jobs.push_back({c, r});
    if (!qnet && opt.steps > 0) throw std::invalid_argument("sweep over strategic compositions needs a checkpoint");

    std::vector<LabeledRun> runs(jobs.size());
    std::vector<std::string> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                const Job& job = jobs[i];
                Config cfg = base;
                cfg.run.strategic_fraction = static_cast<double>(job.composition) / opt.steps;
                cfg.run.seed = sweep_seed(base, job.composition, job.replicate);
                PolicyHooks hooks;
                hooks.qnet = qnet;
                hooks.epsilon = 0.0;
                Simulation sim(cfg, {}, hooks);
                sim.run();
                int pct = static_cast<int>(std::lround(100.0 * job.composition / opt.steps));
                runs[i] = LabeledRun{pct, job.replicate, cfg.run.seed, sim.data()};
                outputs[i] = run_dir_name(pct, job.replicate);
                write_run(out / outputs[i], runs[i].data, cfg, &sim.network());
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    fs::create_directories(out);
    const int threads = std::max(1, std::min<int>(opt.parallel, static_cast<int>(jobs.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(runs.begin(), runs.end(), [](const LabeledRun& a, const LabeledRun& b) {
        return std::tie(a.strategic_pct, a.replicate) < std::tie(b.strategic_pct, b.replicate);
    });
    std::sort(outputs.begin(), outputs.end());
    write_tables(runs, out);
    for (const char* t : {"core_outcomes.csv", "ultimatum_dynamics.csv", "ultimatum_gap.csv", "ultimatum_timing.csv",
                          "lotka_stats.csv"})
        outputs.emplace_back(t);
    write_manifest(out, "sweep", base, outputs, seconds_since(t0),
                   static_cast<long>(jobs.size()) * base.population.horizon);
    return runs;
}

TrainingResult run_train(const Config& cfg, const fs::path& out) {
    auto t0 = std::chrono::steady_clock::now();
    TrainingResult r = run_training(cfg, out);
    std::vector<std::string> outputs{"curves.csv", "checkpoint.bin"};
    for (int ep = cfg.drl.checkpoint_every; cfg.drl.checkpoint_every > 0 && ep <= cfg.drl.episodes; ep += cfg.drl.checkpoint_every) {
        std::ostringstream name;
        name << "checkpoint_ep" << std::setw(3) << std::setfill('0') << ep << ".bin";
        outputs.push_back(name.str());
    }
    write_manifest(out, "train", cfg, outputs, seconds_since(t0),
                   static_cast<long>(cfg.drl.episodes) * cfg.population.horizon);
    return r;
}

void write_tables(const std::vector<LabeledRun>& runs, const fs::path& out) {
    fs::create_directories(out);
    auto core = open_out(out / "core_outcomes.csv");
    auto dyn = open_out(out / "ultimatum_dynamics.csv");
    auto gap = open_out(out / "ultimatum_gap.csv");
    auto timing = open_out(out / "ultimatum_timing.csv");
    auto lotka = open_out(out / "lotka_stats.csv");
    core << "strategic_pct,replicate,mean_utility,greedy_utility,strategic_utility,advantage,relative_advantage_pct,"
            "completion_rate,destruction_rate,ultimatums_per_paper,accepted_per_paper,withdrawn_per_paper,"
            "terminated_per_paper,gini,matured_papers\n";
    dyn << "strategic_pct,replicate,type,agents,papers_participated,raised,initiation_rate,accepted_share,"
           "withdrawn_share,terminated_share,restraint,destruction_rate,responder_votes,responder_acceptance,"
           "median_issue_week\n";
    gap << "strategic_pct,replicate,gap,ultimatums,accepted,acceptance\n";
    timing << "strategic_pct,replicate,week_from,week_to,greedy_issued,strategic_issued,accepted,withdrawn,terminated\n";
    lotka << "strategic_pct,replicate,type,agents,zero_output,alpha,alpha_r2,alpha_points,mu,sigma,lognormal_r2,"
             "top10_share\n";

    for (const LabeledRun& run : runs) {
        const std::string key = std::to_string(run.strategic_pct) + "," + std::to_string(run.replicate) + ",";
        CoreOutcomes c = core_outcomes(run.data);
        std::optional<double> rel;
        if (c.relative_advantage) rel = 100.0 * *c.relative_advantage;
        core << key << d(c.mean_utility) << ',' << o(c.greedy_utility) << ',' << o(c.strategic_utility) << ','
             << o(c.advantage) << ',' << o(rel) << ',' << d(c.completion_rate) << ',' << d(c.destruction_rate) << ','
             << d(c.ultimatums_per_paper) << ',' << d(c.accepted_per_paper) << ',' << d(c.withdrawn_per_paper) << ','
             << d(c.terminated_per_paper) << ',' << o(c.gini) << ',' << c.matured << '\n';

        UltimatumAggregates agg = ultimatum_aggregates(run.data);
        for (PolicyTag t : {PolicyTag::greedy, PolicyTag::strategic}) {
            const InitiatorStats& s = agg.by_type[static_cast<std::size_t>(t)];
            dyn << key << policy_name(t) << ',' << s.agents << ',' << s.participated << ',' << s.raised << ','
                << o(s.initiation_rate) << ',' << o(s.accepted_share) << ',' << o(s.withdrawn_share) << ','
                << o(s.terminated_share) << ',' << o(s.restraint) << ',' << o(s.destruction_rate) << ',' << s.votes
                << ',' << o(s.responder_acceptance) << ',' << o(s.median_week) << '\n';

            LotkaStats l = lotka_stats(run.data, t);
            lotka << key << policy_name(t) << ',' << l.agents << ',' << l.zero_output << ',';
            if (l.power_law) lotka << d(l.power_law->alpha) << ',' << o(l.power_law->r2) << ',' << l.power_law->points;
            else lotka << "---,---,---";
            lotka << ',';
            if (l.lognormal) lotka << d(l.lognormal->mu) << ',' << d(l.lognormal->sigma) << ',' << o(l.lognormal->r2);
            else lotka << "---,---,---";
            lotka << ',' << o(l.top10) << '\n';
        }
        for (int g = 0; g < kGapBuckets; ++g) {
            const auto u = static_cast<std::size_t>(g);
            gap << key << g + 1 << ',' << agg.gap_total[u] << ',' << agg.gap_accepted[u] << ','
                << o(agg.gap_acceptance[u]) << '\n';
        }
        const auto& gh = agg.by_type[0].week_histogram;
        const auto& sh = agg.by_type[1].week_histogram;
        for (std::size_t b = 0; b < agg.outcomes_by_week.size(); ++b) {
            const auto& w = agg.outcomes_by_week[b];
            timing << key << b * kTimingBinWeeks << ',' << (b + 1) * kTimingBinWeeks - 1 << ','
                   << (b < gh.size() ? gh[b] : 0) << ',' << (b < sh.size() ? sh[b] : 0) << ',' << w[0] << ',' << w[1]
                   << ',' << w[2] << '\n';
        }
    }
}

std::string greedy_calibration_report(const std::vector<LabeledRun>& runs) {
    struct Band {
        const char* name;
        double lo, hi;
        std::vector<double> values;
    };
    std::vector<Band> bands = {
        {"destruction_rate_per_paper", 0.08, 0.16, {}},
        {"completion_rate", 0.80, 0.90, {}},
        {"ultimatums_per_paper", 0.7, 1.2, {}},
        {"greedy_initiation_rate", 0.2, 0.4, {}},
        {"greedy_responder_acceptance", 0.6, 0.8, {}},
        {"greedy_termination_share", 0.10, 0.16, {}},
    };
    for (const LabeledRun& run : runs) {
        CoreOutcomes c = core_outcomes(run.data);
        const InitiatorStats& g = ultimatum_aggregates(run.data).by_type[0];
        bands[0].values.push_back(c.destruction_rate);
        bands[1].values.push_back(c.completion_rate);
        bands[2].values.push_back(c.ultimatums_per_paper);
        if (g.initiation_rate) bands[3].values.push_back(*g.initiation_rate);
        if (g.responder_acceptance) bands[4].values.push_back(*g.responder_acceptance);
        if (g.destruction_rate) bands[5].values.push_back(*g.destruction_rate);
    }
    ojson report = ojson::array();
    for (const Band& b : bands) {
        ojson row;
        row["metric"] = b.name;
        row["band"] = {b.lo, b.hi};
        if (b.values.empty()) {
            row["mean"] = nullptr;
            row["within_band"] = false;
        } else {
            double m = 0.0;
            for (double v : b.values) m += v;
            m /= static_cast<double>(b.values.size());
            row["mean"] = m;
            row["within_band"] = m >= b.lo && m <= b.hi;
        }
        report.push_back(row);
    }
    return report.dump(2);
}

std::vector<LabeledRun> analyze(const fs::path& logdir, const fs::path& out) {
    std::vector<fs::path> dirs;
    if (fs::exists(logdir / "run.json")) {
        dirs.push_back(logdir);
    } else {
        if (!fs::is_directory(logdir)) throw std::runtime_error("no such log directory: " + logdir.string());
        for (const auto& e : fs::directory_iterator(logdir))
            if (e.is_directory() && fs::exists(e.path() / "run.json")) dirs.push_back(e.path());
        std::sort(dirs.begin(), dirs.end());
        if (dirs.empty()) throw std::runtime_error("no run directories under " + logdir.string());
    }
    std::vector<LabeledRun> runs;
    std::map<int, int> seen;
    for (const fs::path& dir : dirs) {
        LabeledRun r;
        r.data = read_run(dir);
        r.strategic_pct = static_cast<int>(std::lround(100.0 * r.data.strategic_fraction));
        r.replicate = seen[r.strategic_pct]++;
        std::ifstream in(dir / "run.json");
        r.seed = nlohmann::json::parse(in).at("config").at("run").at("seed").get<std::uint64_t>();
        runs.push_back(std::move(r));
    }
    std::stable_sort(runs.begin(), runs.end(), [](const LabeledRun& a, const LabeledRun& b) {
        return std::tie(a.strategic_pct, a.replicate) < std::tie(b.strategic_pct, b.replicate);
    });
    write_tables(runs, out);
    return runs;
}

}  // namespace coauth
