#include "coauth/run_log.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace coauth {

std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : "---"; }

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "'");
    return v;
}

long to_long(const std::string& s) {
    long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("bad integer '" + s + "'");
    return v;
}

int to_int(const std::string& s) { return static_cast<int>(to_long(s)); }

PolicyTag to_policy(const std::string& s) {
    if (s == "greedy") return PolicyTag::greedy;
    if (s == "strategic") return PolicyTag::strategic;
    throw std::runtime_error("bad policy '" + s + "'");
}

Outcome to_outcome(const std::string& s) {
    if (s == "accepted") return Outcome::accepted;
    if (s == "withdrawn") return Outcome::withdrawn;
    if (s == "terminated") return Outcome::terminated;
    throw std::runtime_error("bad outcome '" + s + "'");
}

PaperStatus to_status(const std::string& s) {
    if (s == "active") return PaperStatus::active;
    if (s == "completed") return PaperStatus::completed;
    if (s == "terminated") return PaperStatus::terminated;
    throw std::runtime_error("bad status '" + s + "'");
}

// Calls `row` for each data line with its cells; checks the column count.
template <typename F>
void read_csv(const std::filesystem::path& path, std::size_t columns, F row) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != columns)
            throw std::runtime_error(path.filename().string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(columns) + " columns");
        row(cells);
    }
}

}  // namespace

void write_events(const RunData& run, std::ostream& out) {
    out << "paper_id,step,week,duration,issuer_id,issuer_policy,from_pos,to_pos,outcome\n";
    for (const UltimatumEvent& e : run.events)
        out << e.paper_id << ',' << e.step << ',' << e.week << ',' << e.duration << ',' << e.issuer << ','
            << policy_name(e.issuer_policy) << ',' << e.from_pos << ',' << e.to_pos << ',' << outcome_name(e.outcome)
            << '\n';
}

void write_votes(const RunData& run, std::ostream& out) {
    out << "paper_id,step,issuer_id,voter_id,voter_policy,voter_pos,vote\n";
    for (const UltimatumEvent& e : run.events)
        for (const Vote& v : e.votes)
            out << e.paper_id << ',' << e.step << ',' << e.issuer << ',' << v.voter << ',' << policy_name(v.policy)
                << ',' << v.position << ',' << (v.accept ? "accept" : "refuse") << '\n';
}

void write_papers(const RunData& run, std::ostream& out) {
    out << "paper_id,start_step,end_step,duration,size,status,matured,authors\n";
    for (const PaperRow& p : run.papers) {
        out << p.id << ',' << p.start_step << ',' << p.end_step << ',' << p.duration << ',' << p.size << ','
            << status_name(p.status) << ',' << (p.matured ? 1 : 0) << ',';
        for (std::size_t i = 0; i < p.authors.size(); ++i) out << (i ? ";" : "") << p.authors[i];
        out << '\n';
    }
}

void write_agents(const RunData& run, std::ostream& out) {
    out << "agent_id,policy,exploration,participated,completed,raised,agreed,refused,pulled,insisted,destroyed,utility\n";
    for (const AgentRow& a : run.agents) {
        const CareerCounters& c = a.counters;
        out << a.id << ',' << policy_name(a.policy) << ',' << format_double(a.exploration) << ',' << c.participated
            << ',' << c.completed << ',' << c.raised << ',' << c.agreed << ',' << c.refused << ',' << c.pulled << ','
            << c.insisted << ',' << c.destroyed << ',' << format_double(a.utility) << '\n';
    }
}

void write_timeseries(const RunData& run, std::ostream& out) {
    out << "step,spawned,active,completed,terminated,mean_utility,utility_std,gini,clustering,components,density,"
           "avg_path_length,mean_degree,giant_size\n";
    for (const StepRecord& r : run.timeseries) {
        out << r.step << ',' << r.spawned << ',' << r.active << ',' << r.completed << ',' << r.terminated << ','
            << format_double(r.mean_utility) << ',' << format_double(r.utility_std) << ',' << opt(r.gini) << ',';
        if (r.network) {
            const NetworkStats& s = *r.network;
            out << format_double(s.clustering) << ',' << s.components << ',' << format_double(s.density) << ','
                << format_double(s.avg_path_length) << ',' << format_double(s.mean_degree) << ',' << s.giant_size;
        } else {
            out << ",,,,,";
        }
        out << '\n';
    }
}

void write_run(const std::filesystem::path& dir, const RunData& run, const Config& cfg, const FriendshipNetwork* net) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("events.csv");
        write_events(run, f);
    }
    {
        auto f = open("votes.csv");
        write_votes(run, f);
    }
    {
        auto f = open("papers.csv");
        write_papers(run, f);
    }
    {
        auto f = open("agents.csv");
        write_agents(run, f);
    }
    {
        auto f = open("timeseries.csv");
        write_timeseries(run, f);
    }
    if (net) {
        auto f = open("network.csv");
        write_edge_list(*net, f);
    }
    nlohmann::ordered_json j;
    j["horizon"] = run.horizon;
    j["strategic_fraction"] = run.strategic_fraction;
    j["agents"] = run.agents.size();
    j["papers"] = run.papers.size();
    j["ultimatums"] = run.events.size();
    j["config"] = nlohmann::ordered_json::parse(to_json(cfg));
    auto f = open("run.json");
    f << j.dump(2) << '\n';
}

RunData read_run(const std::filesystem::path& dir) {
    RunData run;
    {
        std::ifstream in(dir / "run.json");
        if (!in) throw std::runtime_error("cannot open " + (dir / "run.json").string());
        auto j = nlohmann::json::parse(in);
        run.horizon = j.at("horizon").get<int>();
        run.strategic_fraction = j.at("strategic_fraction").get<double>();
    }
    std::map<std::pair<int, int>, std::size_t> index;  // (paper, step) -> event
    read_csv(dir / "events.csv", 9, [&](const std::vector<std::string>& c) {
        UltimatumEvent e;
        e.paper_id = to_int(c[0]);
        e.step = to_int(c[1]);
        e.week = to_int(c[2]);
        e.duration = to_int(c[3]);
        e.issuer = to_int(c[4]);
        e.issuer_policy = to_policy(c[5]);
        e.from_pos = to_int(c[6]);
        e.to_pos = to_int(c[7]);
        e.outcome = to_outcome(c[8]);
        index[{e.paper_id, e.step}] = run.events.size();
        run.events.push_back(std::move(e));
    });
    read_csv(dir / "votes.csv", 7, [&](const std::vector<std::string>& c) {
        auto it = index.find({to_int(c[0]), to_int(c[1])});
        if (it == index.end()) throw std::runtime_error("vote without a matching ultimatum");
        Vote v;
        v.voter = to_int(c[3]);
        v.policy = to_policy(c[4]);
        v.position = to_int(c[5]);
        v.accept = c[6] == "accept";
        run.events[it->second].votes.push_back(v);
    });
    read_csv(dir / "papers.csv", 8, [&](const std::vector<std::string>& c) {
        PaperRow p;
        p.id = to_int(c[0]);
        p.start_step = to_int(c[1]);
        p.end_step = to_int(c[2]);
        p.duration = to_int(c[3]);
        p.size = to_int(c[4]);
        p.status = to_status(c[5]);
        p.matured = c[6] == "1";
        for (const auto& a : split(c[7], ';')) p.authors.push_back(to_int(a));
        run.papers.push_back(std::move(p));
    });
    read_csv(dir / "agents.csv", 12, [&](const std::vector<std::string>& c) {
        AgentRow a;
        a.id = to_int(c[0]);
        a.policy = to_policy(c[1]);
        a.exploration = to_double(c[2]);
        a.counters.participated = to_long(c[3]);
        a.counters.completed = to_long(c[4]);
        a.counters.raised = to_long(c[5]);
        a.counters.agreed = to_long(c[6]);
        a.counters.refused = to_long(c[7]);
        a.counters.pulled = to_long(c[8]);
        a.counters.insisted = to_long(c[9]);
        a.counters.destroyed = to_long(c[10]);
        a.utility = to_double(c[11]);
        run.agents.push_back(a);
    });
    read_csv(dir / "timeseries.csv", 14, [&](const std::vector<std::string>& c) {
        StepRecord r;
        r.step = to_int(c[0]);
        r.spawned = to_long(c[1]);
        r.active = to_long(c[2]);
        r.completed = to_long(c[3]);
        r.terminated = to_long(c[4]);
        r.mean_utility = to_double(c[5]);
        r.utility_std = to_double(c[6]);
        if (!c[7].empty()) r.gini = to_double(c[7]);
        if (!c[8].empty()) {
            NetworkStats s;
            s.clustering = to_double(c[8]);
            s.components = to_int(c[9]);
            s.density = to_double(c[10]);
            s.avg_path_length = to_double(c[11]);
            s.mean_degree = to_double(c[12]);
            s.giant_size = to_int(c[13]);
            r.network = s;
        }
        run.timeseries.push_back(std::move(r));
    });
    return run;
}

}  // namespace coauth
