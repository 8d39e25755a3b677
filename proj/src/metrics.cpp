#include "coauth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coauth {

double gini(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("gini of an empty list");
    std::vector<double> x(values.begin(), values.end());
    double total = 0.0;
    for (double v : x) {
        if (v < 0.0) throw std::invalid_argument("gini requires non-negative values");
        total += v;
    }
    if (!(total > 0.0)) throw std::invalid_argument("gini requires at least one positive value");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (2.0 * (static_cast<double>(i) + 1.0) - n - 1.0) * x[i];
    return acc / (n * total);
}

std::vector<std::pair<double, double>> ccdf(std::span<const double> values) {
    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end());
    std::vector<std::pair<double, double>> out;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && x[i] == x[i - 1]) continue;
        out.emplace_back(x[i], static_cast<double>(x.size() - i) / n);
    }
    return out;
}

namespace {

struct Ols {
    double slope, intercept;
    std::optional<double> r2;
};

Ols ols(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Ols r{};
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.intercept = my - r.slope * mx;
    if (syy > 0.0) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double e = y[i] - (r.intercept + r.slope * x[i]);
            ssr += e * e;
        }
        r.r2 = 1.0 - ssr / syy;
    }
    return r;
}

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

FitResult fit_power_law(std::span<const std::pair<double, double>> points, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail fraction must lie in (0,1]");
    std::size_t take = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(points.size())));
    std::vector<double> lx, ly;
    FitResult f;
    f.model = "power-law";
    for (std::size_t i = points.size() - take; i < points.size(); ++i) {
        auto [x, p] = points[i];
        if (x <= 0.0 || p <= 0.0) continue;
        if (lx.empty()) f.x_min = x;
        f.x_max = x;
        lx.push_back(std::log(x));
        ly.push_back(std::log(p));
    }
    if (lx.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 tail points");
    Ols r = ols(lx, ly);
    f.alpha = -r.slope;
    f.r2 = r.r2;
    f.points = static_cast<int>(lx.size());
    return f;
}

FitResult fit_lognormal(std::span<const double> counts) {
    if (counts.empty()) throw std::invalid_argument("lognormal fit of an empty list");
    FitResult f;
    f.model = "lognormal";
    double s = 0.0;
    for (double c : counts) {
        if (c < 1.0) throw std::invalid_argument("lognormal fit requires counts >= 1");
        s += std::log(c);
    }
    const double n = static_cast<double>(counts.size());
    f.mu = s / n;
    double ss = 0.0;
    for (double c : counts) ss += (std::log(c) - f.mu) * (std::log(c) - f.mu);
    f.sigma = std::sqrt(ss / n);

    auto pts = ccdf(counts);
    f.x_min = pts.front().first;
    f.x_max = pts.back().first;
    f.points = static_cast<int>(pts.size());
    if (f.sigma > 0.0 && pts.size() >= 2) {
        std::vector<double> obs, pred;
        for (auto [x, p] : pts) {
            double surv = 0.5 * std::erfc((std::log(x) - f.mu) / (f.sigma * std::sqrt(2.0)));
            if (surv <= 0.0) continue;
            obs.push_back(std::log(p));
            pred.push_back(std::log(surv));
        }
        double mean = std::accumulate(obs.begin(), obs.end(), 0.0) / static_cast<double>(obs.size());
        double tot = 0.0, res = 0.0;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            tot += (obs[i] - mean) * (obs[i] - mean);
            res += (obs[i] - pred[i]) * (obs[i] - pred[i]);
        }
        if (tot > 0.0) f.r2 = 1.0 - res / tot;
    }
    return f;
}

double top_share(std::span<const double> values, double fraction) {
    if (values.empty()) return 0.0;
    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end(), std::greater<>());
    double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (!(total > 0.0)) return 0.0;
    auto take = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(x.size()) - 1e-9));
    take = std::clamp<std::size_t>(take, 1, x.size());
    return std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(take), 0.0) / total;
}

ErBaseline er_baselines(double n, double mean_degree) {
    if (!(mean_degree > 1.0)) throw std::invalid_argument("mean degree must exceed 1");
    return {mean_degree / n, std::log(n) / std::log(mean_degree)};
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two equal-length series");
    return ols(x, y).slope;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation needs two equal-length series");
    auto rx = ranks(x);
    auto ry = ranks(y);
    double sx = 0.0, sy = 0.0;
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
    double cov = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        sx += (rx[i] - mx) * (rx[i] - mx);
        sy += (ry[i] - my) * (ry[i] - my);
    }
    if (!(sx > 0.0 && sy > 0.0)) return 0.0;
    return cov / std::sqrt(sx * sy);
}

namespace {

std::optional<double> ratio(long num, long den) {
    if (den <= 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> median(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t tag(PolicyTag p) { return static_cast<std::size_t>(p); }

}  // namespace

UltimatumAggregates ultimatum_aggregates(const RunData& run) {
    UltimatumAggregates agg;
    for (const AgentRow& a : run.agents) {
        InitiatorStats& s = agg.by_type[tag(a.policy)];
        ++s.agents;
        s.participated += a.counters.participated;
    }
    std::array<std::vector<double>, 2> weeks;
    for (const UltimatumEvent& e : run.events) {
        InitiatorStats& s = agg.by_type[tag(e.issuer_policy)];
        ++s.raised;
        std::size_t col = 0;
        switch (e.outcome) {
            case Outcome::accepted: ++s.accepted; col = 0; break;
            case Outcome::withdrawn: ++s.withdrawn; col = 1; break;
            case Outcome::terminated: ++s.terminated; col = 2; break;
        }
        for (const Vote& v : e.votes) {
            InitiatorStats& r = agg.by_type[tag(v.policy)];
            ++r.votes;
            if (v.accept) ++r.yes_votes;
        }
        int gap = std::clamp(e.from_pos - e.to_pos, 1, kGapBuckets);
        ++agg.gap_total[static_cast<std::size_t>(gap - 1)];
        if (e.outcome == Outcome::accepted) ++agg.gap_accepted[static_cast<std::size_t>(gap - 1)];

        std::size_t bin = static_cast<std::size_t>(e.week / kTimingBinWeeks);
        if (s.week_histogram.size() <= bin) s.week_histogram.resize(bin + 1, 0);
        ++s.week_histogram[bin];
        if (agg.outcomes_by_week.size() <= bin) agg.outcomes_by_week.resize(bin + 1, {0, 0, 0});
        ++agg.outcomes_by_week[bin][col];
        weeks[tag(e.issuer_policy)].push_back(e.week);
    }
    for (std::size_t t = 0; t < 2; ++t) {
        InitiatorStats& s = agg.by_type[t];
        s.initiation_rate = ratio(s.raised, s.participated);
        s.accepted_share = ratio(s.accepted, s.raised);
        s.withdrawn_share = ratio(s.withdrawn, s.raised);
        s.terminated_share = ratio(s.terminated, s.raised);
        s.restraint = ratio(s.withdrawn, s.withdrawn + s.terminated);
        s.destruction_rate = ratio(s.terminated, s.raised);
        s.responder_acceptance = ratio(s.yes_votes, s.votes);
        s.median_week = median(weeks[t]);
    }
    for (std::size_t g = 0; g < kGapBuckets; ++g) agg.gap_acceptance[g] = ratio(agg.gap_accepted[g], agg.gap_total[g]);
    return agg;
}

CoreOutcomes core_outcomes(const RunData& run) {
    CoreOutcomes c;
    int max_id = -1;
    for (const PaperRow& p : run.papers) max_id = std::max(max_id, p.id);
    std::vector<char> matured(static_cast<std::size_t>(max_id + 1), 0);
    for (const PaperRow& p : run.papers) {
        if (!p.matured) continue;
        matured[static_cast<std::size_t>(p.id)] = 1;
        ++c.matured;
        if (p.status == PaperStatus::completed) ++c.completed;
        if (p.status == PaperStatus::terminated) ++c.terminated;
    }
    long acc = 0, wd = 0, term = 0;
    for (const UltimatumEvent& e : run.events) {
        if (e.paper_id < 0 || e.paper_id > max_id || !matured[static_cast<std::size_t>(e.paper_id)]) continue;
        if (e.outcome == Outcome::accepted) ++acc;
        else if (e.outcome == Outcome::withdrawn) ++wd;
        else ++term;
    }
    if (c.matured > 0) {
        const double m = static_cast<double>(c.matured);
        c.completion_rate = c.completed / m;
        c.destruction_rate = c.terminated / m;
        c.accepted_per_paper = acc / m;
        c.withdrawn_per_paper = wd / m;
        c.terminated_per_paper = term / m;
        c.ultimatums_per_paper = (acc + wd + term) / m;
    }

    std::vector<double> all;
    std::array<double, 2> sum{0.0, 0.0};
    std::array<long, 2> count{0, 0};
    for (const AgentRow& a : run.agents) {
        all.push_back(a.utility);
        sum[tag(a.policy)] += a.utility;
        ++count[tag(a.policy)];
    }
    if (!all.empty()) c.mean_utility = std::accumulate(all.begin(), all.end(), 0.0) / static_cast<double>(all.size());
    if (count[0] > 0) c.greedy_utility = sum[0] / static_cast<double>(count[0]);
    if (count[1] > 0) c.strategic_utility = sum[1] / static_cast<double>(count[1]);
    if (c.greedy_utility && c.strategic_utility) {
        c.advantage = *c.strategic_utility - *c.greedy_utility;
        if (*c.greedy_utility > 0.0) c.relative_advantage = *c.advantage / *c.greedy_utility;
    }
    if (std::any_of(all.begin(), all.end(), [](double v) { return v > 0.0; })) c.gini = gini(all);
    return c;
}

LotkaStats lotka_stats(const RunData& run, PolicyTag type) {
    LotkaStats s;
    std::vector<double> output, positive;
    for (const AgentRow& a : run.agents) {
        if (a.policy != type) continue;
        ++s.agents;
        double c = static_cast<double>(a.counters.completed);
        output.push_back(c);
        if (c >= 1.0) positive.push_back(c);
        else ++s.zero_output;
    }
    if (output.empty()) return s;
    s.top10 = top_share(output, 0.10);
    if (!positive.empty()) {
        s.lognormal = fit_lognormal(positive);
        auto pts = ccdf(positive);
        try {
            s.power_law = fit_power_law(pts, 0.5);
        } catch (const std::invalid_argument&) {
        }
    }
    return s;
}

}  // namespace coauth
