#include "ecosim/summary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"

namespace ecosim {

std::size_t nearest_rank(double q, std::size_t n) {
    if (n == 0) return 0;
    const double exact = q * static_cast<double>(n);
    const double nearest = std::round(exact);
    double rank = std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact) ? nearest
                                                                            : std::ceil(exact);
    rank = std::clamp(rank, 1.0, static_cast<double>(n));
    return static_cast<std::size_t>(rank);
}

double percentile(std::span<const double> values, double q) {
    if (values.empty()) throw DataError("percentile of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted[nearest_rank(q, sorted.size()) - 1];
}

Distribution describe(std::span<const double> values) {
    if (values.empty()) throw DataError("cannot describe an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    Distribution d;
    d.min = sorted.front();
    d.max = sorted.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    d.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - d.mean) * (v - d.mean);
        d.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    d.p5 = sorted[nearest_rank(0.05, n) - 1];
    d.median = sorted[nearest_rank(0.50, n) - 1];
    d.p95 = sorted[nearest_rank(0.95, n) - 1];
    return d;
}

ModeHistogram mode_histogram(std::span<const double> values) {
    if (values.empty()) throw DataError("histogram of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    ModeHistogram h;
    h.min = sorted.front();
    const double range = sorted.back() - sorted.front();
    if (!(range > 0.0) || !std::isfinite(range)) {
        h.counts = {n};
        h.mode_midpoint = h.min;
        return h;
    }

    const double iqr = sorted[nearest_rank(0.75, n) - 1] - sorted[nearest_rank(0.25, n) - 1];
    std::size_t bins;
    if (iqr > 0.0) {
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
        bins = static_cast<std::size_t>(std::max(1.0, std::ceil(range / width)));
        bins = std::min(bins, std::max<std::size_t>(n, 1));
    } else {
        bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
    }
    h.bin_width = range / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    for (double v : sorted) {
        auto k = static_cast<std::size_t>(std::floor((v - h.min) / h.bin_width));
        h.counts[std::min(k, bins - 1)] += 1;
    }
    h.mode_bin = static_cast<std::size_t>(
        std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
    h.mode_midpoint = h.min + (static_cast<double>(h.mode_bin) + 0.5) * h.bin_width;
    return h;
}

namespace {

ScenarioPoint point(const IterationOutcome& o, const DacPricing& pricing) {
    return ScenarioPoint{o.iteration, o.total_emissions, o.total_cost, o.turnover_ratio,
                         dac_cost(o.total_emissions, pricing)};
}

template <typename F>
std::vector<double> column(std::span<const IterationOutcome> outcomes, F&& field) {
    std::vector<double> out;
    out.reserve(outcomes.size());
    for (const auto& o : outcomes) out.push_back(field(o));
    return out;
}

}  // namespace

SimulationSummary summarize(std::span<const IterationOutcome> outcomes, const DacPricing& pricing) {
    if (outcomes.empty()) throw DataError("cannot summarize zero outcomes");
    const std::size_t n = outcomes.size();

    SimulationSummary s;
    s.iterations = n;
    s.dac_price = pricing.usd_per_tonne;
    const auto& first = outcomes.front().count_by_action;
    s.buildings = first[Action::Keep] + first[Action::Demolish] + first[Action::Renovate] +
                  first[Action::Replace];

    // Outcomes ranked by total emissions, iteration order breaking ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return outcomes[a].total_emissions < outcomes[b].total_emissions;
    });

    const std::size_t lo = order[nearest_rank(0.05, n) - 1];
    const std::size_t hi = order[nearest_rank(0.95, n) - 1];
    s.optimistic = point(outcomes[lo], pricing);
    s.pessimistic = point(outcomes[hi], pricing);

    const auto totals = column(outcomes, [](const auto& o) { return o.total_emissions; });
    s.histogram = mode_histogram(totals);
    // Nearest outcome to the mode-bin midpoint, restricted to the
    // [optimistic, pessimistic] band so the three scenarios stay ordered.
    std::size_t best = lo;
    double best_distance = std::abs(outcomes[lo].total_emissions - s.histogram.mode_midpoint);
    for (std::size_t rank = nearest_rank(0.05, n) - 1; rank < nearest_rank(0.95, n); ++rank) {
        const std::size_t i = order[rank];
        const double distance = std::abs(outcomes[i].total_emissions - s.histogram.mode_midpoint);
        if (distance < best_distance) {
            best = i;
            best_distance = distance;
        }
    }
    s.probable = point(outcomes[best], pricing);

    s.total_emissions = describe(totals);
    s.operational_emissions =
        describe(column(outcomes, [](const auto& o) { return o.operational_emissions; }));
    s.total_cost = describe(column(outcomes, [](const auto& o) { return o.total_cost; }));
    s.turnover_ratio = describe(column(outcomes, [](const auto& o) { return o.turnover_ratio; }));

    for (Action a : kActions) {
        double emissions = 0.0, cost = 0.0, count = 0.0;
        for (const auto& o : outcomes) {
            emissions += o.emissions_by_action[a];
            cost += o.cost_by_action[a];
            count += static_cast<double>(o.count_by_action[a]);
        }
        s.mean_emissions_by_action[a] = emissions / static_cast<double>(n);
        s.mean_cost_by_action[a] = cost / static_cast<double>(n);
        s.mean_count_by_action[a] = count / static_cast<double>(n);
    }

    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[outcomes[i].params.lifespan_threshold].push_back(i);
    for (const auto& [lifespan, members] : groups) {
        LifespanBreakdown b;
        b.lifespan_threshold = lifespan;
        b.count = members.size();
        std::vector<double> group_totals;
        double cost = 0.0, turnover = 0.0;
        PerAction<double> by_action;
        for (std::size_t i : members) {
            const auto& o = outcomes[i];
            group_totals.push_back(o.total_emissions);
            cost += o.total_cost;
            turnover += o.turnover_ratio;
            for (Action a : kActions) by_action[a] += o.emissions_by_action[a];
        }
        const auto m = static_cast<double>(members.size());
        b.total_emissions = describe(group_totals);
        b.mean_total_cost = cost / m;
        b.mean_turnover_ratio = turnover / m;
        for (Action a : kActions) b.mean_emissions_by_action[a] = by_action[a] / m;
        s.by_lifespan.push_back(std::move(b));
    }

    for (int d = 0; d < 10; ++d) {
        const std::size_t begin = n * static_cast<std::size_t>(d) / 10;
        const std::size_t end = n * static_cast<std::size_t>(d + 1) / 10;
        if (begin == end) continue;
        DecileBreakdown b;
        b.decile = d + 1;
        b.count = end - begin;
        double total = 0.0;
        for (std::size_t rank = begin; rank < end; ++rank) {
            const auto& o = outcomes[order[rank]];
            total += o.total_emissions;
            const auto features = feature_values(o.params);
            for (std::size_t f = 0; f < features.size(); ++f) b.mean_features[f] += features[f];
        }
        const auto m = static_cast<double>(b.count);
        b.mean_total_emissions = total / m;
        for (double& v : b.mean_features) v /= m;
        s.deciles.push_back(b);
    }
    return s;
}

namespace {

nlohmann::json to_json(const Distribution& d) {
    return {{"min", d.min},   {"max", d.max},       {"mean", d.mean}, {"stddev", d.stddev},
            {"p5", d.p5},     {"median", d.median}, {"p95", d.p95}};
}

nlohmann::json to_json(const ScenarioPoint& p) {
    return {{"iteration", p.iteration},
            {"total_emissions", p.total_emissions},
            {"total_cost", p.total_cost},
            {"turnover_ratio", p.turnover_ratio},
            {"dac_cost", p.dac_cost}};
}

template <typename T>
nlohmann::json to_json(const PerAction<T>& values) {
    nlohmann::json j = nlohmann::json::object();
    for (Action a : kActions) j[std::string(to_string(a))] = values[a];
    return j;
}

}  // namespace

nlohmann::json to_json(const SimulationSummary& s) {
    nlohmann::json j;
    j["iterations"] = s.iterations;
    j["buildings"] = s.buildings;
    j["dac_price"] = s.dac_price;
    j["scenarios"] = {{"optimistic", to_json(s.optimistic)},
                      {"probable", to_json(s.probable)},
                      {"pessimistic", to_json(s.pessimistic)}};
    j["histogram"] = {{"min", s.histogram.min},
                      {"bin_width", s.histogram.bin_width},
                      {"counts", s.histogram.counts},
                      {"mode_bin", s.histogram.mode_bin},
                      {"mode_midpoint", s.histogram.mode_midpoint}};
    j["total_emissions"] = to_json(s.total_emissions);
    j["operational_emissions"] = to_json(s.operational_emissions);
    j["total_cost"] = to_json(s.total_cost);
    j["turnover_ratio"] = to_json(s.turnover_ratio);
    j["mean_emissions_by_action"] = to_json(s.mean_emissions_by_action);
    j["mean_cost_by_action"] = to_json(s.mean_cost_by_action);
    j["mean_count_by_action"] = to_json(s.mean_count_by_action);

    nlohmann::json lifespans = nlohmann::json::array();
    for (const auto& b : s.by_lifespan) {
        lifespans.push_back({{"lifespan_threshold", b.lifespan_threshold},
                             {"count", b.count},
                             {"total_emissions", to_json(b.total_emissions)},
                             {"mean_total_cost", b.mean_total_cost},
                             {"mean_turnover_ratio", b.mean_turnover_ratio},
                             {"mean_emissions_by_action", to_json(b.mean_emissions_by_action)}});
    }
    j["by_lifespan"] = std::move(lifespans);

    nlohmann::json deciles = nlohmann::json::array();
    for (const auto& d : s.deciles) {
        nlohmann::json features = nlohmann::json::object();
        for (std::size_t f = 0; f < kFeatureNames.size(); ++f) {
            features[std::string(kFeatureNames[f])] = d.mean_features[f];
        }
        deciles.push_back({{"decile", d.decile},
                           {"count", d.count},
                           {"mean_total_emissions", d.mean_total_emissions},
                           {"mean_features", std::move(features)}});
    }
    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    j["driving_variables"] = {{"features", std::move(names)}, {"deciles", std::move(deciles)}};
    return j;
}

}  // namespace ecosim
