#include "ecosim/run_config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"

namespace ecosim {

namespace {

using nlohmann::json;

// Accumulates field errors while reading a JSON document.
class Reader {
public:
    std::vector<FieldError> errors;

    void fail(std::string field, std::string message) {
        errors.push_back({std::move(field), std::move(message)});
    }

    bool number(const json& j, const std::string& field, double& out) {
        if (!j.is_number()) {
            fail(field, "expected a number");
            return false;
        }
        out = j.get<double>();
        return true;
    }

    bool integer(const json& j, const std::string& field, std::int64_t& out) {
        if (j.is_number_integer()) {
            out = j.get<std::int64_t>();
            return true;
        }
        if (j.is_number_float()) {
            const double v = j.get<double>();
            if (v == std::floor(v) && std::abs(v) < 9.0e15) {
                out = static_cast<std::int64_t>(v);
                return true;
            }
        }
        fail(field, "expected an integer");
        return false;
    }

    bool boolean(const json& j, const std::string& field, bool& out) {
        if (!j.is_boolean()) {
            fail(field, "expected true or false");
            return false;
        }
        out = j.get<bool>();
        return true;
    }

    void real_grid(const json& j, const std::string& field, std::vector<double>& out) {
        if (!j.is_array()) {
            fail(field, "expected an array of numbers");
            return;
        }
        std::vector<double> values;
        for (const auto& v : j) {
            if (!v.is_number()) {
                fail(field, "expected an array of numbers");
                return;
            }
            values.push_back(v.get<double>());
        }
        out = std::move(values);
    }

    void int_grid(const json& j, const std::string& field, std::vector<int>& out) {
        if (!j.is_array()) {
            fail(field, "expected an array of whole years");
            return;
        }
        std::vector<int> values;
        for (const auto& v : j) {
            std::int64_t year = 0;
            if (!integer(v, field, year)) return;
            values.push_back(static_cast<int>(year));
        }
        out = std::move(values);
    }

    void interval(const json& j, const std::string& field, Interval& out) {
        if (!j.is_object()) {
            fail(field, "expected {\"min\": x, \"max\": y}");
            return;
        }
        Interval result = out;
        for (const auto& [key, value] : j.items()) {
            if (key == "min") {
                number(value, field + ".min", result.min);
            } else if (key == "max") {
                number(value, field + ".max", result.max);
            } else {
                fail(field + "." + key, "unknown key");
            }
        }
        out = result;
    }
};

void read_parameters(Reader& r, const json& j, ParameterRanges& p) {
    const std::string prefix = "parameters.";
    if (!j.is_object()) {
        r.fail("parameters", "expected an object");
        return;
    }
    for (const auto& [key, value] : j.items()) {
        const std::string field = prefix + key;
        if (key == "lifespan_threshold") {
            r.int_grid(value, field, p.lifespan_threshold);
        } else if (key == "new_age_threshold") {
            std::int64_t v = 0;
            if (r.integer(value, field, v)) p.new_age_threshold = static_cast<int>(v);
        } else if (key == "demolition_proportion") {
            r.real_grid(value, field, p.demolition_proportion);
        } else if (key == "renovation_emission_rate") {
            r.real_grid(value, field, p.renovation_emission_rate);
        } else if (key == "replacement_emission_rate") {
            r.real_grid(value, field, p.replacement_emission_rate);
        } else if (key == "renovation_vs_replacement") {
            r.real_grid(value, field, p.renovation_vs_replacement);
        } else if (key == "new_buildings_proportion") {
            r.interval(value, field, p.new_buildings_proportion);
        } else if (key == "new_buildings_area_factor") {
            r.interval(value, field, p.new_buildings_area_factor);
        } else {
            r.fail(field, "unknown parameter");
        }
    }
}

void read_mitigation(Reader& r, const json& j, MitigationConfig& m) {
    if (!j.is_object()) {
        r.fail("mitigation", "expected an object");
        return;
    }
    const auto all = strategies(m);
    for (const auto& [key, value] : j.items()) {
        const std::string field = "mitigation." + key;
        std::size_t i = 0;
        while (i < kMitigationNames.size() && kMitigationNames[i] != key) ++i;
        if (i == kMitigationNames.size()) {
            r.fail(field, "unknown mitigation strategy");
            continue;
        }
        if (!value.is_object()) {
            r.fail(field, "expected {\"enabled\": bool, \"factor\": number}");
            continue;
        }
        for (const auto& [k, v] : value.items()) {
            if (k == "enabled") {
                r.boolean(v, field + ".enabled", all[i]->enabled);
            } else if (k == "factor") {
                r.number(v, field + ".factor", all[i]->factor);
            } else {
                r.fail(field + "." + k, "unknown key");
            }
        }
    }
}

json interval_json(const Interval& i) { return {{"min", i.min}, {"max", i.max}}; }

std::string_view row_policy_name(RowPolicy p) { return p == RowPolicy::Skip ? "skip" : "abort"; }

}  // namespace

json to_json(const ParameterRanges& p) {
    return {{"lifespan_threshold", p.lifespan_threshold},
            {"new_age_threshold", p.new_age_threshold},
            {"demolition_proportion", p.demolition_proportion},
            {"renovation_emission_rate", p.renovation_emission_rate},
            {"replacement_emission_rate", p.replacement_emission_rate},
            {"renovation_vs_replacement", p.renovation_vs_replacement},
            {"new_buildings_proportion", interval_json(p.new_buildings_proportion)},
            {"new_buildings_area_factor", interval_json(p.new_buildings_area_factor)}};
}

json to_json(const MitigationConfig& m) {
    json j = json::object();
    const auto all = strategies(m);
    for (std::size_t i = 0; i < all.size(); ++i) {
        j[std::string(kMitigationNames[i])] = {{"enabled", all[i]->enabled},
                                               {"factor", all[i]->factor}};
    }
    return j;
}

RunConfig RunConfig::from_json(const json& j, const RunConfig& base) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    RunConfig c = base;
    Reader r;
    for (const auto& [key, value] : j.items()) {
        if (key == "parameters") {
            read_parameters(r, value, c.parameters);
        } else if (key == "mitigation") {
            read_mitigation(r, value, c.mitigation);
        } else if (key == "costs") {
            try {
                c.costs.merge_json(value, "costs");
            } catch (const ConfigError& e) {
                r.errors.insert(r.errors.end(), e.errors().begin(), e.errors().end());
            }
        } else if (key == "dac_price") {
            r.number(value, key, c.dac.usd_per_tonne);
        } else if (key == "horizon_years") {
            r.number(value, key, c.horizon_years);
        } else if (key == "iterations") {
            std::int64_t v = 0;
            if (r.integer(value, key, v)) {
                if (v < 1) {
                    r.fail(key, "must be at least 1");
                } else {
                    c.iterations = static_cast<std::size_t>(v);
                }
            }
        } else if (key == "seed") {
            if (value.is_number_unsigned()) {
                c.seed = value.get<std::uint64_t>();
            } else if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
                c.seed = static_cast<std::uint64_t>(value.get<std::int64_t>());
            } else {
                r.fail(key, "expected a non-negative 64-bit integer");
            }
        } else if (key == "selector") {
            if (!value.is_array()) {
                r.fail(key, "expected an array of stage letters");
                continue;
            }
            std::vector<std::string> letters;
            for (const auto& v : value) {
                letters.push_back(v.is_string() ? v.get<std::string>() : std::string("?"));
            }
            try {
                c.selector = EmissionSelector::from_letters(letters);
            } catch (const ConfigError& e) {
                r.errors.insert(r.errors.end(), e.errors().begin(), e.errors().end());
            }
        } else if (key == "sample_size") {
            std::int64_t v = 0;
            if (value.is_null()) {
                c.sample_size.reset();
            } else if (r.integer(value, key, v)) {
                if (v < 1) {
                    r.fail(key, "must be at least 1");
                } else {
                    c.sample_size = static_cast<std::size_t>(v);
                }
            }
        } else if (key == "fallback") {
            auto policy = value.is_string() ? parse_fallback_policy(value.get<std::string>())
                                            : std::nullopt;
            if (policy) {
                c.fallback = *policy;
            } else {
                r.fail(key, "expected strict, nearest_by_structure or global_mean");
            }
        } else if (key == "reference_year") {
            std::int64_t v = 0;
            if (value.is_null()) {
                c.reference_year.reset();
            } else if (r.integer(value, key, v)) {
                c.reference_year = static_cast<int>(v);
            }
        } else if (key == "renovation_base_fraction") {
            r.number(value, key, c.renovation_base_fraction);
        } else if (key == "interactions") {
            r.boolean(value, key, c.interactions);
        } else if (key == "workers") {
            std::int64_t v = 0;
            if (r.integer(value, key, v)) {
                if (v < 0 || v > 1024) {
                    r.fail(key, "must lie in [0, 1024]");
                } else {
                    c.workers = static_cast<unsigned>(v);
                }
            }
        } else if (key == "row_policy") {
            if (value == "skip") {
                c.row_policy = RowPolicy::Skip;
            } else if (value == "abort") {
                c.row_policy = RowPolicy::Abort;
            } else {
                r.fail(key, "expected skip or abort");
            }
        } else if (key == "stock_schema") {
            try {
                StockSchema schema = StockSchema::from_json(value);
                c.stock_schema = schema;
            } catch (const ConfigError& e) {
                r.errors.insert(r.errors.end(), e.errors().begin(), e.errors().end());
            }
        } else {
            r.fail(key, "unknown configuration key");
        }
    }
    if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
    c.validate();
    return c;
}

RunConfig RunConfig::load(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json j;
    j["parameters"] = ecosim::to_json(parameters);
    j["mitigation"] = ecosim::to_json(mitigation);
    j["costs"] = costs.to_json();
    j["dac_price"] = dac.usd_per_tonne;
    j["horizon_years"] = horizon_years;
    j["iterations"] = iterations;
    j["seed"] = seed;
    j["selector"] = selector.letters();
    j["sample_size"] = sample_size ? json(*sample_size) : json(nullptr);
    j["fallback"] = std::string(to_string(fallback));
    j["reference_year"] = reference_year ? json(*reference_year) : json(nullptr);
    j["renovation_base_fraction"] = renovation_base_fraction;
    j["interactions"] = interactions;
    j["workers"] = workers;
    j["row_policy"] = std::string(row_policy_name(row_policy));
    j["stock_schema"] = stock_schema.to_json();
    return j;
}

void RunConfig::validate() const {
    std::vector<FieldError> errors;
    auto absorb = [&](auto&& check) {
        try {
            check();
        } catch (const ConfigError& e) {
            errors.insert(errors.end(), e.errors().begin(), e.errors().end());
        }
    };
    absorb([&] { parameters.validate(); });
    absorb([&] { mitigation.validate(); });
    absorb([&] { DacPricing::checked(dac.usd_per_tonne); });
    if (!(std::isfinite(horizon_years) && horizon_years >= 0.0)) {
        errors.push_back({"horizon_years", "must be a finite number >= 0"});
    }
    if (iterations < 1) errors.push_back({"iterations", "must be at least 1"});
    if (!(std::isfinite(renovation_base_fraction) && renovation_base_fraction > 0.0 &&
          renovation_base_fraction <= 1.0)) {
        errors.push_back({"renovation_base_fraction", "must lie in (0, 1]"});
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

}  // namespace ecosim
