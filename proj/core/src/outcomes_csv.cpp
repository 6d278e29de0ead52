#include "ecosim/outcomes_csv.hpp"

#include <unordered_map>

#include "ecosim/csv.hpp"
#include "ecosim/error.hpp"

namespace ecosim {

namespace {

const std::vector<std::string> kParameterColumns{
    "lifespan_threshold",        "demolition_proportion",     "renovation_emission_rate",
    "replacement_emission_rate", "renovation_vs_replacement", "new_buildings_proportion",
    "new_buildings_area_factor", "new_age_threshold",
};

std::vector<std::string> build_columns() {
    std::vector<std::string> cols{"iteration"};
    cols.insert(cols.end(), kParameterColumns.begin(), kParameterColumns.end());
    for (auto name : kMitigationNames) {
        cols.push_back(std::string(name) + "_enabled");
        cols.push_back(std::string(name) + "_factor");
    }
    for (const char* prefix : {"count_", "emissions_", "cost_"}) {
        for (Action a : kActions) cols.push_back(prefix + std::string(to_string(a)));
    }
    for (const char* name :
         {"operational_emissions", "total_emissions", "total_cost", "turnover_ratio"}) {
        cols.emplace_back(name);
    }
    return cols;
}

}  // namespace

const std::vector<std::string>& outcome_columns() {
    static const std::vector<std::string> columns = build_columns();
    return columns;
}

void write_outcomes(std::ostream& out, std::span<const IterationOutcome> outcomes) {
    csv::write_record(out, outcome_columns());
    std::vector<std::string> row;
    row.reserve(outcome_columns().size());
    for (const IterationOutcome& o : outcomes) {
        row.clear();
        const ScenarioParameters& p = o.params;
        row.push_back(std::to_string(o.iteration));
        row.push_back(std::to_string(p.lifespan_threshold));
        for (double v : {p.demolition_proportion, p.renovation_emission_rate,
                         p.replacement_emission_rate, p.renovation_vs_replacement,
                         p.new_buildings_proportion, p.new_buildings_area_factor}) {
            row.push_back(csv::format_double(v));
        }
        row.push_back(std::to_string(p.new_age_threshold));
        for (const MitigationStrategy* s : strategies(p.mitigation)) {
            row.push_back(s->enabled ? "1" : "0");
            row.push_back(csv::format_double(s->factor));
        }
        for (Action a : kActions) row.push_back(std::to_string(o.count_by_action[a]));
        for (Action a : kActions) row.push_back(csv::format_double(o.emissions_by_action[a]));
        for (Action a : kActions) row.push_back(csv::format_double(o.cost_by_action[a]));
        for (double v : {o.operational_emissions, o.total_emissions, o.total_cost,
                         o.turnover_ratio}) {
            row.push_back(csv::format_double(v));
        }
        csv::write_record(out, row);
    }
}

std::vector<IterationOutcome> read_outcomes(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw MissingColumn("iteration");

    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < fields.size(); ++i) position.emplace(fields[i], i);
    std::vector<std::size_t> index;
    for (const std::string& name : outcome_columns()) {
        auto it = position.find(name);
        if (it == position.end()) throw MissingColumn(name);
        index.push_back(it->second);
    }

    std::vector<IterationOutcome> outcomes;
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::size_t col = 0;
        auto text = [&]() -> const std::string& {
            const std::size_t at = index[col++];
            if (at >= fields.size()) throw MalformedRow(row, "too few fields");
            return fields[at];
        };
        auto real = [&] {
            auto v = csv::parse_double(text());
            if (!v) throw MalformedRow(row, "unparseable number in " + outcome_columns()[col - 1]);
            return *v;
        };
        auto integer = [&] {
            auto v = csv::parse_int(text());
            if (!v) throw MalformedRow(row, "unparseable integer in " + outcome_columns()[col - 1]);
            return *v;
        };

        IterationOutcome o;
        ScenarioParameters& p = o.params;
        o.iteration = static_cast<std::uint64_t>(integer());
        p.lifespan_threshold = static_cast<int>(integer());
        p.demolition_proportion = real();
        p.renovation_emission_rate = real();
        p.replacement_emission_rate = real();
        p.renovation_vs_replacement = real();
        p.new_buildings_proportion = real();
        p.new_buildings_area_factor = real();
        p.new_age_threshold = static_cast<int>(integer());
        for (MitigationStrategy* s : strategies(p.mitigation)) {
            s->enabled = integer() != 0;
            s->factor = real();
        }
        for (Action a : kActions) o.count_by_action[a] = static_cast<std::uint64_t>(integer());
        for (Action a : kActions) o.emissions_by_action[a] = real();
        for (Action a : kActions) o.cost_by_action[a] = real();
        o.operational_emissions = real();
        o.total_emissions = real();
        o.total_cost = real();
        o.turnover_ratio = real();
        outcomes.push_back(o);
    }
    return outcomes;
}

}  // namespace ecosim
