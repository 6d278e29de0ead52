#include "ecosim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ecosim/error.hpp"

namespace ecosim {

std::size_t new_building_count(double proportion, std::size_t stock_size) {
    const double exact = proportion * static_cast<double>(stock_size);
    if (!(exact > 0.0)) return 0;
    const double nearest = std::round(exact);
    if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(exact));
}

Simulator::Simulator(std::span<const Building> stock, SimulationModels models,
                     double horizon_years, int reference_year)
    : models_(std::move(models)), horizon_(horizon_years), reference_year_(reference_year) {
    if (stock.empty()) throw DataError("stock is empty");
    if (!(horizon_years >= 0.0) || !std::isfinite(horizon_years)) {
        throw ConfigError("horizon_years", "must be a finite number >= 0");
    }
    const EmissionSelector selector = models_.selector;
    const bool demolition_selected = selector.contains(Stage::C);

    buildings_.reserve(stock.size());
    double area_sum = 0.0;
    for (const Building& b : stock) {
        Prepared p{};
        p.code = archetype_of(b);
        p.age = reference_year - b.year_built;
        p.occupancy = b.occupancy;
        p.total_area = b.total_floor_area();
        const ArchetypeEmissionRecord& record = models_.emissions.record_for(p.code);
        p.unit_record = record.selected(selector);
        p.embodied = scale_to_area(record, selector, p.total_area);
        p.demolition = demolition_selected
                           ? scale_to_area(record, EmissionSelector::only(Stage::C), p.total_area)
                           : 0.0;
        p.intensity = models_.intensities.intensity(b.activity_type);
        p.operational = operational_emission(b, models_.intensities, horizon_years);
        if (p.code.structure == 'W') {
            p.wood_unit_record = p.unit_record;
        } else {
            try {
                p.wood_unit_record =
                    models_.emissions.record_for(p.code.with_structure('W')).selected(selector);
            } catch (const MissingArchetype&) {
                p.wood_unit_record = std::numeric_limits<double>::quiet_NaN();
            }
        }
        baseline_ += p.embodied;
        area_sum += p.total_area;
        buildings_.push_back(p);
    }
    mean_area_ = area_sum / static_cast<double>(buildings_.size());
}

double Simulator::wood_record(const Prepared& b) const {
    if (std::isnan(b.wood_unit_record)) throw MissingArchetype(b.code.with_structure('W').str());
    return b.wood_unit_record;
}

IterationOutcome Simulator::simulate(const ScenarioParameters& p, RandomStream& rng) const {
    RandomStream actions(rng.next_u64());
    RandomStream expansion(rng.next_u64());

    const MitigationConfig& m = p.mitigation;
    const double recycling = m.recycling_multiplier();
    const double prefab = m.prefabrication_multiplier();
    const double operational_factor = m.operational_multiplier();
    const double wood_fraction = m.wood_fraction();
    const CostTable& costs = models_.costs;

    IterationOutcome out;
    out.params = p;
    double operational = 0.0;

    for (const Prepared& b : buildings_) {
        const double u_demolish = actions.uniform01();
        const double u_renovate = actions.uniform01();
        const double u_wood = actions.uniform01();
        const AgeCategory category =
            classify_age(b.age, p.new_age_threshold, p.effective_lifespan());
        const Action action = assign_action(category, p.demolition_proportion,
                                            p.renovation_vs_replacement, u_demolish, u_renovate);
        out.count_by_action[action] += 1;

        switch (action) {
            case Action::Keep:
                operational += b.operational;
                break;
            case Action::Demolish:
                out.emissions_by_action[Action::Demolish] += b.demolition;
                out.cost_by_action[Action::Demolish] +=
                    costs.unit_cost(b.occupancy, CostKind::Demolition) * b.total_area;
                break;
            case Action::Renovate:
                out.emissions_by_action[Action::Renovate] += p.renovation_emission_rate *
                                                             models_.renovation_base_fraction *
                                                             b.embodied * recycling;
                out.cost_by_action[Action::Renovate] +=
                    costs.unit_cost(b.occupancy, CostKind::Renovation) * b.total_area;
                operational += b.operational;
                break;
            case Action::Replace: {
                double embodied = b.embodied;
                if (b.code.structure != 'W' && u_wood < wood_fraction) {
                    embodied = wood_record(b) * b.total_area / kStandardUnitArea;
                }
                out.emissions_by_action[Action::Replace] +=
                    p.replacement_emission_rate * embodied * recycling * prefab;
                out.cost_by_action[Action::Replace] +=
                    costs.unit_cost(b.occupancy, CostKind::Demolition) * b.total_area +
                    costs.unit_cost(b.occupancy, CostKind::NewConstruction) * b.total_area;
                operational += b.operational;
                break;
            }
            case Action::NewConstruction:
                break;
        }
    }

    const std::size_t new_count = new_building_count(p.new_buildings_proportion, buildings_.size());
    const double new_area = p.new_buildings_area_factor * m.area_multiplier() * mean_area_;
    for (std::size_t k = 0; k < new_count; ++k) {
        const Prepared& tmpl = buildings_[expansion.index(buildings_.size())];
        const double u_wood = expansion.uniform01();
        double unit = tmpl.unit_record;
        if (tmpl.code.structure != 'W' && u_wood < wood_fraction) unit = wood_record(tmpl);
        out.count_by_action[Action::NewConstruction] += 1;
        out.emissions_by_action[Action::NewConstruction] +=
            unit * new_area / kStandardUnitArea * recycling * prefab;
        out.cost_by_action[Action::NewConstruction] +=
            costs.unit_cost(tmpl.occupancy, CostKind::NewConstruction) * new_area;
        operational += tmpl.intensity * new_area * horizon_;
    }

    out.operational_emissions = operational * operational_factor;
    double embodied_total = 0.0;
    double cost_total = 0.0;
    for (Action a : kActions) {
        embodied_total += out.emissions_by_action[a];
        cost_total += out.cost_by_action[a];
    }
    out.total_emissions = embodied_total + out.operational_emissions;
    out.total_cost = cost_total;
    if (baseline_ > 0.0) {
        out.turnover_ratio = out.total_emissions / baseline_;
    } else {
        out.turnover_ratio =
            out.total_emissions == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return out;
}

IterationOutcome Simulator::run_iteration(const ParameterRanges& ranges,
                                          const MitigationConfig& mitigation, std::uint64_t seed,
                                          std::uint64_t index) const {
    RandomStream parameter_stream = RandomStream::child(seed, index, 0);
    RandomStream simulation_stream = RandomStream::child(seed, index, 1);
    IterationOutcome out =
        simulate(sample_parameters(ranges, mitigation, parameter_stream), simulation_stream);
    out.iteration = index;
    return out;
}

IterationOutcome simulate_iteration(std::span<const Building> stock, const ScenarioParameters& p,
                                    const SimulationModels& models, double horizon_years,
                                    int reference_year, RandomStream& rng) {
    return Simulator(stock, models, horizon_years, reference_year).simulate(p, rng);
}

std::vector<IterationOutcome> run_iterations(const Simulator& simulator,
                                             const ParameterRanges& ranges,
                                             const MitigationConfig& mitigation,
                                             const RunOptions& options) {
    if (options.iterations == 0) throw ConfigError("iterations", "must be at least 1");
    ranges.validate();
    mitigation.validate();

    const std::size_t total = options.iterations;
    std::vector<IterationOutcome> outcomes(total);
    unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::size_t>(
                                                   total, std::numeric_limits<unsigned>::max())));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex progress_mutex;
    std::size_t completed = 0;
    std::size_t reported_percent = 0;
    std::exception_ptr first_error;

    auto cancelled = [&] {
        return failed.load(std::memory_order_relaxed) ||
               (options.cancel && options.cancel->load(std::memory_order_relaxed));
    };

    auto work = [&] {
        try {
            for (;;) {
                if (cancelled()) return;
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= total) return;
                outcomes[i] = simulator.run_iteration(ranges, mitigation, options.seed, i);

                std::lock_guard lock(progress_mutex);
                ++completed;
                const std::size_t percent = completed * 100 / total;
                if (options.progress && (percent > reported_percent || completed == total)) {
                    reported_percent = percent;
                    options.progress(Progress{completed, total});
                }
            }
        } catch (...) {
            std::lock_guard lock(progress_mutex);
            if (!first_error) first_error = std::current_exception();
            failed = true;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    if (first_error) std::rethrow_exception(first_error);
    if (options.cancel && options.cancel->load() && completed < total) throw Cancelled();
    return outcomes;
}

}  // namespace ecosim
