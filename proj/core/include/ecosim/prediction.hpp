#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ecosim/scenario.hpp"
#include "ecosim/simulation.hpp"

namespace ecosim {

inline constexpr std::string_view kInterceptColumn = "intercept";

// Row-major regression design with named columns.
class DesignMatrix {
public:
    explicit DesignMatrix(std::vector<std::string> columns);

    void add_row(std::span<const double> row);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols(), cols()};
    }
    const std::vector<std::string>& columns() const { return columns_; }

    // Copy without the listed column indices.
    DesignMatrix without(const std::vector<std::size_t>& drop) const;

private:
    std::vector<std::string> columns_;
    std::vector<double> values_;
    std::size_t rows_ = 0;
};

struct OlsModel {
    std::vector<std::string> columns;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    double r_squared = 1.0;     // 1 - SS_res / SS_tot; 1 when SS_tot = 0
    double residual_std = 0.0;  // sqrt(SS_res / (n - p)); 0 when n == p
    std::size_t observations = 0;

    nlohmann::json to_json() const;
    static OlsModel from_json(const nlohmann::json& j);
};

// Least squares by Householder QR. Throws DataError when rows < columns or
// y has the wrong length, and RankDeficient naming the first column that is
// (numerically) a linear combination of the ones before it.
OlsModel fit_ols(const DesignMatrix& x, std::span<const double> y);

double predict_row(const OlsModel& model, std::span<const double> row);

struct Prediction {
    double value = 0.0;
    double band = 0.0;  // ± residual_std
    double lower() const { return value - band; }
    double upper() const { return value + band; }
};

// Encodes `p` into the model's columns. Throws EncodingMismatch for a
// column the encoder does not know.
Prediction predict(const OlsModel& model, const ScenarioParameters& p);

// Column names: intercept, the scenario features, and with `interactions`
// the pairwise products "a*b" of the seven sampled parameters.
std::vector<std::string> candidate_columns(bool interactions);
std::vector<double> encode(const ScenarioParameters& p, const std::vector<std::string>& columns);

DesignMatrix design_from_outcomes(std::span<const IterationOutcome> outcomes, bool interactions);

// Surrogate model over simulation outcomes. Columns that are constant over
// the run (a singleton grid, a fixed mitigation setting) are dropped before
// fitting; when fitting is still impossible the model is absent and
// `reason` says why.
struct SurrogateFit {
    std::optional<OlsModel> model;
    std::vector<std::string> dropped_columns;
    std::string reason;

    nlohmann::json to_json() const;
};

SurrogateFit fit_surrogate(std::span<const IterationOutcome> outcomes, bool interactions);

}  // namespace ecosim
