#include "ecosim/prediction.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"

namespace ecosim {

DesignMatrix::DesignMatrix(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void DesignMatrix::add_row(std::span<const double> row) {
    if (row.size() != cols()) throw DataError("design row has the wrong number of columns");
    values_.insert(values_.end(), row.begin(), row.end());
    ++rows_;
}

DesignMatrix DesignMatrix::without(const std::vector<std::size_t>& drop) const {
    std::vector<std::size_t> keep;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < cols(); ++c) {
        if (std::find(drop.begin(), drop.end(), c) == drop.end()) {
            keep.push_back(c);
            names.push_back(columns_[c]);
        }
    }
    DesignMatrix out(std::move(names));
    std::vector<double> buffer(keep.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < keep.size(); ++k) buffer[k] = (*this)(r, keep[k]);
        out.add_row(buffer);
    }
    return out;
}

OlsModel fit_ols(const DesignMatrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (y.size() != n) throw DataError("target length does not match design rows");
    if (p == 0) throw DataError("design has no columns");
    if (n < p) throw DataError("fewer observations than columns");

    // Column-major working copy; overwritten by R above the diagonal and the
    // Householder vectors below it.
    std::vector<double> a(n * p);
    std::vector<double> column_norm(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            a[c * n + r] = x(r, c);
            ss += x(r, c) * x(r, c);
        }
        column_norm[c] = std::sqrt(ss);
    }
    std::vector<double> qty(y.begin(), y.end());
    std::vector<double> diag(p);
    std::vector<double> v(n);

    constexpr double kRankTolerance = 1e-10;
    for (std::size_t k = 0; k < p; ++k) {
        double* col = &a[k * n];
        double ss = 0.0;
        for (std::size_t r = k; r < n; ++r) ss += col[r] * col[r];
        const double norm = std::sqrt(ss);
        if (!(norm > kRankTolerance * column_norm[k])) throw RankDeficient(x.columns()[k]);

        const double alpha = col[k] > 0.0 ? -norm : norm;
        double v_ss = 0.0;
        for (std::size_t r = k; r < n; ++r) {
            v[r] = col[r];
            if (r == k) v[r] -= alpha;
            v_ss += v[r] * v[r];
        }
        auto reflect = [&](double* target) {
            double dot = 0.0;
            for (std::size_t r = k; r < n; ++r) dot += v[r] * target[r];
            const double scale = 2.0 * dot / v_ss;
            for (std::size_t r = k; r < n; ++r) target[r] -= scale * v[r];
        };
        for (std::size_t c = k + 1; c < p; ++c) reflect(&a[c * n]);
        reflect(qty.data());
        diag[k] = alpha;
    }
    auto r_at = [&](std::size_t row, std::size_t col) {
        return row == col ? diag[row] : a[col * n + row];
    };

    OlsModel model;
    model.columns = x.columns();
    model.observations = n;
    model.coefficients.assign(p, 0.0);
    for (std::size_t i = p; i-- > 0;) {
        double sum = qty[i];
        for (std::size_t j = i + 1; j < p; ++j) sum -= r_at(i, j) * model.coefficients[j];
        model.coefficients[i] = sum / diag[i];
    }

    double mean = 0.0;
    for (double v_i : y) mean += v_i;
    mean /= static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double residual = y[r] - predict_row(model, x.row(r));
        ss_res += residual * residual;
        ss_tot += (y[r] - mean) * (y[r] - mean);
    }
    model.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    model.residual_std = n > p ? std::sqrt(ss_res / static_cast<double>(n - p)) : 0.0;

    // Standard errors from diag((R^T R)^-1) = row sums of squares of R^-1.
    std::vector<double> r_inv(p * p, 0.0);  // upper triangular, row-major
    for (std::size_t c = 0; c < p; ++c) {
        for (std::size_t i = c + 1; i-- > 0;) {
            double sum = i == c ? 1.0 : 0.0;
            for (std::size_t j = i + 1; j <= c; ++j) sum -= r_at(i, j) * r_inv[j * p + c];
            r_inv[i * p + c] = sum / diag[i];
        }
    }
    model.std_errors.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double ss = 0.0;
        for (std::size_t c = i; c < p; ++c) ss += r_inv[i * p + c] * r_inv[i * p + c];
        model.std_errors[i] = model.residual_std * std::sqrt(ss);
    }
    return model;
}

double predict_row(const OlsModel& model, std::span<const double> row) {
    if (row.size() != model.coefficients.size()) {
        throw DataError("row does not match the model's columns");
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) sum += model.coefficients[c] * row[c];
    return sum;
}

Prediction predict(const OlsModel& model, const ScenarioParameters& p) {
    return Prediction{predict_row(model, encode(p, model.columns)), model.residual_std};
}

std::vector<std::string> candidate_columns(bool interactions) {
    std::vector<std::string> cols{std::string(kInterceptColumn)};
    for (auto name : kFeatureNames) cols.emplace_back(name);
    if (interactions) {
        for (std::size_t a = 0; a < 7; ++a) {
            for (std::size_t b = a + 1; b < 7; ++b) {
                cols.push_back(std::string(kFeatureNames[a]) + "*" + std::string(kFeatureNames[b]));
            }
        }
    }
    return cols;
}

std::vector<double> encode(const ScenarioParameters& p, const std::vector<std::string>& columns) {
    const auto features = feature_values(p);
    auto feature = [&](std::string_view name) -> std::optional<double> {
        for (std::size_t f = 0; f < kFeatureNames.size(); ++f) {
            if (kFeatureNames[f] == name) return features[f];
        }
        return std::nullopt;
    };
    std::vector<double> row;
    row.reserve(columns.size());
    for (const std::string& column : columns) {
        if (column == kInterceptColumn) {
            row.push_back(1.0);
        } else if (auto v = feature(column)) {
            row.push_back(*v);
        } else if (auto star = column.find('*'); star != std::string::npos) {
            auto lhs = feature(std::string_view(column).substr(0, star));
            auto rhs = feature(std::string_view(column).substr(star + 1));
            if (!lhs || !rhs) throw EncodingMismatch(column);
            row.push_back(*lhs * *rhs);
        } else {
            throw EncodingMismatch(column);
        }
    }
    return row;
}

DesignMatrix design_from_outcomes(std::span<const IterationOutcome> outcomes, bool interactions) {
    DesignMatrix x(candidate_columns(interactions));
    for (const auto& o : outcomes) x.add_row(encode(o.params, x.columns()));
    return x;
}

nlohmann::json OlsModel::to_json() const {
    return {{"columns", columns},
            {"coefficients", coefficients},
            {"std_errors", std_errors},
            {"r_squared", r_squared},
            {"residual_std", residual_std},
            {"observations", observations}};
}

OlsModel OlsModel::from_json(const nlohmann::json& j) {
    try {
        OlsModel m;
        m.columns = j.at("columns").get<std::vector<std::string>>();
        m.coefficients = j.at("coefficients").get<std::vector<double>>();
        if (j.contains("std_errors")) m.std_errors = j.at("std_errors").get<std::vector<double>>();
        m.r_squared = j.at("r_squared").get<double>();
        m.residual_std = j.at("residual_std").get<double>();
        if (j.contains("observations")) m.observations = j.at("observations").get<std::size_t>();
        if (m.columns.size() != m.coefficients.size()) {
            throw DataError("model columns and coefficients differ in length");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model JSON: ") + e.what());
    }
}

nlohmann::json SurrogateFit::to_json() const {
    nlohmann::json j;
    j["target"] = "total_emissions";
    j["dropped_columns"] = dropped_columns;
    if (model) {
        j["status"] = "ok";
        j.update(model->to_json());
    } else {
        j["status"] = "unavailable";
        j["reason"] = reason;
    }
    return j;
}

SurrogateFit fit_surrogate(std::span<const IterationOutcome> outcomes, bool interactions) {
    SurrogateFit fit;
    if (outcomes.empty()) {
        fit.reason = "no outcomes";
        return fit;
    }
    const DesignMatrix full = design_from_outcomes(outcomes, interactions);
    std::vector<std::size_t> drop;
    for (std::size_t c = 0; c < full.cols(); ++c) {
        if (full.columns()[c] == kInterceptColumn) continue;
        bool constant = true;
        for (std::size_t r = 1; r < full.rows() && constant; ++r) {
            constant = full(r, c) == full(0, c);
        }
        if (constant) {
            drop.push_back(c);
            fit.dropped_columns.push_back(full.columns()[c]);
        }
    }
    const DesignMatrix x = full.without(drop);
    std::vector<double> y;
    y.reserve(outcomes.size());
    for (const auto& o : outcomes) y.push_back(o.total_emissions);
    if (x.rows() < x.cols()) {
        fit.reason = "fewer iterations (" + std::to_string(x.rows()) + ") than model columns (" +
                     std::to_string(x.cols()) + ")";
        return fit;
    }
    try {
        fit.model = fit_ols(x, y);
    } catch (const RankDeficient& e) {
        fit.reason = e.what();
    }
    return fit;
}

}  // namespace ecosim
