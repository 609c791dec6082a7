#include "equifair/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "equifair/kernels.hpp"
#include "equifair/rng.hpp"

namespace equifair {

SensitiveFrame::SensitiveFrame(std::vector<std::string> columns,
                               std::vector<std::vector<std::string>> data)
    : columns_(std::move(columns)), data_(std::move(data)) {
    if (columns_.empty()) throw ValidationError("sensitive frame needs at least one column");
    if (columns_.size() != data_.size())
        throw ValidationError("sensitive frame: column name/data count mismatch");
    const auto n = data_.front().size();
    for (auto& col : data_) {
        if (col.size() != n) throw ValidationError("sensitive frame: ragged columns");
        for (auto& v : col) v = trim(v);
    }
}

std::string SensitiveFrame::trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::vector<std::string>& SensitiveFrame::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return data_[i];
    throw ValidationError("unknown sensitive column: " + name);
}

SensitiveFrame SensitiveFrame::select(std::span<const std::size_t> column_order) const {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> data;
    for (auto i : column_order) {
        names.push_back(columns_.at(i));
        data.push_back(data_.at(i));
    }
    return SensitiveFrame(std::move(names), std::move(data));
}

void EpsilonVector::validate(std::size_t r) const {
    if (values.size() != r) throw ValidationError("epsilon length does not match attribute count");
    for (double e : values)
        if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("epsilon entries must lie in [0,1]");
}

namespace {

void check_predictions(std::span<const double> preds, std::size_t rows) {
    if (preds.empty()) throw ValidationError("empty prediction vector");
    if (preds.size() != rows)
        throw ValidationError("prediction vector and sensitive frame row counts differ");
    for (double v : preds)
        if (!std::isfinite(v)) throw ValidationError("non-finite prediction");
}

}  // namespace

void SsaCalibrator::fit_prejittered(std::span<const double> jittered,
                                    const std::vector<std::string>& column,
                                    const std::string& attribute) {
    check_predictions(jittered, column.size());
    if (jittered.size() < 2) throw DegeneracyError("need at least 2 calibration observations");

    attribute_ = attribute;
    std::set<std::string> mods(column.begin(), column.end());
    if (mods.size() < 2)
        throw DegeneracyError("attribute '" + attribute +
                              "' has a single modality in the calibration set");

    modalities_.assign(mods.begin(), mods.end());
    index_.clear();
    for (std::size_t g = 0; g < modalities_.size(); ++g) index_[modalities_[g]] = g;

    values_.assign(modalities_.size(), {});
    for (std::size_t i = 0; i < jittered.size(); ++i)
        values_[index_.at(column[i])].push_back(jittered[i]);

    weights_.resize(modalities_.size());
    for (std::size_t g = 0; g < values_.size(); ++g) {
        std::sort(values_[g].begin(), values_[g].end());
        weights_[g] = static_cast<double>(values_[g].size()) / static_cast<double>(jittered.size());
    }
    fitted_ = true;
}

std::vector<std::size_t> SsaCalibrator::resolve_groups(
    const std::vector<std::string>& column) const {
    std::vector<std::size_t> idx(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        auto it = index_.find(column[i]);
        if (it == index_.end())
            throw UnknownModalityError("unknown modality '" + column[i] + "' for attribute '" +
                                       attribute_ + "' at row " + std::to_string(i));
        idx[i] = it->second;
    }
    return idx;
}

std::vector<double> SsaCalibrator::transform_prejittered(std::span<const double> jittered,
                                                         const std::vector<std::string>& column,
                                                         double epsilon) const {
    if (!fitted_) throw StateError("calibrator is not fitted");
    check_predictions(jittered, column.size());
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in [0,1]");

    const auto group_index = resolve_groups(column);
    std::vector<double> fair(jittered.size());
    kernels::barycentric_apply(jittered, group_index, values_, weights_, fair);
    if (epsilon != 0.0)
        for (std::size_t i = 0; i < fair.size(); ++i)
            fair[i] = (1.0 - epsilon) * fair[i] + epsilon * jittered[i];
    return fair;
}

double SsaCalibrator::weight(const std::string& modality) const {
    return weights_.at(index_.at(SensitiveFrame::trim(modality)));
}

const std::vector<double>& SsaCalibrator::group_values(const std::string& modality) const {
    return values_.at(index_.at(SensitiveFrame::trim(modality)));
}

std::vector<double> SsaCalibrator::transform(std::span<const double> predictions,
                                             const SensitiveFrame& sensitive,
                                             double epsilon) const {
    if (sensitive.attribute_count() != 1)
        throw ValidationError("SSA transform expects a single-column frame");
    const auto yj = jitter(predictions, sigma_, derive_seed(seed_, kStreamTransformJitter));
    return transform_prejittered(yj, sensitive.column(std::size_t{0}), epsilon);
}

SsaCalibrator fit_ssa(std::span<const double> predictions, const SensitiveFrame& sensitive,
                      double sigma, std::uint64_t seed) {
    if (sensitive.attribute_count() != 1)
        throw ValidationError("fit_ssa expects a single-column frame");
    check_predictions(predictions, sensitive.rows());
    SsaCalibrator cal;
    cal.sigma_ = sigma;
    cal.seed_ = seed;
    const auto yj = jitter(predictions, sigma, derive_seed(seed, kStreamFitJitter));
    cal.fit_prejittered(yj, sensitive.column(std::size_t{0}), sensitive.columns().front());
    return cal;
}

MsaCalibrator fit_msa(std::span<const double> predictions, const SensitiveFrame& sensitive,
                      double sigma, std::uint64_t seed) {
    check_predictions(predictions, sensitive.rows());
    std::set<std::string> names(sensitive.columns().begin(), sensitive.columns().end());
    if (names.size() != sensitive.attribute_count())
        throw ValidationError("duplicated sensitive column names");

    MsaCalibrator cal;
    cal.sigma_ = sigma;
    cal.seed_ = seed;
    auto current = jitter(predictions, sigma, derive_seed(seed, kStreamFitJitter));
    for (std::size_t s = 0; s < sensitive.attribute_count(); ++s) {
        SsaCalibrator stage;
        stage.sigma_ = sigma;
        stage.seed_ = seed;
        stage.fit_prejittered(current, sensitive.column(s), sensitive.columns()[s]);
        current = stage.transform_prejittered(current, sensitive.column(s));
        cal.stages_.push_back(std::move(stage));
    }
    cal.fitted_ = true;
    return cal;
}

std::vector<std::string> MsaCalibrator::attributes() const {
    std::vector<std::string> out;
    for (const auto& s : stages_) out.push_back(s.attribute());
    return out;
}

std::vector<double> MsaCalibrator::transform(std::span<const double> predictions,
                                             const SensitiveFrame& sensitive,
                                             const std::optional<EpsilonVector>& epsilon) {
    if (!fitted_) throw StateError("calibrator is not fitted");
    check_predictions(predictions, sensitive.rows());
    if (sensitive.attribute_count() != stages_.size())
        throw ValidationError("sensitive frame does not match the fitted stages");
    for (std::size_t s = 0; s < stages_.size(); ++s)
        if (sensitive.columns()[s] != stages_[s].attribute())
            throw ValidationError("sensitive column order does not match the fitted stages");

    EpsilonVector eps = epsilon.value_or(EpsilonVector::zeros(stages_.size()));
    eps.validate(stages_.size());

    auto current = jitter(predictions, sigma_, derive_seed(seed_, kStreamTransformJitter));
    y_fair_.clear();
    y_fair_.emplace_back("Base model", current);
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        current = stages_[s].transform_prejittered(current, sensitive.column(s), eps.values[s]);
        y_fair_.emplace_back(stages_[s].attribute(), current);
    }
    return current;
}

// ---- persistence ----

struct CalibratorCodec {
    static nlohmann::ordered_json encode(const MsaCalibrator& cal) {
        nlohmann::ordered_json doc;
        doc["schema_version"] = 1;
        doc["sigma"] = cal.sigma_;
        doc["seed"] = cal.seed_;
        doc["stages"] = nlohmann::ordered_json::array();
        for (const auto& st : cal.stages_) {
            nlohmann::ordered_json js;
            js["attribute"] = st.attribute_;
            js["groups"] = nlohmann::ordered_json::object();
            for (std::size_t g = 0; g < st.modalities_.size(); ++g) {
                js["groups"][st.modalities_[g]] = {{"weight", st.weights_[g]},
                                                   {"values", st.values_[g]}};
            }
            doc["stages"].push_back(std::move(js));
        }
        return doc;
    }

    static MsaCalibrator decode(const nlohmann::json& doc) {
        if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
            throw ValidationError("model document: missing schema_version");
        if (doc["schema_version"].get<int>() != 1)
            throw ValidationError("model document: unsupported schema_version");
        if (!doc.contains("sigma") || !doc.contains("stages") || !doc["stages"].is_array() ||
            doc["stages"].empty())
            throw ValidationError("model document: missing sigma or stages");

        MsaCalibrator cal;
        cal.sigma_ = doc["sigma"].get<double>();
        cal.seed_ = doc.value("seed", std::uint64_t{0});
        for (const auto& js : doc["stages"]) {
            if (!js.contains("attribute") || !js.contains("groups") || !js["groups"].is_object())
                throw ValidationError("model document: malformed stage");
            SsaCalibrator st;
            st.attribute_ = js["attribute"].get<std::string>();
            st.sigma_ = cal.sigma_;
            st.seed_ = cal.seed_;
            double wsum = 0.0;
            for (const auto& [mod, grp] : js["groups"].items()) {
                if (!grp.contains("weight") || !grp.contains("values") || !grp["values"].is_array() ||
                    grp["values"].empty())
                    throw ValidationError("model document: group '" + mod +
                                          "' is missing weight or values");
                st.modalities_.push_back(mod);
                st.weights_.push_back(grp["weight"].get<double>());
                auto vals = grp["values"].get<std::vector<double>>();
                if (!std::is_sorted(vals.begin(), vals.end()))
                    throw ValidationError("model document: group values must be sorted");
                st.values_.push_back(std::move(vals));
                wsum += st.weights_.back();
            }
            if (st.modalities_.size() < 2)
                throw ValidationError("model document: stage needs at least 2 groups");
            if (std::abs(wsum - 1.0) > 1e-9)
                throw ValidationError("model document: group weights must sum to 1");
            for (std::size_t g = 0; g < st.modalities_.size(); ++g) st.index_[st.modalities_[g]] = g;
            st.fitted_ = true;
            cal.stages_.push_back(std::move(st));
        }
        cal.fitted_ = true;
        return cal;
    }
};

std::string save_calibrator(const MsaCalibrator& cal) {
    if (!cal.fitted()) throw StateError("cannot save an unfitted calibrator");
    return CalibratorCodec::encode(cal).dump(2);
}

MsaCalibrator load_calibrator(const std::string& document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("model document: invalid JSON: ") + e.what());
    }
    return CalibratorCodec::decode(doc);
}

}  // namespace equifair
