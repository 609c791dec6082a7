#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equifair/distributions.hpp"
#include "equifair/errors.hpp"

namespace equifair {

inline constexpr double kDefaultSigma = 1e-4;

// N x r frame of discrete sensitive attributes, column-major. Modalities are
// compared as trimmed strings, so "1" and 1 denote the same group.
class SensitiveFrame {
public:
    SensitiveFrame() = default;
    SensitiveFrame(std::vector<std::string> columns, std::vector<std::vector<std::string>> data);

    static std::string trim(const std::string& s);

    std::size_t rows() const { return data_.empty() ? 0 : data_.front().size(); }
    std::size_t attribute_count() const { return columns_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::string>& column(std::size_t i) const { return data_.at(i); }
    const std::vector<std::string>& column(const std::string& name) const;
    SensitiveFrame select(std::span<const std::size_t> column_order) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> data_;
};

struct EpsilonVector {
    std::vector<double> values;

    static EpsilonVector zeros(std::size_t r) { return {std::vector<double>(r, 0.0)}; }
    void validate(std::size_t r) const;
};

class MsaCalibrator;

// Per-modality weights and score distributions for one sensitive attribute,
// fitted on a calibration set. transform() sends a score through its own
// group's empirical CDF and the weighted mix of all group quantile
// functions, then blends with the input by epsilon.
class SsaCalibrator {
public:
    SsaCalibrator() = default;

    const std::string& attribute() const { return attribute_; }
    bool fitted() const { return fitted_; }
    double sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::string>& modalities() const { return modalities_; }
    double weight(const std::string& modality) const;
    const std::vector<double>& group_values(const std::string& modality) const;

    std::vector<double> transform(std::span<const double> predictions,
                                  const SensitiveFrame& sensitive, double epsilon = 0.0) const;

    // Chain entry points: the caller owns the jitter realization.
    void fit_prejittered(std::span<const double> jittered, const std::vector<std::string>& column,
                         const std::string& attribute);
    std::vector<double> transform_prejittered(std::span<const double> jittered,
                                              const std::vector<std::string>& column,
                                              double epsilon = 0.0) const;

    friend SsaCalibrator fit_ssa(std::span<const double>, const SensitiveFrame&, double,
                                 std::uint64_t);
    friend MsaCalibrator fit_msa(std::span<const double>, const SensitiveFrame&, double,
                                 std::uint64_t);
    friend class MsaCalibrator;
    friend struct CalibratorCodec;

private:
    std::string attribute_;
    std::vector<std::string> modalities_;          // sorted for determinism
    std::vector<std::vector<double>> values_;      // sorted jittered scores per modality
    std::vector<double> weights_;
    std::map<std::string, std::size_t> index_;
    double sigma_ = kDefaultSigma;
    std::uint64_t seed_ = 0;
    bool fitted_ = false;

    std::vector<std::size_t> resolve_groups(const std::vector<std::string>& column) const;
};

SsaCalibrator fit_ssa(std::span<const double> predictions, const SensitiveFrame& sensitive,
                      double sigma = kDefaultSigma, std::uint64_t seed = 0);

// Ordered chain of single-attribute calibrators. Stage 1 is fitted on the
// jittered calibration scores; each later stage on the scores already
// corrected by the stages before it. Jitter is drawn once per input vector,
// at chain entry, from sub-seeds derived from the master seed.
class MsaCalibrator {
public:
    MsaCalibrator() = default;

    bool fitted() const { return fitted_; }
    double sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t stage_count() const { return stages_.size(); }
    const SsaCalibrator& stage(std::size_t i) const { return stages_.at(i); }
    std::vector<std::string> attributes() const;

    std::vector<double> transform(std::span<const double> predictions,
                                  const SensitiveFrame& sensitive,
                                  const std::optional<EpsilonVector>& epsilon = std::nullopt);

    // Stage-by-stage predictions of the last transform(): "Base model"
    // first, then one entry per attribute in correction order.
    const std::vector<std::pair<std::string, std::vector<double>>>& y_fair() const {
        return y_fair_;
    }

    friend MsaCalibrator fit_msa(std::span<const double>, const SensitiveFrame&, double,
                                 std::uint64_t);
    friend struct CalibratorCodec;

private:
    std::vector<SsaCalibrator> stages_;
    std::vector<std::pair<std::string, std::vector<double>>> y_fair_;
    double sigma_ = kDefaultSigma;
    std::uint64_t seed_ = 0;
    bool fitted_ = false;
};

MsaCalibrator fit_msa(std::span<const double> predictions, const SensitiveFrame& sensitive,
                      double sigma = kDefaultSigma, std::uint64_t seed = 0);

// Versioned JSON persistence; load(save(c)) transforms bit-identically.
std::string save_calibrator(const MsaCalibrator& cal);
MsaCalibrator load_calibrator(const std::string& document);

}  // namespace equifair
