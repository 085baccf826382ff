#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdarwin/chernoff.hpp"
#include "qdarwin/redundancy.hpp"

namespace qdarwin::cli {

/// Invalid configuration; the message carries "<source>:<line>:" when the
/// offending field can be located.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { ClosedForm, Numeric, Oracle };
enum class Format { Csv, Json };

struct SweepConfig {
    double p1 = 0.5;
    /// |gamma_k| per environment component.
    std::vector<double> gammas;
    /// c-maybe angle per component; asin(gamma_k) when only gamma was given.
    std::vector<double> angles;
    bool homogeneous = true;
    std::vector<std::size_t> fragment_sizes;
    std::vector<double> deltas;
    ThresholdMode threshold = ThresholdMode::Linear;
    Mode mode = Mode::ClosedForm;
    Format format = Format::Csv;
    std::string output;  // empty = stdout
    std::optional<FitWindow> fit_window;
    std::size_t grid_resolution = 128;
    std::string curve_file;

    /// The merged document (config file plus flags) the config was built from.
    nlohmann::json document;

    [[nodiscard]] std::size_t env_size() const { return gammas.size(); }
    [[nodiscard]] std::vector<double> gamma_sq() const;
    /// FNV-1a of the canonical dump of `document`, as 16 hex digits.
    [[nodiscard]] std::string hash() const;
};

/// Command-line values that take precedence over the config document.
struct Overrides {
    std::optional<double> p1;
    std::optional<double> gamma;
    std::optional<double> angle;
    std::optional<std::size_t> env_size;
    std::optional<std::size_t> frag_max;
    std::vector<double> deltas;
    std::optional<std::string> mode;
    std::optional<std::string> format;
    std::optional<std::string> output;
};

/// Parses and validates a JSON config. `source` names the input in messages.
SweepConfig load_config(const std::string& text, const std::string& source, const Overrides& overrides = {});

}  // namespace qdarwin::cli
