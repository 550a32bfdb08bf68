#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sassdpr/events.hpp"

namespace sassdpr {

struct SignalFile {
    VectorXd samples;
    std::optional<VectorXd> t;
    double fs = 0.0;
    std::string channel = "value";
    std::map<std::string, VectorXd> extra;  // any other numeric columns, e.g. a truth column
};

// Header row required. The signal is the `value` column, or else the first column other than `t`.
// fs comes from fs_override, then a `<file>.json` sidecar with an "fs" key, then the t column spacing.
// Throws ParameterError when none of them gives a positive rate, ShapeError on malformed rows.
SignalFile read_signal_csv(const std::filesystem::path& path, std::optional<double> fs_override = std::nullopt);

// Six significant digits, as every numeric field the tools print.
std::string fmt(double x);

struct Column {
    std::string name;
    VectorXd values;
};
void write_columns_csv(const std::filesystem::path& path, const std::vector<Column>& cols);

// `start_s,end_s` per row (header optional). Intervals are clipped to [0, N).
std::vector<EventInterval> read_annotations(const std::filesystem::path& path, double fs, int N);
void write_annotations(const std::filesystem::path& path, const std::vector<EventInterval>& ev, double fs);
void write_events_csv(const std::filesystem::path& path, const std::vector<EventInterval>& ev, double fs);

}  // namespace sassdpr
