#include "sassdpr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sassdpr {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ParameterError("cannot open " + p.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw ParameterError("cannot write " + p.string());
    return out;
}

}  // namespace

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

SignalFile read_signal_csv(const std::filesystem::path& path, std::optional<double> fs_override) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ShapeError(path.string() + ": empty file");
    const auto header = split(line);
    std::vector<std::vector<double>> cols(header.size());
    for (int row = 2; std::getline(in, line); ++row) {
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw ShapeError(path.string() + ":" + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields");
        for (size_t c = 0; c < cells.size(); ++c) {
            double v;
            if (!parse_double(cells[c], v) || !std::isfinite(v))
                throw ShapeError(path.string() + ":" + std::to_string(row) + ": bad number '" + cells[c] + "'");
            cols[c].push_back(v);
        }
    }

    int value_col = -1;
    for (size_t c = 0; c < header.size() && value_col < 0; ++c)
        if (header[c] == "value") value_col = static_cast<int>(c);
    for (size_t c = 0; c < header.size() && value_col < 0; ++c)
        if (header[c] != "t") value_col = static_cast<int>(c);

    SignalFile f;
    for (size_t c = 0; c < header.size(); ++c) {
        const VectorXd v = Eigen::Map<const VectorXd>(cols[c].data(), static_cast<Eigen::Index>(cols[c].size()));
        if (static_cast<int>(c) == value_col) {
            f.samples = v;
            f.channel = header[c];
        } else if (header[c] == "t") {
            f.t = v;
        } else {
            f.extra[header[c]] = v;
        }
    }
    if (value_col < 0) throw ShapeError(path.string() + ": no signal column");
    if (f.samples.size() == 0) throw ShapeError(path.string() + ": no samples");

    if (fs_override) {
        f.fs = *fs_override;
    } else {
        std::filesystem::path side = path;
        side += ".json";
        if (std::filesystem::exists(side)) {
            std::ifstream sj(side);
            const auto j = nlohmann::json::parse(sj, nullptr, false);
            if (j.is_object() && j.contains("fs") && j["fs"].is_number()) f.fs = j["fs"].get<double>();
        } else if (f.t && f.t->size() > 1) {
            const double dt = ((*f.t)[f.t->size() - 1] - (*f.t)[0]) / static_cast<double>(f.t->size() - 1);
            if (dt > 0.0) f.fs = 1.0 / dt;
        }
    }
    if (!(f.fs > 0.0)) throw ParameterError(path.string() + ": sampling rate unknown (use --fs or a sidecar)");
    return f;
}

void write_columns_csv(const std::filesystem::path& path, const std::vector<Column>& cols) {
    auto out = open_out(path);
    Eigen::Index n = cols.empty() ? 0 : cols.front().values.size();
    for (size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].values.size() != n) throw ShapeError("column " + cols[c].name + " has a different length");
        out << (c ? "," : "") << cols[c].name;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << fmt(cols[c].values[i]);
        out << '\n';
    }
}

std::vector<EventInterval> read_annotations(const std::filesystem::path& path, double fs, int N) {
    auto in = open_in(path);
    std::vector<EventInterval> ev;
    std::string line;
    for (int row = 1; std::getline(in, line); ++row) {
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        double a, b;
        if (cells.size() < 2 || !parse_double(cells[0], a) || !parse_double(cells[1], b)) {
            if (row == 1) continue;  // header
            throw ShapeError(path.string() + ":" + std::to_string(row) + ": expected start_s,end_s");
        }
        EventInterval e;
        e.start = std::clamp(static_cast<int>(std::lround(a * fs)), 0, N);
        e.end = std::clamp(static_cast<int>(std::lround(b * fs)), 0, N);
        if (e.end > e.start) ev.push_back(e);
    }
    return ev;
}

void write_annotations(const std::filesystem::path& path, const std::vector<EventInterval>& ev, double fs) {
    auto out = open_out(path);
    out << "start_s,end_s\n";
    for (const auto& e : ev) out << fmt(e.start / fs) << ',' << fmt(e.end / fs) << '\n';
}

void write_events_csv(const std::filesystem::path& path, const std::vector<EventInterval>& ev, double fs) {
    auto out = open_out(path);
    out << "start_s,end_s,peak_energy,label\n";
    for (const auto& e : ev)
        out << fmt(e.start / fs) << ',' << fmt(e.end / fs) << ',' << fmt(e.peak_energy) << ',' << to_string(e.label)
            << '\n';
}

}  // namespace sassdpr
