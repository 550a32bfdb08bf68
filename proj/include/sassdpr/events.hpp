#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sassdpr/errors.hpp"

namespace sassdpr {

using Eigen::VectorXd;

enum class EventLabel { KComplex, Spindle, Generic };

std::string to_string(EventLabel l);

// Half-open sample range [start, end).
struct EventInterval {
    int start = 0;
    int end = 0;
    double peak_energy = 0.0;
    EventLabel label = EventLabel::Generic;

    int length() const { return end - start; }
};

// psi(n) = x(n)^2 - x(n-1) x(n+1); the two endpoints repeat their neighbours.
VectorXd tkeo(const VectorXd& x);

struct DetectionRule {
    double threshold = 0.5;
    double min_dur_s = 0.0;
    double max_dur_s = 1e30;
    double merge_window_s = 0.0;
    bool keep_first = false;
    EventLabel label = EventLabel::Generic;
};

DetectionRule kcomplex_rule();  // 0.5, 0.5-2.25 s, first of any pair within 1.5 s
DetectionRule spindle_rule();   // 0.05, 0.5-3.0 s

std::vector<EventInterval> detect_events(const VectorXd& energy, double fs, const DetectionRule& rule);

struct ScoreReport {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;
    double recall = 0.0;  // sensitivity
    double specificity = 0.0;
    double f1 = 0.0;
    double kappa = 0.0;
    int events_detected = 0;  // reference events overlapped by a detection
    int reference_events = 0;
    int false_detections = 0;  // detections overlapping no reference event
};

ScoreReport score_events(const std::vector<EventInterval>& detected, const std::vector<EventInterval>& reference,
                         int N);

// Sums confusion counts and event tallies, then recomputes the ratios.
ScoreReport merge_scores(const std::vector<ScoreReport>& parts);

struct LabeledEpoch {
    VectorXd y;
    std::vector<EventInterval> reference;
};

struct GridRow {
    std::vector<double> params;
    ScoreReport score;
    bool feasible = false;
};

struct GridResult {
    std::vector<GridRow> rows;
    std::vector<int> feasible;  // indices into rows
};

using EpochDetector = std::function<std::vector<EventInterval>(const LabeledEpoch&, const std::vector<double>&)>;

// Cartesian product of the axes, scored on all epochs pooled. Feasible means
// specificity >= spec_floor and sensitivity >= sens_floor.
GridResult grid_search(const std::vector<LabeledEpoch>& epochs, const EpochDetector& detect,
                       const std::vector<std::vector<double>>& axes, double spec_floor, double sens_floor);

// lo, lo + step, ... up to hi inclusive (with a half-step tolerance).
std::vector<double> grid_range(double lo, double hi, double step);

}  // namespace sassdpr
