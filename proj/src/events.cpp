#include "sassdpr/events.hpp"

#include <algorithm>
#include <cmath>

namespace sassdpr {

std::string to_string(EventLabel l) {
    switch (l) {
        case EventLabel::KComplex: return "kcomplex";
        case EventLabel::Spindle: return "spindle";
        case EventLabel::Generic: return "generic";
    }
    return "?";
}

VectorXd tkeo(const VectorXd& x) {
    const Eigen::Index n = x.size();
    if (n < 3) throw TooShort("tkeo needs at least 3 samples");
    VectorXd e(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) e[i] = x[i] * x[i] - x[i - 1] * x[i + 1];
    e[0] = e[1];
    e[n - 1] = e[n - 2];
    return e;
}

DetectionRule kcomplex_rule() {
    DetectionRule r;
    r.threshold = 0.5;
    r.min_dur_s = 0.5;
    r.max_dur_s = 2.25;
    r.merge_window_s = 1.5;
    r.keep_first = true;
    r.label = EventLabel::KComplex;
    return r;
}

DetectionRule spindle_rule() {
    DetectionRule r;
    r.threshold = 0.05;
    r.min_dur_s = 0.5;
    r.max_dur_s = 3.0;
    r.label = EventLabel::Spindle;
    return r;
}

std::vector<EventInterval> detect_events(const VectorXd& energy, double fs, const DetectionRule& rule) {
    if (!(rule.threshold > 0.0)) throw ParameterError("detection threshold must be positive");
    if (!(fs > 0.0)) throw ParameterError("fs must be positive");
    const double min_len = rule.min_dur_s * fs;
    const double max_len = rule.max_dur_s * fs;
    const double merge_len = rule.merge_window_s * fs;
    const int n = static_cast<int>(energy.size());

    std::vector<EventInterval> out;
    int i = 0;
    while (i < n) {
        if (!(energy[i] > rule.threshold)) {
            ++i;
            continue;
        }
        EventInterval ev;
        ev.start = i;
        ev.label = rule.label;
        while (i < n && energy[i] > rule.threshold) {
            ev.peak_energy = std::max(ev.peak_energy, energy[i]);
            ++i;
        }
        ev.end = i;
        if (ev.length() < min_len || ev.length() > max_len) continue;
        if (rule.keep_first && !out.empty() && ev.start - out.back().start < merge_len) continue;
        out.push_back(ev);
    }
    return out;
}

namespace {

void finish(ScoreReport& s) {
    const double tp = static_cast<double>(s.tp), fp = static_cast<double>(s.fp);
    const double fn = static_cast<double>(s.fn), tn = static_cast<double>(s.tn);
    const double n = tp + fp + fn + tn;
    s.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    s.specificity = tn + fp > 0 ? tn / (tn + fp) : 0.0;
    s.f1 = 2 * tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
    if (fp + fn == 0 && n > 0) {
        s.kappa = 1.0;
        return;
    }
    const double po = (tp + tn) / n;
    const double pe = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (n * n);
    s.kappa = pe < 1.0 ? (po - pe) / (1.0 - pe) : 0.0;
}

bool overlaps(const EventInterval& a, const EventInterval& b) {
    return a.start < b.end && b.start < a.end;
}

std::vector<char> mask(const std::vector<EventInterval>& ev, int N) {
    std::vector<char> m(N, 0);
    for (const auto& e : ev) {
        if (e.start < 0 || e.end > N || e.start >= e.end)
            throw ShapeError("interval [" + std::to_string(e.start) + ", " + std::to_string(e.end) +
                             ") outside [0, " + std::to_string(N) + ")");
        std::fill(m.begin() + e.start, m.begin() + e.end, 1);
    }
    return m;
}

}  // namespace

ScoreReport score_events(const std::vector<EventInterval>& detected, const std::vector<EventInterval>& reference,
                         int N) {
    const auto d = mask(detected, N);
    const auto r = mask(reference, N);
    ScoreReport s;
    for (int i = 0; i < N; ++i) {
        if (d[i] && r[i]) ++s.tp;
        else if (d[i]) ++s.fp;
        else if (r[i]) ++s.fn;
        else ++s.tn;
    }
    s.reference_events = static_cast<int>(reference.size());
    for (const auto& ref : reference) {
        if (std::any_of(detected.begin(), detected.end(), [&](const EventInterval& e) { return overlaps(e, ref); }))
            ++s.events_detected;
    }
    for (const auto& e : detected) {
        if (std::none_of(reference.begin(), reference.end(), [&](const EventInterval& ref) { return overlaps(e, ref); }))
            ++s.false_detections;
    }
    finish(s);
    return s;
}

ScoreReport merge_scores(const std::vector<ScoreReport>& parts) {
    ScoreReport s;
    for (const auto& p : parts) {
        s.tp += p.tp;
        s.fp += p.fp;
        s.fn += p.fn;
        s.tn += p.tn;
        s.events_detected += p.events_detected;
        s.reference_events += p.reference_events;
        s.false_detections += p.false_detections;
    }
    finish(s);
    return s;
}

std::vector<double> grid_range(double lo, double hi, double step) {
    if (!(step > 0.0)) throw ParameterError("grid step must be positive");
    std::vector<double> v;
    for (int i = 0;; ++i) {
        const double x = lo + i * step;
        if (x > hi + 0.5 * step) break;
        v.push_back(x);
    }
    return v;
}

GridResult grid_search(const std::vector<LabeledEpoch>& epochs, const EpochDetector& detect,
                       const std::vector<std::vector<double>>& axes, double spec_floor, double sens_floor) {
    if (epochs.empty()) throw EmptyGrid("grid search needs at least one labeled epoch");
    if (axes.empty()) throw EmptyGrid("grid search needs at least one axis");
    for (const auto& a : axes)
        if (a.empty()) throw EmptyGrid("grid axis has no points");

    GridResult res;
    std::vector<size_t> idx(axes.size(), 0);
    for (;;) {
        GridRow row;
        for (size_t a = 0; a < axes.size(); ++a) row.params.push_back(axes[a][idx[a]]);
        std::vector<ScoreReport> parts;
        for (const auto& ep : epochs)
            parts.push_back(score_events(detect(ep, row.params), ep.reference, static_cast<int>(ep.y.size())));
        row.score = merge_scores(parts);
        row.feasible = row.score.specificity >= spec_floor && row.score.recall >= sens_floor;
        if (row.feasible) res.feasible.push_back(static_cast<int>(res.rows.size()));
        res.rows.push_back(std::move(row));

        size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].size()) break;
            idx[a] = 0;
            if (a == 0) return res;
        }
    }
}

}  // namespace sassdpr
