#include "sassdpr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <fftw3.h>

#include "sassdpr/dictionaries.hpp"

namespace sassdpr {

namespace {

constexpr double kPi = std::numbers::pi;

VectorXd white(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    VectorXd w(N);
    for (int i = 0; i < N; ++i) w[i] = nd(rng);
    return w;
}

int round_index(double t, double fs) {
    return static_cast<int>(std::lround(t * fs));
}

// Start positions at least `gap` samples apart and `margin` samples from the ends.
std::vector<int> place(int N, int count, int length, int gap, int margin, std::mt19937_64& rng) {
    std::vector<int> starts;
    const int lo = margin, hi = N - margin - length;
    if (hi <= lo) throw ParameterError("record too short for the requested patterns");
    std::uniform_int_distribution<int> u(lo, hi);
    for (int tries = 0; static_cast<int>(starts.size()) < count; ++tries) {
        if (tries > 100000) throw ParameterError("cannot place patterns with the requested spacing");
        const int s = u(rng);
        if (std::all_of(starts.begin(), starts.end(), [&](int o) { return std::abs(o - s) >= gap; }))
            starts.push_back(s);
    }
    std::sort(starts.begin(), starts.end());
    return starts;
}

}  // namespace

VectorXd pink_noise(int N, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VectorXd w = white(N, rng);
    if (N < 4) return w;
    const int H = N / 2 + 1;
    std::vector<std::complex<double>> spec(H);
    VectorXd out(N);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(N, w.data(), reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    spec[0] = 0.0;
    for (int k = 1; k < H; ++k) spec[k] /= std::sqrt(static_cast<double>(k));
    fftw_plan inv = fftw_plan_dft_c2r_1d(N, reinterpret_cast<fftw_complex*>(spec.data()), out.data(), FFTW_ESTIMATE);
    fftw_execute(inv);
    fftw_destroy_plan(inv);
    out.array() -= out.mean();
    const double sd = std::sqrt(out.squaredNorm() / N);
    return sd > 0.0 ? VectorXd(out / sd) : out;
}

SynthSignal synth_sasd(double fs, double sigma, std::uint64_t seed) {
    if (!(fs > 0.0)) throw ParameterError("fs must be positive");
    const int N = round_index(3.0, fs);
    const int j1 = round_index(0.9, fs), j2 = round_index(1.8, fs);
    std::mt19937_64 rng(seed);
    const VectorXd noise = white(N, rng);
    SynthSignal s;
    s.fs = fs;
    VectorXd x1(N), x2(N);
    for (int n = 0; n < N; ++n) {
        x1[n] = std::sin(2.0 * kPi * 0.5 * n / fs);
        x2[n] = (n >= j1 ? 1.0 : 0.0) - (n >= j2 ? 1.5 : 0.0);
    }
    s.y = x1 + x2 + sigma * noise;
    s.truth["x1"] = x1;
    s.truth["x2"] = x2;
    s.truth["x"] = x1 + x2;
    return s;
}

SynthSignal synth_sasdpr(double fs, double sigma, std::uint64_t seed) {
    if (!(fs > 0.0)) throw ParameterError("fs must be positive");
    const int N = round_index(20.0, fs);
    std::mt19937_64 rng(seed);
    const VectorXd noise = white(N, rng);
    SynthSignal s;
    s.fs = fs;
    VectorXd x1(N), x2(N), x3(N);
    for (int n = 0; n < N; ++n) {
        const double t = n / fs;
        x1[n] = std::sin(2.0 * kPi * 0.1 * t);
        const double env = (t >= 8.0 && t < 12.0) ? std::pow(std::sin(kPi * (t - 8.0) / 4.0), 2) : 0.0;
        x2[n] = 0.5 * env * std::sin(2.0 * kPi * 13.0 * t);
        x3[n] = (t >= 4.0 && t < 4.5) ? 1.0 : ((t >= 15.5 && t < 16.0) ? -1.0 : 0.0);
    }
    s.y = x1 + x2 + x3 + sigma * noise;
    s.truth["x1"] = x1;
    s.truth["x2"] = x2;
    s.truth["x3"] = x3;
    EventInterval burst;
    burst.start = round_index(8.0, fs);
    burst.end = round_index(12.0, fs);
    burst.label = EventLabel::Spindle;
    s.events.push_back(burst);
    return s;
}

VectorXd kcomplex_waveform(int length) {
    if (length < 4) throw ParameterError("pattern too short");
    constexpr int L = 64;
    std::vector<double> c(L, 0.0), atom(L);
    c[10] = 1.0;  // one detail coefficient at spacing 8
    idwt_periodic(c.data(), atom.data(), L);
    int first = 0, last = L - 1;
    while (first < L && std::abs(atom[first]) < 1e-12) ++first;
    while (last > first && std::abs(atom[last]) < 1e-12) --last;
    const int m = last - first + 1;

    VectorXd w(length);
    for (int i = 0; i < length; ++i) {
        const double pos = static_cast<double>(i) * (m - 1) / (length - 1);
        const int k = std::min(static_cast<int>(pos), m - 2);
        const double f = pos - k;
        w[i] = (1.0 - f) * atom[first + k] + f * atom[first + k + 1];
    }
    Eigen::Index imin, imax;
    w.minCoeff(&imin);
    w.maxCoeff(&imax);
    if (std::abs(w[imax]) > std::abs(w[imin])) {
        w = -w;
        std::swap(imin, imax);
    }
    if (imin > imax) w.reverseInPlace();
    return w / w.cwiseAbs().maxCoeff();
}

PatternScenario default_kcomplex_scenario() {
    PatternScenario sc;
    sc.amplitude = 150.0;
    sc.noise_rms = 5.0;
    return sc;
}

PatternScenario default_spindle_scenario() {
    PatternScenario sc;
    sc.amplitude = 30.0;
    sc.noise_rms = 5.0;
    sc.pattern_s = 1.0;
    return sc;
}

namespace {

SynthSignal synth_pattern(const PatternScenario& sc, std::uint64_t seed, EventLabel label) {
    if (!(sc.fs > 0.0) || !(sc.duration_s > 0.0) || sc.events < 0)
        throw ParameterError("invalid pattern scenario");
    const int N = round_index(sc.duration_s, sc.fs);
    const int len = std::max(4, round_index(sc.pattern_s, sc.fs));
    std::mt19937_64 rng(seed);
    const int gap = len + round_index(2.0, sc.fs);
    const std::vector<int> starts = place(N, sc.events, len, gap, round_index(1.5, sc.fs), rng);

    VectorXd shape(len);
    if (label == EventLabel::KComplex) {
        shape = kcomplex_waveform(len);
    } else {
        for (int i = 0; i < len; ++i) {
            const double env = std::pow(std::sin(kPi * (i + 0.5) / len), 2);
            shape[i] = env * std::sin(2.0 * kPi * 13.0 * i / sc.fs);
        }
    }

    SynthSignal s;
    s.fs = sc.fs;
    VectorXd pattern = VectorXd::Zero(N);
    for (int st : starts) {
        pattern.segment(st, len) += sc.amplitude * shape;
        EventInterval ev;
        ev.start = st;
        ev.end = st + len;
        ev.label = label;
        s.events.push_back(ev);
    }
    const VectorXd noise = sc.noise_rms * pink_noise(N, rng());
    s.y = pattern + noise;
    s.truth["pattern"] = pattern;
    s.truth["noise"] = noise;
    return s;
}

}  // namespace

SynthSignal synth_kcomplex(const PatternScenario& sc, std::uint64_t seed) {
    return synth_pattern(sc, seed, EventLabel::KComplex);
}

SynthSignal synth_spindle(const PatternScenario& sc, std::uint64_t seed) {
    return synth_pattern(sc, seed, EventLabel::Spindle);
}

}  // namespace sassdpr
