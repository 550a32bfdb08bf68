#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sassdpr/events.hpp"

namespace sassdpr {

struct SynthSignal {
    double fs = 0.0;
    VectorXd y;
    std::map<std::string, VectorXd> truth;  // named components, y = sum + noise
    std::vector<EventInterval> events;       // injected patterns
};

// Unit-variance 1/f noise by spectral shaping of white Gaussian noise.
VectorXd pink_noise(int N, std::uint64_t seed);

// 0.5 Hz sinusoid plus steps of +1 at 0.9 s and -1.5 at 1.8 s, 3 s long.
SynthSignal synth_sasd(double fs, double sigma, std::uint64_t seed);

// 20 s: 0.1 Hz drift (x1), 13 Hz burst over 8-12 s (x2), +-1 pulses at 4.0-4.5 s and 15.5-16 s (x3).
SynthSignal synth_sasdpr(double fs, double sigma, std::uint64_t seed);

// Biphasic db2-shaped pulse, negative lobe first, peak magnitude 1.
VectorXd kcomplex_waveform(int length);

struct PatternScenario {
    double fs = 200.0;
    double duration_s = 30.0;
    int events = 2;
    double amplitude = 150.0;   // pattern peak, microvolts
    double noise_rms = 5.0;     // pink background, microvolts
    double pattern_s = 0.7;     // pattern duration
};

// K-complex-like pulses or 13 Hz spindle bursts placed at random non-overlapping positions.
SynthSignal synth_kcomplex(const PatternScenario& sc, std::uint64_t seed);
SynthSignal synth_spindle(const PatternScenario& sc, std::uint64_t seed);

PatternScenario default_kcomplex_scenario();  // 150 uV peak, 0.7 s
PatternScenario default_spindle_scenario();   // 30 uV peak, 1 s

}  // namespace sassdpr
