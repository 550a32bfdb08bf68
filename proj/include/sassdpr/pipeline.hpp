#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sassdpr/cache.hpp"
#include "sassdpr/io.hpp"
#include "sassdpr/solvers.hpp"

namespace sassdpr {

// ---- denoising ----

struct DenoiseConfig {
    int M = 3;
    double cutoff = 0.044 * 3.141592653589793;  // rad/sample, LP and the factored HP share it
    int K = 1;
    double lam = 1.0;
    int P = -1;  // < 0: pad_length(fs)
    int pad_degree = 1;
    FistaOptions fista{.eps = 1e-13, .kmax = 20000, .lipschitz = 0.0, .record_trace = false, .throw_on_cap = false};
    ApgdOptions apgd{.eps = 1e-6, .kmax = 20000, .record_trace = false, .throw_on_cap = false};
};

struct DenoiseOutput {
    SasdResult result;  // x, x1, x2 cropped to the input length
    SasdCertificate certificate;
    int P = 0;
};

DenoiseOutput denoise(const VectorXd& y, double fs, const DenoiseConfig& cfg, const FactorCache* cache = nullptr);

// ---- detection ----

// Defaults are the fs = 200 settings. `scale` multiplies the input before solving; the
// thresholds are in the units the solver sees.
struct KComplexConfig {
    int M = 4;
    double lp_cutoff = 0.006 * 3.141592653589793;
    double band_lo = 0.006 * 3.141592653589793;
    double band_hi = 0.02 * 3.141592653589793;
    int W = 256;
    double lam0 = 160.0, lam1 = 15.0, mu = 0.5, eta = 0.1;
    double scale = 4.0;
    DetectionRule rule = kcomplex_rule();
    AdmmOptions admm;
};

struct SpindleConfig {
    int M = 4;
    double lp_cutoff = 0.02 * 3.141592653589793;
    double band_lo = 0.11 * 3.141592653589793;
    double band_hi = 0.15 * 3.141592653589793;
    int W = 256;
    double lam0 = 0.6, lam1 = 4.8, lam2 = 5.6, mu = 0.1;
    double scale = 0.2;
    DetectionRule rule = spindle_rule();
    AdmmOptions admm;
};

struct Detection {
    std::vector<EventInterval> events;
    VectorXd energy;                // TKEO of the detected component, solver units
    std::vector<Column> components;  // input units
    int iterations = 0;
    bool converged = false;
    double final_cost = 0.0;
};

// Operators and the ADMM system are built once per record length and reused.
class KComplexDetector {
public:
    KComplexDetector(int N, KComplexConfig cfg);
    const KComplexConfig& config() const { return cfg_; }
    Detection run(const VectorXd& y, double fs) const;
    // Same operators, other penalties.
    Detection run(const VectorXd& y, double fs, double lam0, double lam1) const;

private:
    KComplexConfig cfg_;
    ZeroPhaseOperator lpf_, bpf_;
    WdwtDictionary dict_;
    GramSystem F_;
};

class SpindleDetector {
public:
    SpindleDetector(int N, SpindleConfig cfg);
    const SpindleConfig& config() const { return cfg_; }
    Detection run(const VectorXd& y, double fs) const;
    Detection run(const VectorXd& y, double fs, double lam0, double lam1, double lam2) const;

private:
    SpindleConfig cfg_;
    ZeroPhaseOperator lpf_, bpf_;
    StftDictionary dict_;
    GramSystem F_;
};

// ---- benchmarks ----

struct Table1Row {
    int N = 0, K = 0;
    double error = 0.0, norm = 0.0;
    int iterations = 0;
    bool converged = false;
    double seconds = 0.0;
};
// HP at 0.2 pi from the second-order prototype at 0.1 pi; N in {100, 500, 1000}, K in {1, 2}.
std::vector<Table1Row> benchmark_table1(const std::vector<int>& Ns = {100, 500, 1000},
                                        const std::vector<int>& Ks = {1, 2}, const FactorCache* cache = nullptr);

struct Stat {
    double mean = 0.0, std = 0.0;
};
Stat summarize(const std::vector<double>& v);

struct Table3Row {
    int M = 0;
    double sigma = 0.0;
    Stat sasd, lowpass, tvd;
};
// SASD on the fs = 100 sinusoid with jumps at lam = 3 sigma against the plain low-pass
// and TVD (lam = 2 sigma) references; the noise draws are shared by all methods.
std::vector<Table3Row> benchmark_table3(int trials, std::uint64_t seed,
                                        const std::vector<int>& Ms = {1, 2, 3, 4},
                                        const std::vector<double>& sigmas = {0.1, 0.3, 0.5},
                                        const FactorCache* cache = nullptr);

struct Table4Config {
    double lam0 = 0.05, lam1 = 0.5, lam2 = 0.15, mu = 1.0;
    double lp_hz = 0.2;
    double band_lo_hz = 9.0, band_hi_hz = 17.0;
    double sigma = 0.1;
    AdmmOptions admm;
};
struct Table4Row {
    double fs = 0.0;
    int M = 0;
    Stat x1, x3;
    double seconds = 0.0;
};
struct Table4Run {
    SasdprResult result;  // cropped
    double rmse_x1 = 0.0, rmse_x3 = 0.0;
};
// One solve of the drift + burst + pulses scenario.
Table4Run run_table4_case(double fs, int M, std::uint64_t seed, const Table4Config& cfg = {});
std::vector<Table4Row> benchmark_table4(int trials, std::uint64_t seed,
                                        const std::vector<double>& fss = {50, 100, 150, 200},
                                        const std::vector<int>& Ms = {2, 3, 4}, const Table4Config& cfg = {});

double rmse(const VectorXd& a, const VectorXd& b);

}  // namespace sassdpr
