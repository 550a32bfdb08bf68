#include "sassdpr/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "sassdpr/synth.hpp"

namespace sassdpr {

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int next_pow2(double x) {
    int W = 1;
    while (W < x) W *= 2;
    return W;
}

}  // namespace

double rmse(const VectorXd& a, const VectorXd& b) {
    if (a.size() != b.size() || a.size() == 0) throw LengthMismatch("rmse needs equal nonempty vectors");
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

Stat summarize(const std::vector<double>& v) {
    Stat s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        for (double x : v) s.std += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(s.std / static_cast<double>(v.size() - 1));
    }
    return s;
}

// ---- denoising ----

DenoiseOutput denoise(const VectorXd& y, double fs, const DenoiseConfig& cfg, const FactorCache* cache) {
    if (!(fs > 0.0)) throw ParameterError("fs must be positive");
    if (!(cfg.lam > 0.0)) throw ParameterError("lambda must be positive");
    const int N = static_cast<int>(y.size());
    const int P = cfg.P >= 0 ? cfg.P : pad_length(fs);
    const int Np = N + 2 * P;

    FilterSpec lp{ResponseKind::LowPass, cfg.M, {cfg.cutoff}};
    FilterSpec hp{ResponseKind::HighPass, cfg.M, {cfg.cutoff}};
    ZeroPhaseOperator lpf(lp.build(), Np, PaddingPolicy{P, cfg.pad_degree});
    const FactorizedFilter hpf = cached_factorize(hp, Np, cfg.K, cfg.apgd, cache);

    DenoiseOutput out;
    out.P = P;
    out.result = sasd(y, lpf, hpf, cfg.lam, cfg.fista);
    out.certificate = check_sasd_optimality(out.result, hpf);
    return out;
}

// ---- detection ----

namespace {

Detection finish(const VectorXd& component, double fs, const DetectionRule& rule) {
    Detection d;
    d.energy = tkeo(component);
    d.events = detect_events(d.energy, fs, rule);
    return d;
}

void check_scale(double s) {
    if (!(s > 0.0)) throw ParameterError("amplitude scale must be positive");
}

}  // namespace

KComplexDetector::KComplexDetector(int N, KComplexConfig cfg)
    : cfg_(std::move(cfg)),
      lpf_(design_lowpass(cfg_.M, cfg_.lp_cutoff), N),
      bpf_(design_bandpass(cfg_.M, cfg_.band_lo, cfg_.band_hi), N),
      dict_(cfg_.W, N),
      F_(sapr_system(bpf_, cfg_.mu)) {
    check_scale(cfg_.scale);
}

Detection KComplexDetector::run(const VectorXd& y, double fs) const {
    return run(y, fs, cfg_.lam0, cfg_.lam1);
}

Detection KComplexDetector::run(const VectorXd& y, double fs, double lam0, double lam1) const {
    const VectorXd ys = cfg_.scale * y;
    const SaprResult r = sapr(ys, lpf_, bpf_, dict_, lam0, lam1, cfg_.mu, cfg_.eta, cfg_.admm, &F_);
    Detection d = finish(r.pattern, fs, cfg_.rule);
    d.iterations = r.iterations;
    d.converged = r.converged;
    d.final_cost = r.cost_trace.empty() ? 0.0 : r.cost_trace.back();
    d.components = {{"y", y}, {"pattern", r.pattern / cfg_.scale}, {"energy", d.energy}};
    return d;
}

SpindleDetector::SpindleDetector(int N, SpindleConfig cfg)
    : cfg_(std::move(cfg)),
      lpf_(design_lowpass(cfg_.M, cfg_.lp_cutoff), N),
      bpf_(design_bandpass(cfg_.M, cfg_.band_lo, cfg_.band_hi), N),
      dict_(cfg_.W, N),
      F_(sasdpr_system(lpf_, bpf_, cfg_.mu)) {
    check_scale(cfg_.scale);
}

Detection SpindleDetector::run(const VectorXd& y, double fs) const {
    return run(y, fs, cfg_.lam0, cfg_.lam1, cfg_.lam2);
}

Detection SpindleDetector::run(const VectorXd& y, double fs, double lam0, double lam1, double lam2) const {
    const VectorXd ys = cfg_.scale * y;
    const SasdprResult r = sasdpr(ys, lpf_, bpf_, dict_, lam0, lam1, lam2, cfg_.mu, cfg_.admm, &F_);
    Detection d = finish(r.x2, fs, cfg_.rule);
    d.iterations = r.iterations;
    d.converged = r.converged;
    d.final_cost = r.cost_trace.empty() ? 0.0 : r.cost_trace.back();
    const double inv = 1.0 / cfg_.scale;
    d.components = {{"y", y}, {"x1", inv * r.x1}, {"x2", inv * r.x2}, {"x3", inv * r.x3}, {"energy", d.energy}};
    return d;
}

// ---- benchmarks ----

std::vector<Table1Row> benchmark_table1(const std::vector<int>& Ns, const std::vector<int>& Ks,
                                        const FactorCache* cache) {
    const FilterSpec hp{ResponseKind::HighPass, 2, {0.2 * kPi}, 0.1 * kPi};
    const CompositeFilter g = hp.build();
    ApgdOptions opt;
    opt.throw_on_cap = false;
    std::vector<Table1Row> rows;
    for (int N : Ns) {
        for (int K : Ks) {
            const auto t0 = std::chrono::steady_clock::now();
            const FactorizedFilter f = cached_factorize(hp, N, K, opt, cache);
            Table1Row r;
            r.N = N;
            r.K = K;
            r.error = factorization_error(g.ss, f.G1, f.D);
            r.norm = centered_filter_norm(g.ss, f.G1);
            r.iterations = f.iterations;
            r.converged = f.converged;
            r.seconds = seconds_since(t0);
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<Table3Row> benchmark_table3(int trials, std::uint64_t seed, const std::vector<int>& Ms,
                                        const std::vector<double>& sigmas, const FactorCache* cache) {
    if (trials < 1) throw ParameterError("trials must be at least 1");
    constexpr double fs = 100.0;
    std::vector<Table3Row> rows;
    for (int M : Ms) {
        DenoiseConfig cfg;
        cfg.M = M;
        const int N = static_cast<int>(synth_sasd(fs, 0.0, seed).y.size());
        const int P = pad_length(fs);
        const FilterSpec hp{ResponseKind::HighPass, M, {cfg.cutoff}};
        ZeroPhaseOperator lpf(design_lowpass(M, cfg.cutoff), N + 2 * P, PaddingPolicy{P, 1});
        const FactorizedFilter hpf = cached_factorize(hp, N + 2 * P, cfg.K, cfg.apgd, cache);
        for (double sigma : sigmas) {
            std::vector<double> a, b, c;
            for (int t = 0; t < trials; ++t) {
                const SynthSignal s = synth_sasd(fs, sigma, seed + static_cast<std::uint64_t>(t));
                const VectorXd& truth = s.truth.at("x");
                a.push_back(rmse(sasd(s.y, lpf, hpf, 3.0 * sigma, cfg.fista).x, truth));
                b.push_back(rmse(lowpass_baseline(s.y, lpf), truth));
                c.push_back(rmse(tvd_baseline(s.y, 2.0 * sigma), truth));
            }
            rows.push_back({M, sigma, summarize(a), summarize(b), summarize(c)});
        }
    }
    return rows;
}

namespace {

struct Table4Setup {
    int N, P;
    ZeroPhaseOperator lpf, bpf;
    StftDictionary dict;
    GramSystem F;

    Table4Setup(double fs, int M, const Table4Config& cfg)
        : N(static_cast<int>(synth_sasdpr(fs, 0.0, 0).y.size())),
          P(static_cast<int>(std::lround(2.0 * fs))),
          lpf(design_lowpass(M, 2.0 * kPi * cfg.lp_hz / fs), N + 2 * P, PaddingPolicy{P, 1}),
          bpf(design_bandpass(M, 2.0 * kPi * cfg.band_lo_hz / fs, 2.0 * kPi * cfg.band_hi_hz / fs), N + 2 * P),
          dict(next_pow2(fs), N + 2 * P),
          F(sasdpr_system(lpf, bpf, cfg.mu)) {}

    Table4Run solve(double fs, std::uint64_t seed, const Table4Config& cfg) const {
        const SynthSignal s = synth_sasdpr(fs, cfg.sigma, seed);
        Table4Run r;
        r.result = sasdpr(s.y, lpf, bpf, dict, cfg.lam0, cfg.lam1, cfg.lam2, cfg.mu, cfg.admm, &F);
        r.rmse_x1 = rmse(r.result.x1, s.truth.at("x1"));
        r.rmse_x3 = rmse(r.result.x3, s.truth.at("x3"));
        return r;
    }
};

}  // namespace

Table4Run run_table4_case(double fs, int M, std::uint64_t seed, const Table4Config& cfg) {
    return Table4Setup(fs, M, cfg).solve(fs, seed, cfg);
}

std::vector<Table4Row> benchmark_table4(int trials, std::uint64_t seed, const std::vector<double>& fss,
                                        const std::vector<int>& Ms, const Table4Config& cfg) {
    if (trials < 1) throw ParameterError("trials must be at least 1");
    std::vector<Table4Row> rows;
    for (double fs : fss) {
        for (int M : Ms) {
            const auto t0 = std::chrono::steady_clock::now();
            const Table4Setup setup(fs, M, cfg);
            std::vector<double> e1, e3;
            for (int t = 0; t < trials; ++t) {
                const Table4Run r = setup.solve(fs, seed + static_cast<std::uint64_t>(t), cfg);
                e1.push_back(r.rmse_x1);
                e3.push_back(r.rmse_x3);
            }
            rows.push_back({fs, M, summarize(e1), summarize(e3), seconds_since(t0)});
        }
    }
    return rows;
}

}  // namespace sassdpr
