// sassdpr_cli: filter design, denoising, event detection, benchmarks, synthetic data, grid search.
// Exit codes: 0 success, 1 runtime or convergence failure, 2 configuration error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sassdpr/pipeline.hpp"
#include "sassdpr/synth.hpp"

using namespace sassdpr;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// Config problems map to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double num(double x) {
    // Six significant digits in JSON as well.
    return std::stod(fmt(x));
}

json vec_json(const VectorXd& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

void emit_json(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << '\n';
}

json certificate_json(const SasdCertificate& c) {
    return {{"max_inactive_ratio", num(c.max_inactive_ratio)},
            {"max_active_deviation", num(c.max_active_deviation)},
            {"inactive_violations", c.inactive_violations},
            {"sign_violations", c.sign_violations},
            {"passed", c.passed()}};
}

json score_json(const ScoreReport& s) {
    return {{"tp", s.tp},
            {"fp", s.fp},
            {"fn", s.fn},
            {"tn", s.tn},
            {"precision", num(s.precision)},
            {"recall", num(s.recall)},
            {"specificity", num(s.specificity)},
            {"f1", num(s.f1)},
            {"kappa", num(s.kappa)},
            {"events_detected", s.events_detected},
            {"reference_events", s.reference_events},
            {"false_detections", s.false_detections}};
}

VectorXd time_axis(const SignalFile& f) {
    if (f.t) return *f.t;
    VectorXd t(f.samples.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / f.fs;
    return t;
}

std::optional<double> opt_fs(double fs) {
    if (fs > 0.0) return fs;
    return std::nullopt;
}

std::vector<double> parse_range(const std::string& s) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        try {
            parts.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("bad grid range '" + s + "' (lo:hi:step or a single value)");
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw ConfigError("bad grid range '" + s + "' (lo:hi:step or a single value)");
    return grid_range(parts[0], parts[1], parts[2]);
}

// ---- design ----

struct DesignArgs {
    std::string kind = "lp";
    int order = 2;
    double cutoff = 0.2, center = -1, bandwidth = -1, low = -1, high = -1, proto = -1;
    int points = 512, impulse = 64;
    std::string out, csv;
};

// Butterworth prototype zeros sit at w = -1; the unit functions send them to z = -1 (LP),
// z = +1 (HP) or both (BP), so the list is exact rather than polynomial roots.
json zeros_json(ResponseKind kind, int M) {
    json z = json::array();
    auto add = [&](double re, int n) {
        for (int i = 0; i < n; ++i) z.push_back({re, 0.0});
    };
    if (kind == ResponseKind::LowPass) add(-1.0, M);
    if (kind == ResponseKind::HighPass) add(1.0, M);
    if (kind == ResponseKind::BandPass) {
        add(1.0, M);
        add(-1.0, M);
    }
    return z;
}

std::vector<double> half_power_points(const StateSpaceModel& ss, int points) {
    std::vector<double> out;
    auto g = [&](double w) { return std::norm(frequency_response(ss, w)) - 0.5; };
    double wa = 0.0, ga = g(0.0);
    for (int k = 1; k <= points; ++k) {
        const double wb = kPi * k / points, gb = g(wb);
        if ((ga < 0) != (gb < 0)) {
            double lo = wa, hi = wb;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((g(mid) < 0) == (ga < 0) ? lo : hi) = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        wa = wb;
        ga = gb;
    }
    return out;
}

int run_design(const DesignArgs& a) {
    FilterSpec spec;
    spec.kind = parse_response_kind(a.kind);
    spec.M = a.order;
    CompositeFilter g;
    if (spec.kind == ResponseKind::BandPass) {
        if (a.center > 0 && a.bandwidth > 0) {
            g = design_bandpass_center(a.order, a.center * kPi, a.bandwidth * kPi);
        } else if (a.low > 0 && a.high > 0) {
            g = design_bandpass(a.order, a.low * kPi, a.high * kPi);
        } else {
            throw ConfigError("band-pass needs --center/--bandwidth or --low/--high");
        }
    } else {
        spec.cutoffs = {a.cutoff * kPi};
        spec.omega0 = a.proto > 0 ? a.proto * kPi : -1.0;
        g = spec.build();
    }

    json j;
    j["kind"] = to_string(g.response_kind);
    j["prototype_order"] = g.proto_order;
    j["state_dimension"] = g.ss.order();
    json cut = json::array();
    for (double w : g.cutoffs) cut.push_back(num(w / kPi));
    j["cutoffs_pi"] = cut;
    j["dc_gain"] = num(std::abs(frequency_response(g.ss, 0.0)));
    j["nyquist_gain"] = num(std::abs(frequency_response(g.ss, kPi)));
    json hp = json::array();
    for (double w : half_power_points(g.ss, a.points)) hp.push_back(num(w / kPi));
    j["half_power_pi"] = hp;

    const auto h = impulse_response(g.ss, a.impulse);
    j["impulse_response"] = vec_json(Eigen::Map<const VectorXd>(h.data(), static_cast<Eigen::Index>(h.size())));

    VectorXd wgrid(a.points + 1), mag(a.points + 1);
    for (int k = 0; k <= a.points; ++k) {
        wgrid[k] = static_cast<double>(k) / a.points;
        mag[k] = std::abs(frequency_response(g.ss, kPi * wgrid[k]));
    }
    j["frequency_response"] = {{"omega_pi", vec_json(wgrid)}, {"magnitude", vec_json(mag)}};

    json poles = json::array();
    const Eigen::VectorXcd ev = g.ss.A.eigenvalues();
    for (const auto& p : ev) poles.push_back({num(p.real()), num(p.imag())});
    j["poles"] = poles;
    j["zeros"] = zeros_json(g.response_kind, g.proto_order);

    if (!a.csv.empty()) write_columns_csv(a.csv, {{"omega_pi", wgrid}, {"magnitude", mag}});
    emit_json(j, a.out);
    return 0;
}

// ---- denoise ----

struct DenoiseArgs {
    std::string input, out, summary, truth = "truth";
    double fs = 0, cutoff = 0.044, lambda = 1.0;
    int order = 3, K = 1, pad = -1, kmax = 20000;
    double eps = 1e-13;
};

int run_denoise(const DenoiseArgs& a) {
    const SignalFile f = read_signal_csv(a.input, opt_fs(a.fs));
    DenoiseConfig cfg;
    cfg.M = a.order;
    cfg.cutoff = a.cutoff * kPi;
    cfg.K = a.K;
    cfg.lam = a.lambda;
    cfg.P = a.pad;
    cfg.fista.eps = a.eps;
    cfg.fista.kmax = a.kmax;
    const FactorCache cache = FactorCache::from_env();
    const DenoiseOutput d = denoise(f.samples, f.fs, cfg, &cache);
    const SasdResult& r = d.result;

    if (!a.out.empty())
        write_columns_csv(a.out, {{"t", time_axis(f)}, {"y", f.samples}, {"x1", r.x1}, {"x2", r.x2}, {"x", r.x}});

    json j;
    j["n"] = f.samples.size();
    j["fs"] = num(f.fs);
    j["lambda"] = num(a.lambda);
    j["order"] = a.order;
    j["K"] = a.K;
    j["pad"] = d.P;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["final_cost"] = num(r.final_cost);
    j["certificate"] = certificate_json(d.certificate);
    if (auto it = f.extra.find(a.truth); it != f.extra.end()) j["rmse"] = num(rmse(r.x, it->second));
    emit_json(j, a.summary);
    return r.converged ? 0 : 1;
}

// ---- detect ----

struct DetectArgs {
    std::string input, pattern = "kcomplex", ref, events, components, report;
    double fs = 0;
    double scale = -1, threshold = -1, lam0 = -1, lam1 = -1, lam2 = -1, mu = -1, eta = -1;
    int kmax = 200;
    double eps = 1e-5;
};

KComplexConfig kcomplex_config(const DetectArgs& a) {
    KComplexConfig c;
    if (a.scale > 0) c.scale = a.scale;
    if (a.threshold > 0) c.rule.threshold = a.threshold;
    if (a.lam0 > 0) c.lam0 = a.lam0;
    if (a.lam1 > 0) c.lam1 = a.lam1;
    if (a.mu > 0) c.mu = a.mu;
    if (a.eta > 0) c.eta = a.eta;
    c.admm.kmax = a.kmax;
    c.admm.eps = a.eps;
    return c;
}

SpindleConfig spindle_config(const DetectArgs& a) {
    SpindleConfig c;
    if (a.scale > 0) c.scale = a.scale;
    if (a.threshold > 0) c.rule.threshold = a.threshold;
    if (a.lam0 > 0) c.lam0 = a.lam0;
    if (a.lam1 > 0) c.lam1 = a.lam1;
    if (a.lam2 > 0) c.lam2 = a.lam2;
    if (a.mu > 0) c.mu = a.mu;
    c.admm.kmax = a.kmax;
    c.admm.eps = a.eps;
    return c;
}

int run_detect(const DetectArgs& a) {
    const SignalFile f = read_signal_csv(a.input, opt_fs(a.fs));
    const int N = static_cast<int>(f.samples.size());
    Detection d;
    if (a.pattern == "kcomplex") {
        d = KComplexDetector(N, kcomplex_config(a)).run(f.samples, f.fs);
    } else if (a.pattern == "spindle") {
        d = SpindleDetector(N, spindle_config(a)).run(f.samples, f.fs);
    } else {
        throw ConfigError("--pattern must be kcomplex or spindle");
    }

    if (!a.events.empty()) write_events_csv(a.events, d.events, f.fs);
    if (!a.components.empty()) {
        std::vector<Column> cols{{"t", time_axis(f)}};
        cols.insert(cols.end(), d.components.begin(), d.components.end());
        write_columns_csv(a.components, cols);
    }

    json j;
    j["pattern"] = a.pattern;
    j["fs"] = num(f.fs);
    j["n"] = N;
    j["iterations"] = d.iterations;
    j["converged"] = d.converged;
    j["final_cost"] = num(d.final_cost);
    json ev = json::array();
    for (const auto& e : d.events)
        ev.push_back({{"start_s", num(e.start / f.fs)}, {"end_s", num(e.end / f.fs)}, {"peak_energy", num(e.peak_energy)}});
    j["events"] = ev;
    if (!a.ref.empty()) j["score"] = score_json(score_events(d.events, read_annotations(a.ref, f.fs, N), N));
    emit_json(j, a.report);
    return 0;
}

// ---- benchmark ----

struct BenchArgs {
    int table = 3, trials = 20;
    std::uint64_t seed = 1;
    std::string out;
};

int run_benchmark(const BenchArgs& a) {
    std::ostringstream s;
    if (a.table == 1) {
        const FactorCache cache = FactorCache::from_env();
        s << "N,K,error,filter_norm,iterations,converged,seconds\n";
        for (const auto& r : benchmark_table1({100, 500, 1000}, {1, 2}, &cache))
            s << r.N << ',' << r.K << ',' << fmt(r.error) << ',' << fmt(r.norm) << ',' << r.iterations << ','
              << r.converged << ',' << fmt(r.seconds) << '\n';
    } else if (a.table == 3) {
        const FactorCache cache = FactorCache::from_env();
        s << "M,sigma,sasd_mean,sasd_std,lowpass_mean,lowpass_std,tvd_mean,tvd_std\n";
        for (const auto& r : benchmark_table3(a.trials, a.seed, {1, 2, 3, 4}, {0.1, 0.3, 0.5}, &cache))
            s << r.M << ',' << fmt(r.sigma) << ',' << fmt(r.sasd.mean) << ',' << fmt(r.sasd.std) << ','
              << fmt(r.lowpass.mean) << ',' << fmt(r.lowpass.std) << ',' << fmt(r.tvd.mean) << ','
              << fmt(r.tvd.std) << '\n';
    } else if (a.table == 4) {
        s << "fs,M,x1_mean,x1_std,x3_mean,x3_std,seconds\n";
        for (const auto& r : benchmark_table4(a.trials, a.seed))
            s << fmt(r.fs) << ',' << r.M << ',' << fmt(r.x1.mean) << ',' << fmt(r.x1.std) << ',' << fmt(r.x3.mean)
              << ',' << fmt(r.x3.std) << ',' << fmt(r.seconds) << '\n';
    } else {
        throw ConfigError("--table must be 1, 3 or 4");
    }
    if (a.out.empty() || a.out == "-") {
        std::cout << s.str();
    } else {
        std::ofstream o(a.out);
        if (!o) throw ConfigError("cannot write " + a.out);
        o << s.str();
    }
    return 0;
}

// ---- synth ----

struct SynthArgs {
    std::string scenario = "sasd", out, events;
    double fs = 0, sigma = -1, amplitude = -1, noise = -1;
    int count = -1;
    std::uint64_t seed = 1;
};

int run_synth(const SynthArgs& a) {
    SynthSignal s;
    if (a.scenario == "sasd" || a.scenario == "sasdpr") {
        const double fs = a.fs > 0 ? a.fs : 100.0;
        const double sigma = a.sigma >= 0 ? a.sigma : (a.scenario == "sasd" ? 0.2 : 0.1);
        s = a.scenario == "sasd" ? synth_sasd(fs, sigma, a.seed) : synth_sasdpr(fs, sigma, a.seed);
    } else if (a.scenario == "kcomplex" || a.scenario == "spindle") {
        PatternScenario sc = a.scenario == "kcomplex" ? default_kcomplex_scenario() : default_spindle_scenario();
        if (a.fs > 0) sc.fs = a.fs;
        if (a.amplitude > 0) sc.amplitude = a.amplitude;
        if (a.noise >= 0) sc.noise_rms = a.noise;
        if (a.count >= 0) sc.events = a.count;
        s = a.scenario == "kcomplex" ? synth_kcomplex(sc, a.seed) : synth_spindle(sc, a.seed);
    } else {
        throw ConfigError("--scenario must be sasd, sasdpr, kcomplex or spindle");
    }
    if (a.out.empty()) throw ConfigError("--out is required");

    VectorXd t(s.y.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / s.fs;
    std::vector<Column> cols{{"t", t}, {"value", s.y}};
    for (const auto& [name, v] : s.truth) cols.push_back({name == "x" ? "truth" : name, v});
    write_columns_csv(a.out, cols);
    std::ofstream(a.out + ".json") << json{{"fs", s.fs}, {"scenario", a.scenario}, {"seed", a.seed}}.dump(2) << '\n';
    if (!a.events.empty()) write_annotations(a.events, s.events, s.fs);
    return 0;
}

// ---- gridsearch ----

struct GridArgs {
    std::string pattern = "kcomplex", out, feasible;
    std::vector<std::string> inputs, refs;
    double fs = 0, scale = -1, spec_floor = -1, sens_floor = -1;
    std::string lam0, lam1, lam2;
    int kmax = 200;
};

int run_gridsearch(const GridArgs& a) {
    if (a.inputs.empty()) throw ConfigError("--input is required");
    if (a.inputs.size() != a.refs.size()) throw ConfigError("give one --ref per --input");
    const bool kc = a.pattern == "kcomplex";
    if (!kc && a.pattern != "spindle") throw ConfigError("--pattern must be kcomplex or spindle");

    std::vector<LabeledEpoch> epochs;
    double fs = 0.0;
    for (size_t i = 0; i < a.inputs.size(); ++i) {
        const SignalFile f = read_signal_csv(a.inputs[i], opt_fs(a.fs));
        if (fs > 0.0 && f.fs != fs) throw ConfigError("all epochs must share one sampling rate");
        fs = f.fs;
        const int N = static_cast<int>(f.samples.size());
        epochs.push_back({f.samples, read_annotations(a.refs[i], f.fs, N)});
    }

    std::vector<std::vector<double>> axes;
    axes.push_back(parse_range(!a.lam0.empty() ? a.lam0 : (kc ? "100:160:5" : "0.3:0.8:0.1")));
    axes.push_back(parse_range(!a.lam1.empty() ? a.lam1 : (kc ? "10:70:5" : "3:6:0.2")));
    if (!kc) axes.push_back(parse_range(!a.lam2.empty() ? a.lam2 : "3:6:0.2"));
    const double spec_floor = a.spec_floor >= 0 ? a.spec_floor : (kc ? 0.975 : 0.90);
    const double sens_floor = a.sens_floor >= 0 ? a.sens_floor : (kc ? 0.75 : 0.85);

    // One set of operators per distinct epoch length.
    std::map<int, std::unique_ptr<KComplexDetector>> kdet;
    std::map<int, std::unique_ptr<SpindleDetector>> sdet;
    EpochDetector detect = [&](const LabeledEpoch& ep, const std::vector<double>& p) {
        const int N = static_cast<int>(ep.y.size());
        if (kc) {
            auto& d = kdet[N];
            if (!d) {
                KComplexConfig c;
                if (a.scale > 0) c.scale = a.scale;
                c.admm.kmax = a.kmax;
                d = std::make_unique<KComplexDetector>(N, c);
            }
            return d->run(ep.y, fs, p[0], p[1]).events;
        }
        auto& d = sdet[N];
        if (!d) {
            SpindleConfig c;
            if (a.scale > 0) c.scale = a.scale;
            c.admm.kmax = a.kmax;
            d = std::make_unique<SpindleDetector>(N, c);
        }
        return d->run(ep.y, fs, p[0], p[1], p[2]).events;
    };
    const GridResult g = grid_search(epochs, detect, axes, spec_floor, sens_floor);

    auto write_rows = [&](std::ostream& o, bool only_feasible) {
        o << (kc ? "lam0,lam1" : "lam0,lam1,lam2") << ",specificity,sensitivity,precision,f1,kappa,feasible\n";
        for (const auto& r : g.rows) {
            if (only_feasible && !r.feasible) continue;
            for (double p : r.params) o << fmt(p) << ',';
            o << fmt(r.score.specificity) << ',' << fmt(r.score.recall) << ',' << fmt(r.score.precision) << ','
              << fmt(r.score.f1) << ',' << fmt(r.score.kappa) << ',' << r.feasible << '\n';
        }
    };
    if (a.out.empty() || a.out == "-") {
        write_rows(std::cout, false);
    } else {
        std::ofstream o(a.out);
        write_rows(o, false);
    }
    if (!a.feasible.empty()) {
        std::ofstream o(a.feasible);
        write_rows(o, true);
    }
    return 0;
}

bool is_config_error(const std::exception& e) {
    return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
           dynamic_cast<const FrequencyError*>(&e) || dynamic_cast<const OrderError*>(&e) ||
           dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const WindowError*>(&e) ||
           dynamic_cast<const EmptyGrid*>(&e) || dynamic_cast<const json::exception*>(&e);
}

// Flags from the command's section of a --config JSON file, for keys not given on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string path, command;
    std::set<std::string> given;
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& s = args[i];
        if (s == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (s.rfind("--config=", 0) == 0) {
            path = s.substr(9);
        } else if (s.rfind("--", 0) == 0) {
            given.insert(s.substr(2, s.find('=') == std::string::npos ? std::string::npos : s.find('=') - 2));
        } else if (command.empty() && s[0] != '-') {
            command = s;
        }
    }
    std::vector<std::string> out;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            ++i;
            continue;
        }
        if (args[i].rfind("--config=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    if (path.empty()) return out;

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("config " + path + " is not a JSON object");
    if (command.empty() || !j.contains(command)) return out;
    const json& sec = j[command];
    if (!sec.is_object()) throw ConfigError("config section '" + command + "' is not an object");
    for (const auto& [key, val] : sec.items()) {
        if (given.count(key)) continue;
        auto add = [&](const json& v) {
            out.push_back("--" + key);
            out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        };
        if (val.is_array()) {
            for (const auto& v : val) add(v);
        } else if (val.is_boolean()) {
            if (val.get<bool>()) out.push_back("--" + key);
        } else {
            add(val);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-phase filtering and sparsity-assisted decomposition of signals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    DesignArgs da;
    auto* design = app.add_subcommand("design", "Design a composite IIR filter and report its responses");
    design->add_option("--kind", da.kind, "lp, hp or bp")->capture_default_str();
    design->add_option("--order", da.order, "Butterworth prototype order M")->capture_default_str();
    design->add_option("--cutoff", da.cutoff, "LP/HP half-power frequency, units of pi")->capture_default_str();
    design->add_option("--proto-cutoff", da.proto, "prototype cutoff for LP/HP, units of pi");
    design->add_option("--center", da.center, "BP center frequency, units of pi");
    design->add_option("--bandwidth", da.bandwidth, "BP bandwidth, units of pi");
    design->add_option("--low", da.low, "BP lower edge, units of pi");
    design->add_option("--high", da.high, "BP upper edge, units of pi");
    design->add_option("--points", da.points, "frequency grid points")->capture_default_str();
    design->add_option("--impulse", da.impulse, "impulse response samples")->capture_default_str();
    design->add_option("--out", da.out, "JSON report path (default stdout)");
    design->add_option("--csv", da.csv, "magnitude response CSV path");

    DenoiseArgs na;
    auto* den = app.add_subcommand("denoise", "Low-pass plus sparse-derivative decomposition");
    den->add_option("--input", na.input, "CSV with a value column")->required();
    den->add_option("--fs", na.fs, "sampling rate, Hz");
    den->add_option("--order", na.order, "prototype order M")->capture_default_str();
    den->add_option("--cutoff", na.cutoff, "cutoff, units of pi")->capture_default_str();
    den->add_option("--K", na.K, "derivative order")->capture_default_str();
    den->add_option("--lambda", na.lambda, "l1 weight")->capture_default_str();
    den->add_option("--pad", na.pad, "pad samples per side (-1: fs/5)")->capture_default_str();
    den->add_option("--eps", na.eps, "relative cost tolerance")->capture_default_str();
    den->add_option("--kmax", na.kmax, "iteration cap")->capture_default_str();
    den->add_option("--truth", na.truth, "truth column for the RMSE")->capture_default_str();
    den->add_option("--out", na.out, "components CSV path");
    den->add_option("--summary", na.summary, "JSON summary path (default stdout)");

    DetectArgs ta;
    auto* det = app.add_subcommand("detect", "Pattern extraction and TKEO event detection");
    det->add_option("--input", ta.input, "CSV with a value column")->required();
    det->add_option("--pattern", ta.pattern, "kcomplex or spindle")->capture_default_str();
    det->add_option("--fs", ta.fs, "sampling rate, Hz");
    det->add_option("--scale", ta.scale, "amplitude rescaling factor (default 4 kcomplex, 0.2 spindle)");
    det->add_option("--threshold", ta.threshold, "TKEO threshold");
    det->add_option("--lam0", ta.lam0, "coefficient weight");
    det->add_option("--lam1", ta.lam1, "total-variation weight");
    det->add_option("--lam2", ta.lam2, "sparse-component weight (spindle)");
    det->add_option("--mu", ta.mu, "ADMM penalty");
    det->add_option("--eta", ta.eta, "second ADMM penalty (kcomplex)");
    det->add_option("--kmax", ta.kmax, "iteration cap")->capture_default_str();
    det->add_option("--eps", ta.eps, "relative cost tolerance")->capture_default_str();
    det->add_option("--ref", ta.ref, "reference annotations, start_s,end_s");
    det->add_option("--events", ta.events, "events CSV path");
    det->add_option("--components", ta.components, "components CSV path");
    det->add_option("--report", ta.report, "JSON report path (default stdout)");

    BenchArgs ba;
    auto* bench = app.add_subcommand("benchmark", "Reproduce the factorization and RMSE tables");
    bench->add_option("--table", ba.table, "1, 3 or 4")->capture_default_str();
    bench->add_option("--trials", ba.trials, "noise draws per cell")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--seed", ba.seed, "first seed")->capture_default_str();
    bench->add_option("--out", ba.out, "CSV path (default stdout)");

    SynthArgs sa;
    auto* syn = app.add_subcommand("synth", "Write a synthetic test signal with truth columns");
    syn->add_option("--scenario", sa.scenario, "sasd, sasdpr, kcomplex or spindle")->capture_default_str();
    syn->add_option("--fs", sa.fs, "sampling rate, Hz");
    syn->add_option("--seed", sa.seed, "noise seed")->capture_default_str();
    syn->add_option("--sigma", sa.sigma, "white noise level (sasd, sasdpr)");
    syn->add_option("--amplitude", sa.amplitude, "pattern peak (kcomplex, spindle)");
    syn->add_option("--noise", sa.noise, "pink noise RMS (kcomplex, spindle)");
    syn->add_option("--count", sa.count, "number of patterns (kcomplex, spindle)");
    syn->add_option("--out", sa.out, "CSV path")->required();
    syn->add_option("--events", sa.events, "annotation CSV path for the injected events");

    GridArgs ga;
    auto* grid = app.add_subcommand("gridsearch", "Score a grid of penalties on annotated epochs");
    grid->add_option("--pattern", ga.pattern, "kcomplex or spindle")->capture_default_str();
    grid->add_option("--input", ga.inputs, "epoch CSV (repeatable)")->required();
    grid->add_option("--ref", ga.refs, "annotations for each --input, in order")->required();
    grid->add_option("--fs", ga.fs, "sampling rate, Hz");
    grid->add_option("--scale", ga.scale, "amplitude rescaling factor");
    grid->add_option("--lam0", ga.lam0, "lo:hi:step");
    grid->add_option("--lam1", ga.lam1, "lo:hi:step");
    grid->add_option("--lam2", ga.lam2, "lo:hi:step (spindle)");
    grid->add_option("--spec-floor", ga.spec_floor, "minimum specificity");
    grid->add_option("--sens-floor", ga.sens_floor, "minimum sensitivity");
    grid->add_option("--kmax", ga.kmax, "iteration cap")->capture_default_str();
    grid->add_option("--out", ga.out, "table CSV path (default stdout)");
    grid->add_option("--feasible", ga.feasible, "feasible rows CSV path");

    for (auto* sub : {design, den, det, bench, syn, grid})
        sub->add_option("--config", "JSON file with one section per command; flags win");

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = merge_config(args);
        std::vector<char*> cargv;
        for (auto& s : args) cargv.push_back(s.data());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*design) return run_design(da);
        if (*den) return run_denoise(na);
        if (*det) return run_detect(ta);
        if (*bench) return run_benchmark(ba);
        if (*syn) return run_synth(sa);
        if (*grid) return run_gridsearch(ga);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_config_error(e) ? 2 : 1;
    }
    return 2;
}
