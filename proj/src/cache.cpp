#include "sassdpr/cache.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sassdpr {

namespace {

std::string exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

}  // namespace

CompositeFilter FilterSpec::build() const {
    switch (kind) {
        case ResponseKind::LowPass:
            if (cutoffs.size() != 1) throw ParameterError("low-pass needs one cutoff");
            return design_lowpass(M, cutoffs[0], omega0);
        case ResponseKind::HighPass:
            if (cutoffs.size() != 1) throw ParameterError("high-pass needs one cutoff");
            return design_highpass(M, cutoffs[0], omega0);
        case ResponseKind::BandPass:
            if (cutoffs.size() != 2) throw ParameterError("band-pass needs two edges");
            return design_bandpass(M, cutoffs[0], cutoffs[1]);
    }
    throw ParameterError("unknown response kind");
}

std::string FilterSpec::canonical() const {
    std::ostringstream s;
    s << to_string(kind) << ";M=" << M << ";w=";
    for (size_t i = 0; i < cutoffs.size(); ++i) s << (i ? "," : "") << exact(cutoffs[i]);
    s << ";w0=" << exact(omega0);
    return s.str();
}

std::string factor_key(const FilterSpec& spec, int N, int K) {
    const std::string text = spec.canonical() + ";N=" + std::to_string(N) + ";K=" + std::to_string(K);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FactorCache::FactorCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

FactorCache FactorCache::from_env() {
    const char* d = std::getenv("SASSDPR_CACHE_DIR");
    return FactorCache(d && *d ? std::filesystem::path(d) : std::filesystem::path(".sassdpr_cache"));
}

std::optional<FactorizedFilter> FactorCache::load(const FilterSpec& spec, int N, int K) const {
    const std::string key = factor_key(spec, N, K);
    std::ifstream mj(dir_ / (key + ".json"));
    if (!mj) return std::nullopt;
    const auto m = nlohmann::json::parse(mj, nullptr, false);
    // A colliding or stale entry is treated as a miss.
    if (!m.is_object() || m.value("spec", "") != spec.canonical() || m.value("N", -1) != N || m.value("K", -1) != K)
        return std::nullopt;
    const int rows = m.value("rows", -1), cols = m.value("cols", -1);
    if (rows != N || cols != N - K) return std::nullopt;

    std::ifstream bin(dir_ / (key + ".bin"), std::ios::binary);
    if (!bin) return std::nullopt;
    FactorizedFilter f;
    f.G1.resize(rows, cols);
    for (Eigen::Index i = 0; i < f.G1.size(); ++i) {
        std::uint64_t u;
        if (!bin.read(reinterpret_cast<char*>(&u), 8)) return std::nullopt;
        u = to_le(u);
        std::memcpy(f.G1.data() + i, &u, 8);
    }
    f.K = K;
    f.D = difference_matrix(N, K);
    f.Gf = build_impulse_matrix(spec.build().ss, N);
    f.final_error = m.value("final_error", 0.0);
    f.iterations = m.value("iterations", 0);
    f.converged = m.value("converged", false);
    f.lipschitz = m.value("lipschitz", 0.0);
    return f;
}

void FactorCache::store(const FilterSpec& spec, int N, int K, const FactorizedFilter& f) const {
    std::filesystem::create_directories(dir_);
    const std::string key = factor_key(spec, N, K);
    {
        std::ofstream bin(dir_ / (key + ".bin"), std::ios::binary | std::ios::trunc);
        for (Eigen::Index i = 0; i < f.G1.size(); ++i) {
            std::uint64_t u;
            std::memcpy(&u, f.G1.data() + i, 8);
            u = to_le(u);
            bin.write(reinterpret_cast<const char*>(&u), 8);
        }
        if (!bin) throw ParameterError("cannot write factor cache in " + dir_.string());
    }
    nlohmann::json m;
    m["spec"] = spec.canonical();
    m["N"] = N;
    m["K"] = K;
    m["rows"] = f.G1.rows();
    m["cols"] = f.G1.cols();
    m["layout"] = "column-major float64 little-endian";
    m["final_error"] = f.final_error;
    m["iterations"] = f.iterations;
    m["converged"] = f.converged;
    m["lipschitz"] = f.lipschitz;
    std::ofstream(dir_ / (key + ".json")) << m.dump(2) << '\n';
}

FactorizedFilter cached_factorize(const FilterSpec& spec, int N, int K, const ApgdOptions& opt,
                                  const FactorCache* cache) {
    if (cache) {
        if (auto hit = cache->load(spec, N, K)) return std::move(*hit);
    }
    FactorizedFilter f = factorize_filter(spec.build(), N, K, opt);
    if (cache) cache->store(spec, N, K, f);
    return f;
}

}  // namespace sassdpr
