#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sassdpr/factorization.hpp"

namespace sassdpr {

// Everything needed to rebuild a composite filter. Frequencies in rad/sample;
// cutoffs holds one edge for LP/HP and two for BP.
struct FilterSpec {
    ResponseKind kind = ResponseKind::LowPass;
    int M = 2;
    std::vector<double> cutoffs;
    double omega0 = -1.0;  // prototype cutoff, <= 0 for the designer default

    CompositeFilter build() const;
    // Canonical text form; doubles written with 17 digits so equal specs give equal keys.
    std::string canonical() const;
};

// 64-bit FNV-1a of canonical spec, N and K, as 16 hex digits.
std::string factor_key(const FilterSpec& spec, int N, int K);

// Directory of <key>.json manifests and <key>.bin little-endian float64 dumps of G1 (column-major).
class FactorCache {
public:
    explicit FactorCache(std::filesystem::path dir);
    // $SASSDPR_CACHE_DIR, else ./.sassdpr_cache
    static FactorCache from_env();

    const std::filesystem::path& dir() const { return dir_; }

    std::optional<FactorizedFilter> load(const FilterSpec& spec, int N, int K) const;
    void store(const FilterSpec& spec, int N, int K, const FactorizedFilter& f) const;

private:
    std::filesystem::path dir_;
};

// Cache hit rebuilds Gf and D around the stored G1; miss factorizes and stores.
FactorizedFilter cached_factorize(const FilterSpec& spec, int N, int K, const ApgdOptions& opt,
                                  const FactorCache* cache);

}  // namespace sassdpr
