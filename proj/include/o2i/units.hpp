// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------

#ifndef O2I_UNITS_HPP
#define O2I_UNITS_HPP

#include <cmath>
#include <numbers>

namespace o2i {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// dBm -> W and back.
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline constexpr double per_km2_to_per_m2(double v) { return v / 1e6; }
inline constexpr double per_m2_to_per_km2(double v) { return v * 1e6; }

inline bool is_perfect_square(long long n) {
    if (n < 0) return false;
    auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
    return r * r == n;
}

inline int isqrt_exact(int n) { return static_cast<int>(std::llround(std::sqrt(static_cast<double>(n)))); }

} // namespace o2i

#endif
