#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dbr {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Error raised on invalid inputs or failed numerical contracts.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Binomial coefficient as a signed 64-bit integer. Exact for every (n, k)
/// whose value fits; the intermediate product is kept in 128-bit to avoid
/// spurious overflow. C(n, k) = 0 for k < 0 or k > n.
inline long long binom_ll(long long n, long long k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    __int128 r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > __int128(0x7fffffffffffffffLL))
            throw Error("binom_ll: value exceeds 64-bit range");
    }
    return static_cast<long long>(r);
}

/// Falling factorial (j)_i = j (j-1) ... (j-i+1), as a double.
inline double falling_factorial(int j, int i) {
    double r = 1.0;
    for (int t = 0; t < i; ++t) r *= double(j - t);
    return r;
}

} // namespace dbr
