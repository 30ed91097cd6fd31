#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <vector>

namespace cswv::testing {

// Analysis filters of the unit-DC-gain 9/7 pair, written out as taps so the
// lifting code is checked against a plain filter bank.
constexpr double kLow[5] = {0.60294901823636034819, 0.26686411844287495443,
                            -0.078223266528990262509, -0.016864118442874954426,
                            0.026748757410810088414};
constexpr double kHigh[4] = {1.1150870524570003646, 0.59127176311425009115,
                             -0.057543526228500182295, -0.091271763114250091148};

inline std::size_t reflect(long i, long n) {
    if (n == 1) return 0;
    const long period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return static_cast<std::size_t>(i < n ? i : period - i);
}

inline std::vector<double> filter_bank(const std::vector<double>& x) {
    const long n = static_cast<long>(x.size());
    std::vector<double> out(x.size());
    for (long k = 0; k < n / 2; ++k) {
        double lo = 0.0, hi = 0.0;
        for (long t = -4; t <= 4; ++t) lo += kLow[std::abs(t)] * x[reflect(2 * k + t, n)];
        for (long t = -3; t <= 3; ++t)
            hi += (t % 2 == 0 ? 1.0 : -1.0) * kHigh[std::abs(t)] * x[reflect(2 * k + 1 + t, n)];
        out[static_cast<std::size_t>(k)] = lo;
        out[static_cast<std::size_t>(n / 2 + k)] = hi;
    }
    return out;
}

inline std::vector<double> oracle_2d(std::vector<double> a, int width, int height, int levels) {
    int w = width, h = height;
    for (int l = 0; l < levels; ++l, w /= 2, h /= 2) {
        for (int y = 0; y < h; ++y) {
            std::vector<double> row(a.begin() + y * width, a.begin() + y * width + w);
            row = filter_bank(row);
            std::copy(row.begin(), row.end(), a.begin() + y * width);
        }
        for (int x = 0; x < w; ++x) {
            std::vector<double> col(static_cast<std::size_t>(h));
            for (int y = 0; y < h; ++y) col[y] = a[y * width + x];
            col = filter_bank(col);
            for (int y = 0; y < h; ++y) a[y * width + x] = col[y];
        }
    }
    return a;
}

} // namespace cswv::testing
