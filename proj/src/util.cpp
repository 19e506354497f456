#include "rtdiff/util.hpp"

#include <cmath>
#include <cstdlib>

namespace rtdiff {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit f;
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return f;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

MeanStddev mean_stddev(const std::vector<double>& v) {
    MeanStddev ms;
    const std::size_t n = v.size();
    if (n == 0) return ms;
    double s = 0;
    for (double x : v) s += x;
    ms.mean = s / n;
    if (n > 1) {
        double ss = 0;
        for (double x : v) ss += (x - ms.mean) * (x - ms.mean);
        ms.stddev = std::sqrt(ss / (n - 1));
    }
    return ms;
}

long long gcd_all(const std::vector<long long>& v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, std::llabs(x));
    return g;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

double multinomial(const std::vector<int>& m) {
    int total = 0;
    double r = 1.0;
    for (int mi : m) {
        for (int i = 1; i <= mi; ++i) {
            ++total;
            r = r * total / i;
        }
    }
    return std::round(r);
}

}  // namespace rtdiff
