#ifndef RTDIFF_UTIL_HPP
#define RTDIFF_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace rtdiff {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct MeanStddev {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
};

MeanStddev mean_stddev(const std::vector<double>& v);

/// Standard error of a replica average: stddev / sqrt(n).
inline double standard_error(const MeanStddev& ms, std::size_t n) {
    return n > 1 ? ms.stddev / std::sqrt(static_cast<double>(n)) : 0.0;
}

long long gcd_all(const std::vector<long long>& v);

/// Exact binomial coefficient as double (exact for results < 2^53).
double binomial(int n, int k);

/// Multinomial coefficient |m|! / (m_1! ... m_n!).
double multinomial(const std::vector<int>& m);

}  // namespace rtdiff

#endif
