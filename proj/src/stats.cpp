#include "permutonlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace permutonlab {

double chi_squared_pvalue(double statistic, int df) {
    if (df < 1) throw std::invalid_argument("chi_squared_pvalue: df must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, statistic / 2.0);
}

double chi_squared_statistic(const std::vector<long long>& observed,
                             const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size())
        throw std::invalid_argument("chi_squared_statistic: size mismatch");
    long long total = 0;
    for (long long c : observed) total += c;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expect = expected_probs[i] * static_cast<double>(total);
        if (expect <= 0.0) {
            if (observed[i] != 0)
                throw std::invalid_argument("chi_squared_statistic: mass on a zero-probability cell");
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expect;
        stat += diff * diff / expect;
    }
    return stat;
}

double ks_uniform_pvalue(std::vector<double> samples) {
    const std::size_t n = samples.size();
    if (n == 0) throw std::invalid_argument("ks_uniform_pvalue: empty sample");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, samples[i] - lo, hi - samples[i]});
    }
    const double lambda = std::sqrt(static_cast<double>(n)) * d;
    // Kolmogorov asymptotic tail: 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)
    double p = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        p += (j % 2 == 1 ? term : -term);
        if (term < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

} // namespace permutonlab
