#pragma once

#include <vector>

namespace permutonlab {

/// Upper-tail p-value of a chi-squared statistic with df degrees of freedom.
double chi_squared_pvalue(double statistic, int df);

/// Pearson statistic of observed counts against expected probabilities
/// (which must sum to 1); total is inferred from the counts.
double chi_squared_statistic(const std::vector<long long>& observed,
                             const std::vector<double>& expected_probs);

/// One-sample Kolmogorov-Smirnov test against Uniform[0,1]: returns the
/// asymptotic p-value Q(sqrt(n) * D_n).
double ks_uniform_pvalue(std::vector<double> samples);

} // namespace permutonlab
