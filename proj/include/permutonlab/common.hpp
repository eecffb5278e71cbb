#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace permutonlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Input failed a structural invariant (bad permutation column, malformed
/// string, tie in a point cloud, ...). CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An enumeration or sampler exceeded its configured budget (size cap,
/// retry cap, memory cap). CLI maps this to exit code 3.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

BigInt binomial(int n, int k);

double to_double(const Rational& r);

std::string rational_string(const Rational& r);

} // namespace permutonlab
