#include "permutonlab/common.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace permutonlab {

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string rational_string(const Rational& r) {
    return r.str();
}

} // namespace permutonlab
