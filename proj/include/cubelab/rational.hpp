#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubelab {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "3/4" or "3".
inline Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    if (r.get_den() < 0)
        throw std::invalid_argument("bad rational: " + s);
    return r;
}

inline std::string rational_to_string(const Rational& r) {
    return r.get_str();
}

inline double rational_to_double(const Rational& r) {
    return r.get_d();
}

}  // namespace cubelab
