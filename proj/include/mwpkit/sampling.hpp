#pragma once

#include "mwpkit/decimal.hpp"
#include "mwpkit/rng.hpp"

namespace mwpkit {

/// Uniform draw over values with exactly `sig_digits` significant digits:
/// a digit core with nonzero first/last digit, placed as core*10^t (t in
/// {0,1}) for integers or core*10^-s (s in [1, sig_digits+1]) for floats.
Decimal random_number(Rng& rng, int sig_digits, bool as_float);

}  // namespace mwpkit
