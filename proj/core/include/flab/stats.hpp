#pragma once

#include <cstdint>
#include <span>

namespace flab {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

// Wilson score interval for a binomial proportion; z defaults to 95%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z = 1.959963984540054);

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

}  // namespace flab
