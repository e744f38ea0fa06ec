#pragma once

#include "tmm/cost_function.hpp"

#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace tmm {

enum class Mode { discrete, continuous };

std::string to_string(Mode m);

/// One record of a run. Discrete samples carry the iteration index k and the
/// mapped time t; continuous samples carry t plus the raw (eps, eps_dot) state.
struct Sample {
  long k = -1;  ///< iteration index; -1 for continuous samples
  double t = 0;
  double f_error = 0;    ///< f(output) - f(x*)
  double grad_norm = 0;  ///< |grad f(output)|
  double lyapunov = std::numeric_limits<double>::quiet_NaN();
  Vec output;      ///< algorithm iterate x_k, or Y(t)
  Vec aux_output;  ///< y_k (discrete) or X(t) (continuous); may be empty
  Vec eps, eps_dot;  ///< raw continuous state; empty for discrete samples
};

struct Trajectory {
  std::string algorithm;
  Mode mode = Mode::discrete;
  double stepsize = 0;  ///< alpha or s (discrete), dt (continuous)
  std::vector<Sample> samples;
};

/// Checks the container invariants: strictly increasing time axis and
/// f_error >= -1e-12 at every sample. Throws ArgumentError on violation.
void validate(const Trajectory& traj);

/// Every floating-point cell is printed with "%.17g" so values round-trip.
std::string format_double(double v);

/// Header `k,t,f_error,grad_norm,output_0,...`; one row per sample, "\n" endings.
void write_discrete_csv(const Trajectory& traj, std::ostream& out);

/// Header `t,f_error,grad_norm,V,Y_0,...,X_0,...`; one row per sample.
void write_continuous_csv(const Trajectory& traj, std::ostream& out);

/// Appends rows of the combined long format `algorithm,mode,t,f_error`.
void append_long_rows(const Trajectory& traj, std::ostream& out);

}  // namespace tmm
