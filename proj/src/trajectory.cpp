#include "tmm/trajectory.hpp"

#include "tmm/errors.hpp"

#include <cstdio>

namespace tmm {

std::string to_string(Mode m) { return m == Mode::discrete ? "discrete" : "ode"; }

void validate(const Trajectory& traj) {
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    if (i > 0 && !(s.t > traj.samples[i - 1].t))
      throw ArgumentError("trajectory: time axis not strictly increasing at sample " +
                          std::to_string(i));
    if (!(s.f_error >= -1e-12))
      throw ArgumentError("trajectory: f_error below -1e-12 at sample " + std::to_string(i));
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_discrete_csv(const Trajectory& traj, std::ostream& out) {
  const long dim = traj.samples.empty() ? 1 : traj.samples.front().output.size();
  out << "k,t,f_error,grad_norm";
  for (long i = 0; i < dim; ++i) out << ",output_" << i;
  out << "\n";
  for (const Sample& s : traj.samples) {
    out << s.k << ',' << format_double(s.t) << ',' << format_double(s.f_error) << ','
        << format_double(s.grad_norm);
    for (long i = 0; i < s.output.size(); ++i) out << ',' << format_double(s.output[i]);
    out << "\n";
  }
}

void write_continuous_csv(const Trajectory& traj, std::ostream& out) {
  const long dim = traj.samples.empty() ? 1 : traj.samples.front().output.size();
  out << "t,f_error,grad_norm,V";
  for (long i = 0; i < dim; ++i) out << ",Y_" << i;
  for (long i = 0; i < dim; ++i) out << ",X_" << i;
  out << "\n";
  for (const Sample& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.f_error) << ','
        << format_double(s.grad_norm) << ',' << format_double(s.lyapunov);
    for (long i = 0; i < s.output.size(); ++i) out << ',' << format_double(s.output[i]);
    const Vec& x = s.aux_output.size() ? s.aux_output : s.output;
    for (long i = 0; i < x.size(); ++i) out << ',' << format_double(x[i]);
    out << "\n";
  }
}

void append_long_rows(const Trajectory& traj, std::ostream& out) {
  for (const Sample& s : traj.samples)
    out << traj.algorithm << ',' << to_string(traj.mode) << ',' << format_double(s.t) << ','
        << format_double(s.f_error) << "\n";
}

}  // namespace tmm
