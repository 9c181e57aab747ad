#pragma once

// Trajectory-wide evaluation sweeps and oracle batches. Every kernel has a
// serial reference in tdosc::serial and an OpenMP version in tdosc::parallel
// that must agree with it bit for bit (each row is computed independently).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdosc/errors.hpp"
#include "tdosc/evolution.hpp"
#include "tdosc/krylov.hpp"
#include "tdosc/nielsen.hpp"
#include "tdosc/oracle.hpp"

namespace tdosc {

struct SeriesPoint {
  ParameterSample sample;
  Excitation e;
};

struct SeriesRow {
  double t = 0.0;
  double re_z = 0.0, im_z = 0.0, abs_z = 0.0;
  double deficit = 1.0;  // 1 - |z|^2 as carried, exact where |z| rounds to 1
  double n_mean = 0.0, n_dot = 0.0, theta = 0.0, E = 0.0, q2 = 0.0, p2 = 0.0, M = 1.0;
  double C_nielsen = 0.0, dC_dt = 0.0;
  RateBranch rate_branch = RateBranch::Exact;
  double C_spread = 0.0, dCs_dt = 0.0;
  double gamma_re = 0.0, gamma_im = 0.0;
  double ratio_moment = 0.0;  // C_S / (normalized q2 + p2 - 1); NaN at coincidence
  double ratio_sinh = 0.0;    // C_S / sinh^2(C); NaN at coincidence
};

/// Everything reported for one instant. Moments are normalized by the t = 0
/// ground state, i.e. m0 omega0 <q^2> and <p^2> / (m0 omega0).
SeriesRow evaluate_point(const SeriesPoint& point, double m0, double omega0, double h = kEvenSector);

std::vector<SeriesPoint> series_points(const ParameterProfile& profile, const Trajectory& traj);

struct OracleJob {
  ParameterProfile profile;
  std::vector<double> checkpoints;
  oracle::PropagationOptions options;
  std::size_t max_dim = 0;  // escalation cap; 0 means no escalation
};

struct OracleOutcome {
  std::optional<oracle::Propagation> result;
  std::optional<Failure> failure;
  std::string message;
};

/// Applies TDOSC_THREADS (if set) as the OpenMP thread cap; returns the cap in effect.
int configure_threads_from_env();

namespace serial {
std::vector<SeriesRow> evaluate_series(std::span<const SeriesPoint> points, double m0, double omega0,
                                       double h = kEvenSector);
std::vector<OracleOutcome> run_oracle_batch(std::span<const OracleJob> jobs);
}  // namespace serial

namespace parallel {
std::vector<SeriesRow> evaluate_series(std::span<const SeriesPoint> points, double m0, double omega0,
                                       double h = kEvenSector);
std::vector<OracleOutcome> run_oracle_batch(std::span<const OracleJob> jobs);
}  // namespace parallel

}  // namespace tdosc
