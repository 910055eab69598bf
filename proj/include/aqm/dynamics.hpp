#pragma once

// Trajectory bundles of the conformal top: the normalized flow
//   dq^i/ds = g^ij P_j / √|g^mn P_m P_n|,  P = ∂S − eA,
// fixed-step RK4 integration, and transport of the conserved current.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "aqm/errors.hpp"
#include "aqm/hj_system.hpp"
#include "aqm/numerics.hpp"
#include "aqm/weyl_geometry.hpp"

namespace aqm {

inline constexpr double kNullTolerance = 1e-10;

template <int N>
struct FlowVelocity {
  Vec<N> v = Vec<N>::Zero();
  double norm2 = 0.0;  // g^mn P_m P_n
  bool timelike = false;
};

template <int N, class Action, class Pot, class Metric>
FlowVelocity<N> velocity_field(const Action& s, const Coupling<N, Pot>& c, const Metric& metric,
                               const Vec<N>& q, const Stencil& st = Stencil{}) {
  const Vec<N> p = kinetic_momentum<N>(s, c, q, st);
  const Mat<N> ginv = metric_inverse<N>(metric, q);
  FlowVelocity<N> out;
  out.norm2 = p.dot(ginv * p);
  if (std::abs(out.norm2) < kNullTolerance) {
    throw DegenerateFlowError("null kinetic momentum: Hamilton-Jacobi flow is degenerate");
  }
  out.timelike = out.norm2 < 0.0;
  out.v = ginv * p / std::sqrt(std::abs(out.norm2));
  return out;
}

template <int N>
struct TrajectorySample {
  double s = 0.0;
  Vec<N> q = Vec<N>::Zero();
  bool timelike = false;
  double log_jacobian = 0.0;  // ln of the flow-map volume factor
};

template <int N>
struct Trajectory {
  std::vector<TrajectorySample<N>> samples;
  double ds = 0.0;
  int order = 4;
  bool truncated = false;
  std::string truncation_reason;
};

template <int N, class Action, class Chi, class Pot>
struct BundleSpec {
  ScalarFieldPair<Action, Chi> fields;
  Coupling<N, Pot> coupling;
  std::vector<Vec<N>> seeds;
  int steps = 100;
  double ds = 1e-2;
};

namespace detail {

// ∂_i v^i in coordinates (drives the flow-map Jacobian).
template <int N, class Action, class Pot, class Metric>
double velocity_divergence(const Action& s, const Coupling<N, Pot>& c, const Metric& metric,
                           const Vec<N>& q, const Stencil& st) {
  double div = 0.0;
  for (int i = 0; i < N; ++i) {
    div += partial<N>([&](const Vec<N>& p) { return velocity_field<N>(s, c, metric, p, st).v[i]; },
                      q, i, st.h, st.order);
  }
  return div;
}

}  // namespace detail

// Classic RK4, fixed step. Chart-boundary or degenerate-flow failures end the
// trajectory, recorded in `truncated`; they never propagate.
template <int N, class Action, class Pot, class Metric>
Trajectory<N> integrate_trajectory(const Action& s, const Coupling<N, Pot>& c,
                                   const Metric& metric, const Vec<N>& seed, int steps, double ds,
                                   const Stencil& st = Stencil{}, bool track_jacobian = false) {
  Trajectory<N> traj;
  traj.ds = ds;
  using State = Eigen::Matrix<double, N + 1, 1>;
  auto rhs = [&](const State& y, bool& timelike) {
    const Vec<N> q = y.template head<N>();
    const FlowVelocity<N> f = velocity_field<N>(s, c, metric, q, st);
    timelike = f.timelike;
    State d;
    d.template head<N>() = f.v;
    d[N] = track_jacobian ? detail::velocity_divergence<N>(s, c, metric, q, st) : 0.0;
    return d;
  };

  State y;
  y.template head<N>() = seed;
  y[N] = 0.0;
  double sval = 0.0;
  try {
    bool tl = false;
    State k1 = rhs(y, tl);
    traj.samples.push_back({sval, seed, tl, 0.0});
    for (int n = 0; n < steps; ++n) {
      bool dummy = false;
      const State k2 = rhs(y + 0.5 * ds * k1, dummy);
      const State k3 = rhs(y + 0.5 * ds * k2, dummy);
      const State k4 = rhs(y + ds * k3, dummy);
      y += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      sval = (n + 1) * ds;
      k1 = rhs(y, tl);
      traj.samples.push_back({sval, y.template head<N>(), tl, y[N]});
    }
  } catch (const DegenerateFlowError& e) {
    traj.truncated = true;
    traj.truncation_reason = std::string("degenerate flow: ") + e.what();
  } catch (const DomainError& e) {
    traj.truncated = true;
    traj.truncation_reason = std::string("chart boundary: ") + e.what();
  } catch (const NumericError& e) {
    traj.truncated = true;
    traj.truncation_reason = std::string("numeric: ") + e.what();
  }
  return traj;
}

template <int N, class Action, class Chi, class Pot, class Metric>
std::vector<Trajectory<N>> integrate(const BundleSpec<N, Action, Chi, Pot>& bundle,
                                     const Metric& metric, const Stencil& st = Stencil{},
                                     bool track_jacobian = false) {
  std::vector<Trajectory<N>> out;
  out.reserve(bundle.seeds.size());
  for (const Vec<N>& seed : bundle.seeds) {
    out.push_back(integrate_trajectory<N>(bundle.fields.action, bundle.coupling, metric, seed,
                                          bundle.steps, bundle.ds, st, track_jacobian));
  }
  return out;
}

template <int N>
struct TransportReport {
  std::vector<Trajectory<N>> trajectories;
  double max_divergence = 0.0;   // max |(1/√g)∂_i j^i| over stations
  double max_flux_drift = 0.0;   // max |Φ_k/Φ_0 − 1| over stations
  double max_norm_defect = 0.0;  // max ||g_ij v^i v^j| − 1|
  double min_pair_distance = std::numeric_limits<double>::infinity();
  int truncated = 0;
};

// Evaluates the current divergence and the tube flux Φ = ρ̃·J along each
// trajectory at `stations` evenly spaced cross-sections, where
// j^i = ρ̃ v^i with ρ̃ = χ^{−(n−2)} √|g| |P| and J is the flow-map Jacobian.
template <int N, class Action, class Chi, class Pot, class Metric>
TransportReport<N> transport_check(const BundleSpec<N, Action, Chi, Pot>& bundle,
                                   const Metric& metric, int n, const Stencil& st = Stencil{},
                                   int stations = 10) {
  TransportReport<N> rep;
  rep.trajectories = integrate<N>(bundle, metric, st, true);
  const auto& f = bundle.fields;
  const auto& c = bundle.coupling;
  for (const Trajectory<N>& t : rep.trajectories) {
    if (t.truncated) ++rep.truncated;
    if (t.samples.size() < 2) continue;
    const int last = int(t.samples.size()) - 1;
    double flux0 = 0.0;
    for (int k = 0; k < stations; ++k) {
      const int idx = stations > 1 ? (k * last) / (stations - 1) : 0;
      const TrajectorySample<N>& smp = t.samples[idx];
      const double div = divergence_residual<N>(f, c, metric, smp.q, n, st);
      rep.max_divergence = std::max(rep.max_divergence, std::abs(div));

      const FlowVelocity<N> vel = velocity_field<N>(f.action, c, metric, smp.q, st);
      const Mat<N> g = metric(smp.q);
      rep.max_norm_defect =
          std::max(rep.max_norm_defect, std::abs(std::abs(vel.v.dot(g * vel.v)) - 1.0));
      const double density = std::pow(checked_chi<N>(f.chi, smp.q), -(n - 2)) *
                             sqrt_abs_det<N>(metric, smp.q) * std::sqrt(std::abs(vel.norm2));
      const double flux = density * std::exp(smp.log_jacobian);
      if (k == 0) {
        flux0 = flux;
      } else {
        rep.max_flux_drift = std::max(rep.max_flux_drift, std::abs(flux / flux0 - 1.0));
      }
    }
  }
  for (std::size_t a = 0; a < rep.trajectories.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.trajectories.size(); ++b) {
      const auto& ta = rep.trajectories[a].samples;
      const auto& tb = rep.trajectories[b].samples;
      const std::size_t m = std::min(ta.size(), tb.size());
      for (std::size_t k = 0; k < m; ++k) {
        rep.min_pair_distance = std::min(rep.min_pair_distance, (ta[k].q - tb[k].q).norm());
      }
    }
  }
  return rep;
}

}  // namespace aqm
