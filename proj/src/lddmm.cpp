#include "morphkit/lddmm.hpp"

#include <atomic>
#include <cmath>

#include "morphkit/errors.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {
namespace {

struct Flow {
  int n = 0, steps = 0;
  double dt = 0.0, inv_two_w2 = 0.0, lambda = 0.0;
  // States x_0..x_T and per-step velocities v_0..v_{T-1}, SoA layout.
  std::vector<std::vector<double>> xs, ys, vx, vy;
  double kinetic = 0.0, resid_sq = 0.0;

  double energy() const { return kinetic + lambda * resid_sq; }
};

// Momenta layout: per step t a block of 2N doubles, x components then y.
inline const double* px_at(std::span<const double> p, int t, int n) {
  return p.data() + static_cast<size_t>(t) * 2 * n;
}
inline const double* py_at(std::span<const double> p, int t, int n) {
  return p.data() + static_cast<size_t>(t) * 2 * n + n;
}

Flow forward(const ShapeSample& src, const ShapeSample& dst,
             const LddmmConfig& cfg, std::span<const double> momenta) {
  const auto& kr = simd::active();
  const int n = src.n();
  const int steps = cfg.timesteps;
  Flow f;
  f.n = n;
  f.steps = steps;
  f.dt = 1.0 / steps;
  f.inv_two_w2 = 1.0 / (2.0 * cfg.kernel_width * cfg.kernel_width);
  f.lambda = cfg.lambda;
  f.xs.assign(steps + 1, std::vector<double>(n));
  f.ys.assign(steps + 1, std::vector<double>(n));
  f.vx.assign(steps, std::vector<double>(n));
  f.vy.assign(steps, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    f.xs[0][i] = src.points[i].x;
    f.ys[0][i] = src.points[i].y;
  }
  for (int t = 0; t < steps; ++t) {
    const double* px = px_at(momenta, t, n);
    const double* py = py_at(momenta, t, n);
    kr.gauss_flow(f.xs[t].data(), f.ys[t].data(), px, py, n, f.inv_two_w2,
                  f.vx[t].data(), f.vy[t].data());
    // Kinetic term p^T K p = p . v.
    f.kinetic += f.dt * (kr.dot(px, f.vx[t].data(), n) +
                         kr.dot(py, f.vy[t].data(), n));
    for (int i = 0; i < n; ++i) {
      f.xs[t + 1][i] = f.xs[t][i] + f.dt * f.vx[t][i];
      f.ys[t + 1][i] = f.ys[t][i] + f.dt * f.vy[t][i];
    }
  }
  for (int i = 0; i < n; ++i) {
    const double dx = f.xs[steps][i] - dst.points[i].x;
    const double dy = f.ys[steps][i] - dst.points[i].y;
    f.resid_sq += dx * dx + dy * dy;
  }
  return f;
}

// Adjoint recursion through the Euler steps; returns dE/dp.
std::vector<double> backward(const Flow& f, const ShapeSample& dst,
                             std::span<const double> momenta) {
  const auto& kr = simd::active();
  const int n = f.n;
  std::vector<double> grad(static_cast<size_t>(f.steps) * 2 * n);
  std::vector<double> ax(n), ay(n), gx(n), gy(n), kax(n), kay(n);
  for (int i = 0; i < n; ++i) {
    ax[i] = 2.0 * f.lambda * (f.xs[f.steps][i] - dst.points[i].x);
    ay[i] = 2.0 * f.lambda * (f.ys[f.steps][i] - dst.points[i].y);
  }
  const double c1 = -2.0 * f.inv_two_w2;  // = -1/w^2
  const double c2 = -4.0 * f.inv_two_w2;  // = -2/w^2
  for (int t = f.steps - 1; t >= 0; --t) {
    const double* px = px_at(momenta, t, n);
    const double* py = py_at(momenta, t, n);
    double* gpx = &grad[static_cast<size_t>(t) * 2 * n];
    double* gpy = gpx + n;
    // dE/dp_t = dt * (2 v_t + K(x_t) a_{t+1})
    kr.gauss_flow(f.xs[t].data(), f.ys[t].data(), ax.data(), ay.data(), n,
                  f.inv_two_w2, kax.data(), kay.data());
    for (int i = 0; i < n; ++i) {
      gpx[i] = f.dt * (2.0 * f.vx[t][i] + kax[i]);
      gpy[i] = f.dt * (2.0 * f.vy[t][i] + kay[i]);
    }
    // a_t = a_{t+1} + dt * (J_v^T a_{t+1} + dg/dx_t), both via one fused sum.
    kr.gauss_grad_x(f.xs[t].data(), f.ys[t].data(), px, py, ax.data(),
                    ay.data(), n, f.inv_two_w2, c1, c2, gx.data(), gy.data());
    for (int i = 0; i < n; ++i) {
      ax[i] += f.dt * gx[i];
      ay[i] += f.dt * gy[i];
    }
  }
  return grad;
}

void check_pair(const ShapeSample& src, const ShapeSample& dst,
                const LddmmConfig& cfg) {
  if (src.n() != dst.n())
    raise(ErrorCode::length_mismatch, "lddmm: point counts differ");
  if (src.n() < 2) raise(ErrorCode::invalid_argument, "lddmm: too few points");
  if (cfg.kernel_width <= 0 || cfg.lambda <= 0 || cfg.timesteps < 2)
    raise(ErrorCode::config_out_of_range, "lddmm: bad config");
}

}  // namespace

double lddmm_energy(const ShapeSample& src, const ShapeSample& dst,
                    const LddmmConfig& config,
                    std::span<const double> momenta) {
  check_pair(src, dst, config);
  return forward(src, dst, config, momenta).energy();
}

std::vector<double> lddmm_gradient(const ShapeSample& src,
                                   const ShapeSample& dst,
                                   const LddmmConfig& config,
                                   std::span<const double> momenta) {
  check_pair(src, dst, config);
  const Flow f = forward(src, dst, config, momenta);
  return backward(f, dst, momenta);
}

MatchResult lddmm_match(const ShapeSample& src, const ShapeSample& dst,
                        const LddmmConfig& config) {
  check_pair(src, dst, config);
  const auto& kr = simd::active();
  const int n = src.n();
  const size_t dof = static_cast<size_t>(config.timesteps) * 2 * n;

  std::vector<double> p(dof, 0.0);
  Flow f = forward(src, dst, config, p);
  if (!std::isfinite(f.energy()))
    raise(ErrorCode::non_finite_energy, "lddmm: non-finite initial energy");

  MatchResult res;
  res.energy_history.push_back(f.energy());
  res.distance_history.push_back(std::sqrt(std::max(0.0, f.kinetic)));
  double step = 1.0;
  std::vector<double> trial(dof);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const std::vector<double> grad = backward(f, dst, p);
    double ginf = 0.0;
    for (const double g : grad) ginf = std::max(ginf, std::abs(g));
    if (ginf < config.grad_tol) {
      res.converged = true;
      break;
    }
    const double gnorm_sq = kr.sum_sq(grad.data(), dof);

    // Backtracking line search (Armijo, c = 1e-4, halving).
    bool accepted = false;
    double s = step;
    while (s > 1e-16) {
      for (size_t i = 0; i < dof; ++i) trial[i] = p[i] - s * grad[i];
      Flow ft = forward(src, dst, config, trial);
      const double e = ft.energy();
      if (std::isfinite(e) && e <= f.energy() - 1e-4 * s * gnorm_sq) {
        p.swap(trial);
        f = std::move(ft);
        res.energy_history.push_back(e);
        res.distance_history.push_back(std::sqrt(std::max(0.0, f.kinetic)));
        step = std::min(s * 2.0, 1e3);
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;  // no further progress at any step size
  }

  res.distance = std::sqrt(std::max(0.0, f.kinetic));
  res.residual = std::sqrt(f.resid_sq);
  res.momenta = std::move(p);
  res.deformed.id = src.id + "_to_" + dst.id;
  res.deformed.points.resize(n);
  for (int i = 0; i < n; ++i)
    res.deformed.points[i] = {f.xs[config.timesteps][i], f.ys[config.timesteps][i]};
  return res;
}

DistanceMatrix lddmm_distances(std::span<const PreShape> samples,
                               const LddmmConfig& config,
                               const LddmmMatrixOptions& opts) {
  if (samples.empty())
    raise(ErrorCode::insufficient_samples, "lddmm_distances: no samples");
  std::vector<ShapeSample> shapes(samples.size());
  std::vector<std::string> ids;
  for (size_t i = 0; i < samples.size(); ++i) {
    shapes[i].points = samples[i].points;
    shapes[i].id = samples[i].provenance;
    ids.push_back(samples[i].provenance);
  }

  std::atomic<int> nonconverged{0};
  auto pair_fn = [&](int i, int j) {
    MatchResult m = lddmm_match(shapes[i], shapes[j], config);
    if (!m.converged) nonconverged.fetch_add(1);
    double d = m.distance;
    if (opts.bidirectional) {
      MatchResult back = lddmm_match(shapes[j], shapes[i], config);
      if (!back.converged) nonconverged.fetch_add(1);
      d = 0.5 * (d + back.distance);
    }
    return d;
  };

  std::map<std::string, std::string> params = {
      {"kernel_width", std::to_string(config.kernel_width)},
      {"lambda", std::to_string(config.lambda)},
      {"timesteps", std::to_string(config.timesteps)},
      {"bidirectional", opts.bidirectional ? "1" : "0"},
  };
  DistanceMatrix dm =
      compute_distance_matrix(ids, pair_fn, "lddmm", params, opts.distmat);
  dm.params["nonconverged_cells"] = std::to_string(nonconverged.load());
  return dm;
}

}  // namespace morphkit
