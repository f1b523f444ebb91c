#include "morphkit/srvf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include "morphkit/errors.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {
namespace {

constexpr double kNegInf = -1e30;

double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

double inner(const SrvfCurve& a, const SrvfCurve& b) {
  const auto& k = simd::active();
  const size_t n = a.x.size();
  return (k.dot(a.x.data(), b.x.data(), n) + k.dot(a.y.data(), b.y.data(), n)) /
         static_cast<double>(n);
}

double q_norm(const SrvfCurve& q) {
  const auto& k = simd::active();
  const size_t n = q.x.size();
  return std::sqrt((k.sum_sq(q.x.data(), n) + k.sum_sq(q.y.data(), n)) /
                   static_cast<double>(n));
}

void normalize(SrvfCurve& q) {
  const double nrm = q_norm(q);
  if (nrm < 1e-14) raise(ErrorCode::degenerate_curve, "zero-norm SRVF");
  for (double& v : q.x) v /= nrm;
  for (double& v : q.y) v /= nrm;
}

SrvfCurve cyclic_shift(const SrvfCurve& q, int s) {
  const int n = q.n();
  SrvfCurve out;
  out.provenance = q.provenance;
  out.x.resize(n);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + s) % n;
    out.x[i] = q.x[j];
    out.y[i] = q.y[j];
  }
  return out;
}

void rotate_in_place(SrvfCurve& q, const Mat2& r) {
  for (int i = 0; i < q.n(); ++i) {
    const Vec2 v = r * Vec2{q.x[i], q.y[i]};
    q.x[i] = v.x;
    q.y[i] = v.y;
  }
}

Mat2 optimal_q_rotation(const SrvfCurve& target, const SrvfCurve& moving) {
  double sd = 0.0, sc = 0.0;
  for (int i = 0; i < target.n(); ++i) {
    const Vec2 a{target.x[i], target.y[i]};
    const Vec2 b{moving.x[i], moving.y[i]};
    sd += dot(b, a);
    sc += cross(b, a);
  }
  return Mat2::rotation(std::atan2(sc, sd));
}

// Slope-constrained dynamic program over the (N+1)^2 grid of the pointwise
// inner products G[i][j] = <q_a[i], q_b[j]> (periodic in j). Maximizes the
// discrete correlation  sum sqrt(gamma') <q_a(t), q_b(gamma(t))> / N  with
// gamma pinned to the corners; slopes range over [1/3, 3].
struct StepDef { int di, dj; };
constexpr StepDef kSteps[7] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}};

// With band > 0 only cells with |j - i| <= band are expanded, which is
// enough for the rotation-scan phase where warps stay near the diagonal;
// band <= 0 runs the full grid. Returns the optimal gamma; *value_out (when
// non-null) receives the DP objective.
std::vector<double> dp_warp(const std::vector<double>& grid, int n, int band,
                            double* value_out) {
  const int w = n + 1;
  std::vector<double> h(static_cast<size_t>(w) * w, kNegInf);
  std::vector<int8_t> pred(static_cast<size_t>(w) * w, -1);
  h[0] = 0.0;

  // Per-step constants.
  double slope[7], sqrt_slope[7];
  for (int s = 0; s < 7; ++s) {
    slope[s] = static_cast<double>(kSteps[s].dj) / kSteps[s].di;
    sqrt_slope[s] = std::sqrt(slope[s]);
  }

  const double inv_n = 1.0 / n;
  for (int i = 1; i <= n; ++i) {
    const int row = i * w;
    int j_lo = 1, j_hi = n;
    if (band > 0) {
      j_lo = std::max(1, i - band);
      j_hi = std::min(n, i + band);
    }
    for (int j = j_lo; j <= j_hi; ++j) {
      double best = kNegInf;
      int8_t best_s = -1;
      for (int s = 0; s < 7; ++s) {
        const int i0 = i - kSteps[s].di;
        const int j0 = j - kSteps[s].dj;
        if (i0 < 0 || j0 < 0) continue;
        const double base = h[static_cast<size_t>(i0) * w + j0];
        if (base <= kNegInf * 0.5) continue;
        // Left-endpoint samples along the straight step, q_b linearly
        // interpolated at fractional grid columns.
        double gain = 0.0;
        for (int t = 0; t < kSteps[s].di; ++t) {
          const double jp = j0 + slope[s] * t;
          const int jf = static_cast<int>(jp);
          const double fr = jp - jf;
          const double* grow = &grid[static_cast<size_t>(i0 + t) * w];
          const double g = fr == 0.0 ? grow[jf] : grow[jf] + fr * (grow[jf + 1] - grow[jf]);
          gain += sqrt_slope[s] * g;
        }
        const double cand = base + gain * inv_n;
        if (cand > best) {
          best = cand;
          best_s = static_cast<int8_t>(s);
        }
      }
      h[row + j] = best;
      pred[row + j] = best_s;
    }
  }

  // Backtrack the node path and interpolate gamma onto every grid row.
  std::vector<std::pair<int, int>> nodes;
  int ci = n, cj = n;
  nodes.emplace_back(ci, cj);
  while (ci > 0 || cj > 0) {
    const int8_t s = pred[static_cast<size_t>(ci) * w + cj];
    if (s < 0) break;  // unreachable; the all-(1,1) diagonal always exists
    ci -= kSteps[s].di;
    cj -= kSteps[s].dj;
    nodes.emplace_back(ci, cj);
  }
  std::reverse(nodes.begin(), nodes.end());

  std::vector<double> gamma(w, 0.0);
  for (size_t k = 0; k + 1 < nodes.size(); ++k) {
    const auto [i0, j0] = nodes[k];
    const auto [i1, j1] = nodes[k + 1];
    for (int i = i0; i <= i1; ++i) {
      const double f = i1 == i0 ? 0.0 : static_cast<double>(i - i0) / (i1 - i0);
      gamma[i] = (j0 + f * (j1 - j0)) / n;
    }
  }
  gamma[0] = 0.0;
  gamma[n] = 1.0;
  if (value_out) *value_out = h[static_cast<size_t>(n) * w + n];
  return gamma;
}

// Banded DP objective value only: rolling rows, no predecessor storage, and
// fills restricted to the band. Used to score (seed, angle) candidates.
double dp_band_value(const double* grid, int n, int band,
                     std::vector<double>& ring) {
  const int w = n + 1;
  ring.resize(static_cast<size_t>(4) * w);
  auto row_ptr = [&](int i) { return ring.data() + (i & 3) * w; };

  double slope[7], sqrt_slope[7];
  for (int s = 0; s < 7; ++s) {
    slope[s] = static_cast<double>(kSteps[s].dj) / kSteps[s].di;
    sqrt_slope[s] = std::sqrt(slope[s]);
  }

  {
    double* r0 = row_ptr(0);
    std::fill(r0, r0 + w, kNegInf);
    r0[0] = 0.0;
  }
  const double inv_n = 1.0 / n;
  for (int i = 1; i <= n; ++i) {
    double* cur = row_ptr(i);
    const int j_lo = std::max(1, i - band);
    const int j_hi = std::min(n, i + band);
    // Overwrite everything successors may read from this ring slot.
    const int f_lo = std::max(0, j_lo - 10);
    const int f_hi = std::min(n, j_hi + 10);
    std::fill(cur + f_lo, cur + f_hi + 1, kNegInf);
    for (int j = j_lo; j <= j_hi; ++j) {
      double best = kNegInf;
      for (int s = 0; s < 7; ++s) {
        const int i0 = i - kSteps[s].di;
        const int j0 = j - kSteps[s].dj;
        if (i0 < 0 || j0 < 0) continue;
        const double base = row_ptr(i0)[j0];
        if (base <= kNegInf * 0.5) continue;
        double gain = 0.0;
        for (int t = 0; t < kSteps[s].di; ++t) {
          const double jp = j0 + slope[s] * t;
          const int jf = static_cast<int>(jp);
          const double fr = jp - jf;
          const double* grow = &grid[static_cast<size_t>(i0 + t) * w];
          gain += sqrt_slope[s] *
                  (fr == 0.0 ? grow[jf] : grow[jf] + fr * (grow[jf + 1] - grow[jf]));
        }
        const double cand = base + gain * inv_n;
        if (cand > best) best = cand;
      }
      cur[j] = best;
    }
  }
  return row_ptr(n)[n];
}

// Group action of a warp on an SRVF: q(gamma(t)) * sqrt(gamma'(t)),
// re-projected onto the unit sphere.
SrvfCurve apply_warp_q(const SrvfCurve& q, const std::vector<double>& gamma) {
  const int n = q.n();
  SrvfCurve out;
  out.provenance = q.provenance;
  out.x.resize(n);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double pos = gamma[i] * n;
    int jf = static_cast<int>(pos);
    const double fr = pos - jf;
    jf %= n;
    const int jn = (jf + 1) % n;
    const double dgam = std::max(0.0, (gamma[i + 1] - gamma[i]) * n);
    const double s = std::sqrt(dgam);
    out.x[i] = s * (q.x[jf] + fr * (q.x[jn] - q.x[jf]));
    out.y[i] = s * (q.y[jf] + fr * (q.y[jn] - q.y[jf]));
  }
  normalize(out);
  return out;
}

std::vector<double> identity_warp(int n) {
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = static_cast<double>(i) / n;
  return g;
}

struct AlignResult {
  SrvfCurve aligned;
  Registration reg;
  double inner_product = -1.0;
};

// Pointwise dot and cross grids between q_a and q_b (both periodic) on
// (n+1)^2 nodes. For a rotation by theta the inner-product grid is
// cos(theta)*D - sin(theta)*C, so one (D, C) pair serves a whole rotation
// scan.
void build_dot_cross_grids(const SrvfCurve& qa, const SrvfCurve& qb,
                           std::vector<double>& dots,
                           std::vector<double>& crosses) {
  const auto& k = simd::active();
  const int n = qa.n();
  const int w = n + 1;
  dots.resize(static_cast<size_t>(w) * w);
  crosses.resize(static_cast<size_t>(w) * w);
  std::vector<double> bx(qb.x.begin(), qb.x.end());
  std::vector<double> by(qb.y.begin(), qb.y.end());
  bx.push_back(qb.x[0]);
  by.push_back(qb.y[0]);
  for (int i = 0; i <= n; ++i) {
    const int ia = i % n;
    k.dot_cross_row(qa.x[ia], qa.y[ia], bx.data(), by.data(), w,
                    &dots[static_cast<size_t>(i) * w],
                    &crosses[static_cast<size_t>(i) * w]);
  }
}

// Alternation from a fixed start point and initial rotation. Every
// candidate is warped directly from the (rotated) base so it stays a single
// slope-constrained warp: compositions would both evade the slope bounds and
// accumulate interpolation loss. The rotation refit commutes with the warp,
// so (rotation, seed, warp) always exactly reproduces the candidate.
AlignResult align_candidate(const SrvfCurve& qa, const SrvfCurve& base,
                            int seed, double init_theta,
                            const RegistrationOptions& opts) {
  const int n = qa.n();
  AlignResult res;
  res.reg.seed_shift = seed;
  res.reg.warp = identity_warp(n);

  Mat2 rot_total = init_theta != 0.0 ? Mat2::rotation(init_theta) : Mat2::identity();
  SrvfCurve rotated = base;  // rot_total applied to base, never warped
  if (init_theta != 0.0) rotate_in_place(rotated, rot_total);

  res.aligned = rotated;
  res.reg.rotation = rot_total;
  res.inner_product = inner(qa, rotated);

  std::vector<double> grid, crosses_unused;
  const int rounds = (opts.rotation || opts.warp) ? std::max(1, opts.rounds) : 0;
  for (int r = 0; r < rounds; ++r) {
    SrvfCurve cand = rotated;
    std::vector<double> gamma = identity_warp(n);
    if (opts.warp) {
      build_dot_cross_grids(qa, rotated, grid, crosses_unused);
      gamma = dp_warp(grid, n, 0, nullptr);
      cand = apply_warp_q(rotated, gamma);
    }
    Mat2 rot_cand = rot_total;
    if (opts.rotation) {
      const Mat2 refit = optimal_q_rotation(qa, cand);
      rotate_in_place(cand, refit);
      rot_cand = refit * rot_total;
    }
    const double ip = inner(qa, cand);
    if (ip <= res.inner_product + 1e-14) break;
    res.inner_product = ip;
    res.aligned = std::move(cand);
    res.reg.rotation = rot_cand;
    res.reg.warp = gamma;
    if (opts.rotation) {
      rot_total = rot_cand;
      rotated = base;
      rotate_in_place(rotated, rot_total);
    }
  }
  return res;
}

std::vector<int> seed_candidates(int n, RegistrationOptions::Seeds mode) {
  std::vector<int> seeds;
  switch (mode) {
    case RegistrationOptions::Seeds::none:
      seeds.push_back(0);
      break;
    case RegistrationOptions::Seeds::all:
      for (int s = 0; s < n; ++s) seeds.push_back(s);
      break;
    case RegistrationOptions::Seeds::coarse: {
      const int count = (n + 7) / 8;
      for (int k = 0; k < count; ++k) {
        const int s = static_cast<int>(
            std::llround(static_cast<double>(k) * n / count)) % n;
        if (seeds.empty() || seeds.back() != s) seeds.push_back(s);
      }
      break;
    }
  }
  return seeds;
}

// Joint search over start points and rotations.
//
// The rotation-warp objective is multimodal in the rotation angle and the
// alternation only converges within a basin: the warp can partially emulate
// a rotation by reparameterizing radial features, and once it does the
// rotation refit cannot escape. So candidates are scored first by a banded
// warp DP over a (seed x angle) sweep of the shared dot/cross grids -- a
// 30-degree sweep per seed, a finer 5-degree sweep around the winners --
// and the expensive full alternation only polishes the best few.
AlignResult register_to(const SrvfCurve& qa, const SrvfCurve& qb,
                        const RegistrationOptions& opts) {
  const auto& kr = simd::active();
  const int n = qa.n();
  const std::vector<int> seeds = seed_candidates(n, opts.seeds);

  if (!(opts.rotation && opts.warp)) {
    // Single-transform searches need no basin scan.
    AlignResult best;
    for (const int s : seeds) {
      AlignResult cand = align_candidate(qa, cyclic_shift(qb, s), s, 0.0, opts);
      if (cand.inner_product > best.inner_product) best = std::move(cand);
    }
    if (opts.seeds == RegistrationOptions::Seeds::coarse && n > 8 &&
        seeds.size() > 1) {
      const int spacing = (n + static_cast<int>(seeds.size()) - 1) /
                          static_cast<int>(seeds.size());
      const int radius = std::max(2, (spacing + 1) / 2);
      const int center = best.reg.seed_shift;
      for (int off = -radius; off <= radius; ++off) {
        if (off == 0) continue;
        const int s = ((center + off) % n + n) % n;
        if (std::find(seeds.begin(), seeds.end(), s) != seeds.end()) continue;
        AlignResult cand = align_candidate(qa, cyclic_shift(qb, s), s, 0.0, opts);
        if (cand.inner_product > best.inner_product) best = std::move(cand);
      }
    }
    return best;
  }

  const int band = std::max(4, n / 8);
  const double deg = M_PI / 180.0;
  std::vector<double> dots, crosses, grid, ring;

  struct Scored {
    int seed = 0;
    double theta = 0.0;         // after the fine-angle refinement
    double theta_coarse = 0.0;  // winner of the coarse sweep alone
    double value = kNegInf;
  };
  // Banded DP value for q_b(seed) rotated by theta; dot/cross grids must
  // already hold the current seed.
  auto score_theta = [&](double theta) {
    kr.axpby(std::cos(theta), dots.data(), -std::sin(theta), crosses.data(),
             grid.data(), dots.size());
    return dp_band_value(grid.data(), n, band, ring);
  };
  auto sweep_seed = [&](const SrvfCurve& base, int seed,
                        std::span<const double> thetas) {
    build_dot_cross_grids(qa, base, dots, crosses);
    grid.resize(dots.size());
    Scored best{seed, 0.0, 0.0, kNegInf};
    for (const double theta : thetas) {
      const double v = score_theta(theta);
      if (v > best.value) {
        best.theta = theta;
        best.value = v;
      }
    }
    best.theta_coarse = best.theta;
    // Refine the angle around this seed's winner.
    const double center = best.theta;
    for (const double off : {-25.0, -20.0, -15.0, -10.0, -5.0,
                             5.0, 10.0, 15.0, 20.0, 25.0}) {
      const double theta = center + off * deg;
      const double v = score_theta(theta);
      if (v > best.value) {
        best.theta = theta;
        best.value = v;
      }
    }
    return best;
  };

  std::vector<double> coarse_angles(12);
  for (int r = 0; r < 12; ++r) coarse_angles[r] = 30.0 * r * deg;

  // Sweep every candidate seed over the full angle hierarchy.
  std::vector<Scored> scored;
  scored.reserve(seeds.size() + 16);
  for (const int s : seeds)
    scored.push_back(sweep_seed(cyclic_shift(qb, s), s, coarse_angles));
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.value > b.value; });

  // Neighboring start points of the leaders (the corner-pinned warp cannot
  // absorb a multi-sample start offset); the optimal angle barely moves
  // between adjacent seeds, so a short sweep near each leader's angle is
  // enough. The true optimum can hide between coarse seeds whose own scores
  // are unremarkable, so the neighborhoods of the top few leaders are all
  // swept.
  if (opts.seeds == RegistrationOptions::Seeds::coarse && n > 8 &&
      seeds.size() > 1) {
    const int spacing = (n + static_cast<int>(seeds.size()) - 1) /
                        static_cast<int>(seeds.size());
    const int radius = std::max(2, (spacing + 1) / 2);
    std::vector<char> visited(n, 0);
    for (const int s : seeds) visited[s] = 1;
    const size_t leaders = std::min<size_t>(scored.size(), 3);
    for (size_t l = 0; l < leaders; ++l) {
      const int center = scored[l].seed;
      const double t0 = scored[l].theta;
      const double near_angles[5] = {t0 - 10.0 * deg, t0 - 5.0 * deg, t0,
                                     t0 + 5.0 * deg, t0 + 10.0 * deg};
      for (int off = -radius; off <= radius; ++off) {
        if (off == 0) continue;
        const int s = ((center + off) % n + n) % n;
        if (visited[s]) continue;
        visited[s] = 1;
        const SrvfCurve base = cyclic_shift(qb, s);
        build_dot_cross_grids(qa, base, dots, crosses);
        grid.resize(dots.size());
        Scored cand{s, t0, t0, kNegInf};
        for (const double theta : near_angles) {
          const double v = score_theta(theta);
          if (v > cand.value) {
            cand.theta = theta;
            cand.value = v;
          }
        }
        scored.push_back(cand);
      }
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      return a.value > b.value;
    });
  }

  // Full alternation for the top candidates; exhaustive seed mode polishes
  // everything (the banded ranking can be off for spiky shapes, and the
  // whole point of the flag is not to trust the heuristics).
  const size_t polish = opts.seeds == RegistrationOptions::Seeds::all
                            ? scored.size()
                            : std::min<size_t>(scored.size(), 6);
  AlignResult best;
  for (size_t c = 0; c < polish; ++c) {
    const SrvfCurve base = cyclic_shift(qb, scored[c].seed);
    AlignResult cand =
        align_candidate(qa, base, scored[c].seed, scored[c].theta, opts);
    if (cand.inner_product > best.inner_product) best = std::move(cand);
    if (opts.seeds == RegistrationOptions::Seeds::all &&
        scored[c].theta_coarse != scored[c].theta) {
      AlignResult alt =
          align_candidate(qa, base, scored[c].seed, scored[c].theta_coarse, opts);
      if (alt.inner_product > best.inner_product) best = std::move(alt);
    }
  }
  return best;
}

ShapeSample inverse_impl(const SrvfCurve& q, double scale, Vec2 anchor,
                         const std::string& id) {
  const int n = q.n();
  std::vector<double> vx(n), vy(n);
  for (int i = 0; i < n; ++i) {
    const double mag = std::hypot(q.x[i], q.y[i]);
    vx[i] = q.x[i] * mag;
    vy[i] = q.y[i] * mag;
  }
  ShapeSample out;
  out.id = id;
  out.points.resize(n);
  double accx = 0.0, accy = 0.0;
  const double step = scale / n;
  for (int i = 0; i < n; ++i) {
    out.points[i] = {anchor.x + step * accx, anchor.y + step * accy};
    accx += vx[i];
    accy += vy[i];
  }
  // Closure: remove the linear drift (c_N - c_0) * i/n.
  const double dx = step * accx, dy = step * accy;
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / n;
    out.points[i].x -= f * dx;
    out.points[i].y -= f * dy;
  }
  return out;
}

}  // namespace

SrvfCurve to_srvf(const ShapeSample& sample) {
  const int n = sample.n();
  if (n < 3) raise(ErrorCode::invalid_argument, "to_srvf needs >= 3 points");
  SrvfCurve q;
  q.provenance = sample.id;
  q.x.resize(n);
  q.y.resize(n);

  // Forward differences: the derivative of the polyline at its segment
  // midpoints, which makes srvf_inverse an exact inverse.
  double max_speed = 0.0;
  std::vector<double> speed(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 d = (sample.points[(i + 1) % n] - sample.points[i]) * static_cast<double>(n);
    speed[i] = norm(d);
    max_speed = std::max(max_speed, speed[i]);
    q.x[i] = d.x;
    q.y[i] = d.y;
  }
  if (max_speed < 1e-14)
    raise(ErrorCode::degenerate_curve, "curve has zero total arc length");
  for (int i = 0; i < n; ++i) {
    if (speed[i] < 1e-14 * max_speed) {
      q.x[i] = 0.0;
      q.y[i] = 0.0;
    } else {
      const double r = 1.0 / std::sqrt(speed[i]);
      q.x[i] *= r;
      q.y[i] *= r;
    }
  }
  normalize(q);
  return q;
}

ShapeSample srvf_inverse(const SrvfCurve& q, double scale, Vec2 anchor) {
  return inverse_impl(q, scale, anchor, q.provenance + "_inv");
}

SrvfDistanceResult srvf_distance(const SrvfCurve& a, const SrvfCurve& b,
                                 const RegistrationOptions& opts) {
  if (a.n() != b.n())
    raise(ErrorCode::length_mismatch, "SRVF curves have different sample counts");

  const AlignResult fwd = register_to(a, b, opts);
  double best_ip = fwd.inner_product;
  if (opts.bidirectional) {
    const AlignResult rev = register_to(b, a, opts);
    best_ip = std::max(best_ip, rev.inner_product);
  }
  SrvfDistanceResult out;
  out.distance = std::acos(clamp_unit(best_ip));
  out.registration = fwd.reg;
  return out;
}

ShapeSample apply_registration(const ShapeSample& b, const Registration& reg) {
  const int n = b.n();
  std::vector<Vec2> shifted(n);
  for (int i = 0; i < n; ++i) shifted[i] = b.points[(i + reg.seed_shift) % n];
  const Vec2 c = point_mean(shifted);
  for (Vec2& p : shifted) p = c + reg.rotation * (p - c);
  ShapeSample out;
  out.id = b.id + "_reg";
  out.label = b.label;
  out.points.resize(n);
  if (static_cast<int>(reg.warp.size()) == n + 1) {
    for (int i = 0; i < n; ++i)
      out.points[i] = interp_closed(shifted, reg.warp[i] * n);
  } else {
    out.points = std::move(shifted);
  }
  return out;
}

GeodesicPath geodesic_path(const ShapeSample& a, const ShapeSample& b,
                           int steps, const RegistrationOptions& opts) {
  if (steps < 2) raise(ErrorCode::invalid_argument, "geodesic needs kappa >= 2");
  if (a.n() != b.n())
    raise(ErrorCode::length_mismatch, "geodesic endpoints differ in size");

  const SrvfCurve qa = to_srvf(a);
  const SrvfCurve qb = to_srvf(b);
  RegistrationOptions reg_opts = opts;
  reg_opts.bidirectional = false;
  const AlignResult align = register_to(qa, qb, reg_opts);
  const double theta = std::acos(clamp_unit(align.inner_product));

  const double len_a = polygon_perimeter(a.points);
  const double len_b = polygon_perimeter(b.points);
  const Vec2 anchor_a = a.points[0];
  const Vec2 anchor_b = apply_registration(b, align.reg).points[0];

  GeodesicPath path;
  path.steps = steps;
  path.shapes.reserve(steps + 1);
  const double sin_theta = std::sin(theta);
  for (int j = 0; j <= steps; ++j) {
    const double tau = static_cast<double>(j) / steps;
    SrvfCurve qj;
    qj.provenance = a.id + "_morph" + std::to_string(j);
    if (j == 0 || theta < 1e-12) {
      qj.x = qa.x;
      qj.y = qa.y;
    } else if (j == steps) {
      qj.x = align.aligned.x;
      qj.y = align.aligned.y;
    } else {
      const double wa = std::sin((1.0 - tau) * theta) / sin_theta;
      const double wb = std::sin(tau * theta) / sin_theta;
      const int n = qa.n();
      qj.x.resize(n);
      qj.y.resize(n);
      simd::active().axpby(wa, qa.x.data(), wb, align.aligned.x.data(), qj.x.data(), n);
      simd::active().axpby(wa, qa.y.data(), wb, align.aligned.y.data(), qj.y.data(), n);
    }
    const double scale = (1.0 - tau) * len_a + tau * len_b;
    const Vec2 anchor = (1.0 - tau) * anchor_a + tau * anchor_b;
    ShapeSample s = inverse_impl(qj, scale, anchor, qj.provenance);
    s.label = a.label;
    path.shapes.push_back(std::move(s));
  }

  RegistrationOptions plain;
  plain.seeds = RegistrationOptions::Seeds::none;
  plain.rotation = false;
  plain.warp = false;
  plain.bidirectional = false;
  for (int j = 0; j < steps; ++j)
    path.energy +=
        srvf_distance(path.shapes[j], path.shapes[j + 1], plain).distance;
  return path;
}

KarcherResult karcher_mean(std::span<const ShapeSample> samples, double tol,
                           int max_iter, const RegistrationOptions& opts) {
  if (samples.empty())
    raise(ErrorCode::insufficient_samples, "karcher_mean: no samples");
  const int n = samples[0].n();
  for (const auto& s : samples)
    if (s.n() != n)
      raise(ErrorCode::mismatched_sizes, "karcher_mean: point counts differ");

  std::vector<SrvfCurve> qs;
  qs.reserve(samples.size());
  for (const auto& s : samples) qs.push_back(to_srvf(s));

  RegistrationOptions reg_opts = opts;
  reg_opts.bidirectional = false;

  // Start from the medoid: the sample with least summed distance to the rest.
  size_t init = 0;
  if (qs.size() > 1) {
    std::vector<double> sums(qs.size(), 0.0);
    for (size_t i = 0; i < qs.size(); ++i)
      for (size_t j = i + 1; j < qs.size(); ++j) {
        const double d =
            std::acos(clamp_unit(register_to(qs[i], qs[j], reg_opts).inner_product));
        sums[i] += d;
        sums[j] += d;
      }
    init = static_cast<size_t>(
        std::min_element(sums.begin(), sums.end()) - sums.begin());
  }

  SrvfCurve mu = qs[init];
  KarcherResult result;
  const auto& k = simd::active();
  std::vector<double> vbar_x(n), vbar_y(n);

  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    std::fill(vbar_x.begin(), vbar_x.end(), 0.0);
    std::fill(vbar_y.begin(), vbar_y.end(), 0.0);
    for (const auto& q : qs) {
      const AlignResult a = register_to(mu, q, reg_opts);
      const double c = clamp_unit(a.inner_product);
      const double theta = std::acos(c);
      if (theta < 1e-14) continue;
      const double f = theta / std::sin(theta);
      for (int i = 0; i < n; ++i) {
        vbar_x[i] += f * (a.aligned.x[i] - c * mu.x[i]);
        vbar_y[i] += f * (a.aligned.y[i] - c * mu.y[i]);
      }
    }
    const double inv = 1.0 / static_cast<double>(qs.size());
    for (int i = 0; i < n; ++i) {
      vbar_x[i] *= inv;
      vbar_y[i] *= inv;
    }
    result.tangent_norm = std::sqrt(
        (k.sum_sq(vbar_x.data(), n) + k.sum_sq(vbar_y.data(), n)) / n);
    if (result.tangent_norm < tol) {
      result.converged = true;
      break;
    }
    // Step halfway along the exponential map: exp_mu(0.5 * vbar).
    const double delta = 0.5 * result.tangent_norm;
    const double cd = std::cos(delta);
    const double sd = std::sin(delta) / result.tangent_norm;
    for (int i = 0; i < n; ++i) {
      mu.x[i] = cd * mu.x[i] + sd * vbar_x[i];
      mu.y[i] = cd * mu.y[i] + sd * vbar_y[i];
    }
    normalize(mu);
  }

  ShapeSample mean = inverse_impl(mu, 1.0, Vec2{0.0, 0.0}, "karcher_mean");
  const Vec2 c = point_mean(mean.points);
  for (Vec2& p : mean.points) p -= c;
  result.mean = std::move(mean);
  return result;
}

double path_energy(std::span<const ShapeSample> shapes,
                   const RegistrationOptions& opts) {
  if (shapes.size() < 2)
    raise(ErrorCode::invalid_argument, "path_energy needs >= 2 shapes");
  const int n = shapes[0].n();
  for (const auto& s : shapes)
    if (s.n() != n)
      raise(ErrorCode::length_mismatch, "path_energy: point counts differ");
  double e = 0.0;
  for (size_t i = 0; i + 1 < shapes.size(); ++i)
    e += srvf_distance(shapes[i], shapes[i + 1], opts).distance;
  return e;
}

}  // namespace morphkit
