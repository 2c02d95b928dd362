#include "blochcalc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <queue>
#include <thread>

namespace blochcalc {

namespace {

thread_local bool in_parallel_region = false;

double halton(std::size_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

struct Sample {
  double value;
  double r;
  double theta;
};

struct Cell {
  double bound;
  double r0, r1, t0, t1;
  bool operator<(const Cell& o) const { return bound < o.bound; }
};

}  // namespace

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BLOCHCALC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1 || in_parallel_region) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      in_parallel_region = true;
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
      in_parallel_region = false;
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<cplx> halton_disc(std::size_t count, double radius) {
  std::vector<cplx> pts;
  pts.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const double r = radius * std::sqrt(halton(i, 2));
    const double th = 2.0 * std::numbers::pi * halton(i, 3);
    pts.push_back(std::polar(r, th));
  }
  return pts;
}

std::vector<double> chebyshev_radii(int n, double r_max) {
  std::vector<double> r(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    r[i] = (i == n - 1) ? r_max : r_max * std::sin(0.5 * std::numbers::pi * i / (n - 1));
  }
  return r;
}

SupBracket maximize_on_disc(const std::function<double(cplx)>& objective, const SamplingConfig& cfg,
                            double r_max, const CellBound& cell_bound,
                            std::optional<double> outer_bound, std::optional<double> known_upper) {
  const int R = std::max(cfg.radial, 2);
  const int A = std::max(cfg.angular, 1);
  const double dtheta = 2.0 * std::numbers::pi / A;
  const auto radii = chebyshev_radii(R, r_max);

  std::vector<Sample> samples;
  // Ring 0 is the origin: one sample.
  std::vector<std::pair<double, double>> grid;
  grid.reserve(static_cast<std::size_t>((R - 1) * A + 1));
  grid.emplace_back(0.0, 0.0);
  for (int i = 1; i < R; ++i)
    for (int j = 0; j < A; ++j) grid.emplace_back(radii[i], j * dtheta);

  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    values[k] = objective(std::polar(grid[k].first, grid[k].second));
  });
  samples.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) samples.push_back({values[k], grid[k].first, grid[k].second});

  auto radial_step = [&](double r) {
    auto it = std::lower_bound(radii.begin(), radii.end(), r);
    std::size_t i = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - radii.begin(), R - 1));
    double h = 0.0;
    if (i + 1 < radii.size()) h = std::max(h, radii[i + 1] - radii[i]);
    if (i > 0) h = std::max(h, radii[i] - radii[i - 1]);
    return h;
  };

  // Refinement around the best cells.
  struct Focus {
    double r, theta, hr, ht;
  };
  auto top_k = [&](const std::vector<Sample>& pool, std::size_t k) {
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (pool[a].value != pool[b].value) return pool[a].value > pool[b].value;
                        return a < b;
                      });
    idx.resize(k);
    return idx;
  };

  std::vector<Focus> focus;
  for (std::size_t i : top_k(samples, static_cast<std::size_t>(cfg.refine_k))) {
    const auto& s = samples[i];
    focus.push_back({s.r, s.theta, radial_step(s.r), s.r == 0.0 ? std::numbers::pi : dtheta});
  }
  constexpr int kSub = 9;
  for (int round = 0; round < cfg.rounds; ++round) {
    std::vector<Sample> fresh(focus.size() * kSub * kSub);
    parallel_for(focus.size(), [&](std::size_t f) {
      const Focus& c = focus[f];
      for (int a = 0; a < kSub; ++a) {
        for (int b = 0; b < kSub; ++b) {
          const double r = std::clamp(c.r - c.hr + 2.0 * c.hr * a / (kSub - 1), 0.0, r_max);
          const double t = c.theta - c.ht + 2.0 * c.ht * b / (kSub - 1);
          fresh[(f * kSub + a) * kSub + b] = {objective(std::polar(r, t)), r, t};
        }
      }
    });
    std::vector<Focus> next;
    for (std::size_t i : top_k(fresh, static_cast<std::size_t>(cfg.refine_k))) {
      next.push_back({fresh[i].r, fresh[i].theta, 0.25 * focus[i / (kSub * kSub)].hr,
                      0.25 * focus[i / (kSub * kSub)].ht});
    }
    samples.insert(samples.end(), fresh.begin(), fresh.end());
    focus = std::move(next);
  }

  // Compass search in (r, theta) from each remaining focus, r clamped to [0, r_max].
  std::vector<Sample> polished(focus.size());
  parallel_for(focus.size(), [&](std::size_t f) {
    double r = focus[f].r, t = focus[f].theta;
    double hr = focus[f].hr, ht = focus[f].ht;
    const double hr_cap = hr, ht_cap = ht;
    double best = objective(std::polar(r, t));
    for (int it = 0; it < 4000 && (hr > 1e-15 || ht > 1e-15); ++it) {
      bool moved = false;
      for (int dr = -1; dr <= 1 && !moved; ++dr) {
        for (int dt = -1; dt <= 1 && !moved; ++dt) {
          if (dr == 0 && dt == 0) continue;
          const double rr = std::clamp(r + dr * hr, 0.0, r_max), tt = t + dt * ht;
          const double v = objective(std::polar(rr, tt));
          if (v > best) {
            best = v;
            r = rr;
            t = tt;
            moved = true;
          }
        }
      }
      if (moved) {
        hr = std::min(2.0 * hr, hr_cap);
        ht = std::min(2.0 * ht, ht_cap);
      } else {
        hr *= 0.5;
        ht *= 0.5;
      }
    }
    polished[f] = {best, r, t};
  });
  samples.insert(samples.end(), polished.begin(), polished.end());

  SupBracket out;
  out.evaluations = samples.size();
  for (const auto& s : samples) out.lower = std::max(out.lower, s.value);

  auto collect_argmax = [&] {
    out.argmax.clear();
    for (const auto& s : samples) {
      if (s.value < out.lower - 1e-9) continue;
      const cplx z = std::polar(s.r, s.theta);
      bool dup = false;
      for (const auto& w : out.argmax) dup = dup || std::abs(w - z) < 1e-12;
      if (!dup) out.argmax.push_back(z);
      if (out.argmax.size() >= 256) break;
    }
  };

  // With a target the search decides "upper <= target" and ignores the relative tolerance.
  const bool deciding = std::isfinite(cfg.bb_target);
  auto close_enough = [&](double upper) {
    if (deciding) return upper <= cfg.bb_target;
    return upper <= out.lower * (1.0 + cfg.bb_rel_tol) + cfg.bb_abs_tol;
  };

  double certified_upper = std::numeric_limits<double>::infinity();
  if (known_upper) certified_upper = *known_upper;

  if (cfg.certify && cell_bound && outer_bound && !close_enough(certified_upper)) {
    auto bound_of = [&](double r0, double r1, double t0, double t1) {
      const double rm = 0.5 * (r0 + r1), tm = 0.5 * (t0 + t1);
      const double rho = 0.5 * (r1 - r0) + 0.5 * r1 * (t1 - t0);
      const cplx c = std::polar(rm, tm);
      auto b = cell_bound(c, rho, r0);
      const double v = objective(c);
      samples.push_back({v, rm, tm});
      out.lower = std::max(out.lower, v);
      return b ? std::max(*b, v) : std::numeric_limits<double>::infinity();
    };
    std::priority_queue<Cell> heap;
    std::vector<Cell> initial(static_cast<std::size_t>((R - 1) * A));
    for (int i = 0; i + 1 < R; ++i)
      for (int j = 0; j < A; ++j)
        initial[static_cast<std::size_t>(i * A + j)] = {0.0, radii[i], radii[i + 1], j * dtheta, (j + 1) * dtheta};
    std::vector<std::optional<double>> bounds(initial.size());
    std::vector<double> centre_values(initial.size());
    parallel_for(initial.size(), [&](std::size_t k) {
      const Cell& c = initial[k];
      const double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
      const double rho = 0.5 * (c.r1 - c.r0) + 0.5 * c.r1 * (c.t1 - c.t0);
      bounds[k] = cell_bound(std::polar(rm, tm), rho, c.r0);
      centre_values[k] = objective(std::polar(rm, tm));
    });
    for (std::size_t k = 0; k < initial.size(); ++k) {
      Cell c = initial[k];
      const double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
      samples.push_back({centre_values[k], rm, tm});
      out.lower = std::max(out.lower, centre_values[k]);
      c.bound = bounds[k] ? std::max(*bounds[k], centre_values[k]) : std::numeric_limits<double>::infinity();
      heap.push(c);
    }
    std::size_t budget = cfg.bb_budget;
    while (!heap.empty() && budget > 0) {
      const double upper = std::max(heap.top().bound, *outer_bound);
      if (close_enough(upper) || close_enough(std::min(upper, certified_upper))) break;
      if (heap.top().bound <= *outer_bound) break;
      Cell c = heap.top();
      heap.pop();
      --budget;
      const double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
      for (auto [a0, a1] : {std::pair{c.r0, rm}, std::pair{rm, c.r1}}) {
        for (auto [b0, b1] : {std::pair{c.t0, tm}, std::pair{tm, c.t1}}) {
          heap.push({bound_of(a0, a1, b0, b1), a0, a1, b0, b1});
        }
      }
    }
    const double bb_upper = heap.empty() ? *outer_bound : std::max(heap.top().bound, *outer_bound);
    certified_upper = std::min(certified_upper, bb_upper);
  }

  out.evaluations = samples.size();
  if (std::isfinite(certified_upper)) {
    out.upper = certified_upper;
    out.certified = true;
    // Rounding can push a sampled value a few ulps past an exact bound.
    out.lower = std::min(out.lower, out.upper);
  } else {
    out.upper = out.lower * (1.0 + cfg.slack);
    out.certified = false;
  }
  collect_argmax();
  return out;
}

}  // namespace blochcalc
