// atpqrm command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "atpqrm/atpqrm.h"
#include "table.hpp"

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  atpqrm_status status;
  ApiError(atpqrm_status s, const std::string& ctx)
      : std::runtime_error(ctx + ": " + atpqrm_status_string(s) + " (" + atpqrm_last_error() + ")"), status(s) {}
};

void check(atpqrm_status s, const std::string& ctx) {
  if (s != ATPQRM_OK) throw ApiError(s, ctx);
}

struct RunConfig {
  std::string command;
  double delta = 0.5;
  double r = 0.2;
  double g = 0.2;
  std::string g_range;
  double q = 0.25;
  int parity = 1;
  std::vector<std::string> trunc_items;
  long dim = 0;
  long k = 20;
  std::string out;
  std::string format = "csv";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string precision = "standard";
  double tol = 1e-12;
  std::string e_range = "-1:8:901";
  std::string delta_range;
  std::string x_range = "0.1:15:150";
  long m = 0;
  long n_max = 3;
  double L = 200.0;
  double h = 0.01;
  long k_states = 3;
  long wavefunction = -1;
  bool ed_overlay = false;
  bool poles = false;

  std::string trunc() const {
    std::string s;
    for (const auto& t : trunc_items) s += (s.empty() ? "" : ",") + t;
    return s;
  }

  cli::KeyValues echo() const {
    auto d = cli::format_double;
    return {{"version", atpqrm_version()},
            {"command", command},
            {"delta", d(delta)},
            {"r", d(r)},
            {"g", d(g)},
            {"g-range", g_range},
            {"q", d(q)},
            {"parity", std::to_string(parity)},
            {"trunc", trunc()},
            {"dim", std::to_string(dim)},
            {"k", std::to_string(k)},
            {"format", format},
            {"precision", precision},
            {"tol", d(tol)},
            {"e-range", e_range},
            {"delta-range", delta_range},
            {"x-range", x_range},
            {"m", std::to_string(m)},
            {"n-max", std::to_string(n_max)},
            {"L", d(L)},
            {"spacing", d(h)},
            {"k-states", std::to_string(k_states)},
            {"wavefunction", std::to_string(wavefunction)},
            {"ed-overlay", ed_overlay ? "true" : "false"},
            {"poles", poles ? "true" : "false"}};
  }
};

// "lo:hi:n" -> n points from lo to hi inclusive.
std::vector<double> parse_range(const std::string& text, const char* name) {
  double lo = 0, hi = 0;
  long n = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &tail) != 3)
    throw UsageError(std::string(name) + " must have the form lo:hi:n, got '" + text + "'");
  if (n < 1 || hi < lo || (n == 1 && hi != lo) || (n > 1 && hi == lo))
    throw UsageError(std::string(name) + " '" + text + "' is empty or inconsistent");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<long> parse_ladder(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    double v = 0;
    char tail = 0;
    if (std::sscanf(item.c_str(), "%lf%c", &v, &tail) != 1 || !(v >= 1) || v > 1e12 || v != std::floor(v))
      throw UsageError("truncation '" + item + "' is not a positive integer");
    out.push_back(static_cast<long>(v));
  }
  return out;
}

template <typename R, typename F>
std::vector<R> parallel_map(std::size_t n, unsigned threads, F f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const unsigned t = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < t; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

atpqrm_params params_of(const RunConfig& c, double g) { return {c.delta, c.r, g, c.q, c.parity}; }

atpqrm_g_options g_options_of(const RunConfig& c) {
  atpqrm_g_options o = atpqrm_g_options_default();
  const auto ladder = parse_ladder(c.trunc());
  if (!ladder.empty()) o.truncation = ladder.front();
  o.tol = c.tol;
  o.extended_precision = c.precision == "extended";
  return o;
}

std::vector<double> couplings(const RunConfig& c) {
  const double gc = atpqrm_collapse_coupling(c.r);
  std::vector<double> gs = c.g_range.empty() ? std::vector<double>{c.g} : parse_range(c.g_range, "--g-range");
  for (double g : gs)
    if (!(g >= 0.0 && g < gc))
      throw UsageError("coupling " + cli::format_double(g) + " is outside [0, g_c=" + cli::format_double(gc) + ")");
  return gs;
}

std::vector<double> splittings(const RunConfig& c) {
  return c.delta_range.empty() ? std::vector<double>{c.delta} : parse_range(c.delta_range, "--delta-range");
}

long pole_interval_of(double scaled) { return scaled < 0 ? 0 : static_cast<long>(std::floor(scaled)) + 1; }

cli::Table cmd_gcurve(const RunConfig& c) {
  const double g = couplings(c).front();
  const auto es = parse_range(c.e_range, "--e-range");
  const atpqrm_g_options opt = g_options_of(c);
  struct Point {
    bool ok = false;
    atpqrm_g_result plus{}, minus{};
  };
  auto pts = parallel_map<Point>(es.size(), c.threads, [&](std::size_t i) {
    Point p;
    atpqrm_params pp = params_of(c, g);
    pp.parity = 1;
    atpqrm_status s = atpqrm_eval_g(&pp, es[i], &opt, &p.plus);
    if (s == ATPQRM_POLE_PROXIMITY) return p;
    check(s, "G+");
    pp.parity = -1;
    check(atpqrm_eval_g(&pp, es[i], &opt, &p.minus), "G-");
    p.ok = true;
    return p;
  });
  cli::Table t;
  t.columns = {"E", "G_plus", "G_minus", "nearest_pole_distance", "converged_plus", "converged_minus", "truncation"};
  long skipped = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (!pts[i].ok) {
      ++skipped;
      continue;
    }
    const auto& p = pts[i];
    t.rows.push_back({es[i], p.plus.value, p.minus.value, p.plus.pole_distance, static_cast<long>(p.plus.converged),
                      static_cast<long>(p.minus.converged), std::max(p.plus.truncation_used, p.minus.truncation_used)});
  }
  t.summary = {{"skipped_near_pole", std::to_string(skipped)}};
  return t;
}

cli::Table cmd_spectrum(const RunConfig& c) {
  const auto gs = couplings(c);
  const auto es = parse_range(c.e_range, "--e-range");
  const double e_lo = es.front(), e_hi = es.back();
  atpqrm_level_options lopt = atpqrm_level_options_default();
  lopt.g = g_options_of(c);
  lopt.both_parities = 1;
  struct Point {
    std::vector<cli::Row> rows;
    long unresolved = 0, crowded = 0;
  };
  auto pts = parallel_map<Point>(gs.size(), c.threads, [&](std::size_t i) {
    Point p;
    const atpqrm_params pp = params_of(c, gs[i]);
    atpqrm_levelset* ls = nullptr;
    check(atpqrm_find_levels(&pp, e_lo, e_hi, &lopt, &ls), "find_levels");
    std::unique_ptr<atpqrm_levelset, decltype(&atpqrm_levelset_free)> guard(ls, atpqrm_levelset_free);
    for (std::size_t j = 0; j < atpqrm_levelset_count(ls); ++j) {
      atpqrm_level l;
      check(atpqrm_levelset_get(ls, j, &l), "level");
      double es_ = 0;
      check(atpqrm_scaled_energy(&pp, l.energy, &es_), "scaled energy");
      p.rows.push_back({gs[i], std::string("G"), l.energy, es_, static_cast<long>(l.parity), c.q, l.pole_interval,
                        static_cast<long>(l.degenerate)});
    }
    p.unresolved = static_cast<long>(atpqrm_levelset_unresolved_count(ls));
    p.crowded = static_cast<long>(atpqrm_levelset_crowded_count(ls));
    if (c.poles) {
      for (long n = 0;; ++n) {
        double e = 0;
        check(atpqrm_pole_energy(&pp, n, &e), "pole energy");
        if (e > e_hi) break;
        if (e >= e_lo) p.rows.push_back({gs[i], std::string("pole"), e, static_cast<double>(n), 0L, c.q, n, 0L});
      }
    }
    if (c.ed_overlay) {
      const std::size_t dim = c.dim > 0 ? static_cast<std::size_t>(c.dim) : 2000;
      std::size_t k = std::min<std::size_t>(64, 2 * dim);
      for (;;) {
        atpqrm_ed* ed = nullptr;
        check(atpqrm_ed_run(&pp, dim, k, 0, &ed), "ED");
        std::unique_ptr<atpqrm_ed, decltype(&atpqrm_ed_free)> eg(ed, atpqrm_ed_free);
        double top = 0;
        check(atpqrm_ed_eigenvalue(ed, k - 1, &top, nullptr), "ED level");
        if (top <= e_hi && k < 2 * dim) {
          k = std::min(2 * k, 2 * dim);
          continue;
        }
        for (std::size_t j = 0; j < k; ++j) {
          double e = 0;
          int par = 0;
          check(atpqrm_ed_eigenvalue(ed, j, &e, &par), "ED level");
          if (e < e_lo || e > e_hi) continue;
          double es_ = 0;
          check(atpqrm_scaled_energy(&pp, e, &es_), "scaled energy");
          p.rows.push_back({gs[i], std::string("ED"), e, es_, static_cast<long>(par), c.q, pole_interval_of(es_), 0L});
        }
        break;
      }
    }
    return p;
  });
  cli::Table t;
  t.columns = {"g", "source", "E", "E_scaled", "parity", "q", "pole_interval", "degenerate"};
  long unresolved = 0, crowded = 0;
  for (auto& p : pts) {
    for (auto& r : p.rows) t.rows.push_back(std::move(r));
    unresolved += p.unresolved;
    crowded += p.crowded;
  }
  t.summary = {{"unresolved_intervals", std::to_string(unresolved)}, {"crowded_intervals", std::to_string(crowded)}};
  return t;
}

cli::Table cmd_degenerate(const RunConfig& c) {
  const auto ds = splittings(c);
  if (c.n_max < 0) throw UsageError("--n-max must be >= 0");
  const std::size_t per = static_cast<std::size_t>(c.n_max + 1);
  const double gc = atpqrm_collapse_coupling(c.r);
  auto rows = parallel_map<cli::Row>(ds.size() * per, c.threads, [&](std::size_t i) {
    const double d = ds[i / per];
    const long n = static_cast<long>(i % per);
    size_t count = 0;
    atpqrm_status s = atpqrm_find_degenerate_points(d, c.r, c.q, n, 1e-6 * gc, gc * (1.0 - 1e-9), nullptr, 0, &count);
    if (s != ATPQRM_OK && s != ATPQRM_BUFFER_TOO_SMALL) throw ApiError(s, "degenerate points");
    double gmax = kNaN;
    s = atpqrm_last_crossing(d, c.r, c.q, n, &gmax);
    if (s != ATPQRM_OK && s != ATPQRM_NO_CROSSING) throw ApiError(s, "last crossing");
    return cli::Row{d, c.q, n, s == ATPQRM_OK ? gmax : kNaN, static_cast<long>(count),
                    std::string(s == ATPQRM_OK ? "ok" : "no_crossing")};
  });
  cli::Table t;
  t.columns = {"delta", "q", "n", "g_max", "crossings", "status"};
  t.rows = std::move(rows);
  t.summary = {{"g_c", cli::format_double(gc)},
               {"critical_splitting", cli::format_double(atpqrm_critical_splitting(c.q, c.r))}};
  return t;
}

cli::Table cmd_exceptional(const RunConfig& c) {
  const auto xs = parse_range(c.x_range, "--x-range");
  if (xs.front() <= 0.0) throw UsageError("--x-range must start above 0");
  auto ladder = parse_ladder(c.trunc());
  if (ladder.empty()) ladder = {100000, 1000000};
  const int extended = c.precision == "extended";
  const double gc = atpqrm_collapse_coupling(c.r);
  const atpqrm_params pp = params_of(c, 0.0);

  // Split the grid into chunks that share their end points, so every grid
  // interval (and any zero inside it) belongs to exactly one chunk.
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(c.threads, (xs.size() - 1) / 8));
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t j = 0; j < chunks; ++j) {
    const std::size_t a = (xs.size() - 1) * j / chunks;
    const std::size_t b = (xs.size() - 1) * (j + 1) / chunks;
    spans.emplace_back(a, b + 1);
  }
  struct Zero {
    double x, g;
    int converged;
  };
  struct Part {
    std::vector<std::vector<double>> values;
    std::vector<std::vector<int>> conv;
    std::vector<std::vector<Zero>> zeros;
    int floor = 0;
  };
  auto parts = parallel_map<Part>(spans.size(), c.threads, [&](std::size_t j) {
    const auto [a, b] = spans[j];
    atpqrm_exceptional_scan* sc = nullptr;
    check(atpqrm_exceptional_scan_run(&pp, c.m, xs.data() + a, b - a, ladder.data(), ladder.size(), extended, &sc),
          "exceptional scan");
    std::unique_ptr<atpqrm_exceptional_scan, decltype(&atpqrm_exceptional_scan_free)> guard(
        sc, atpqrm_exceptional_scan_free);
    Part p;
    p.floor = atpqrm_exceptional_scan_precision_floor(sc);
    for (std::size_t t = 0; t < ladder.size(); ++t) {
      std::vector<double> v(b - a);
      std::vector<int> cv(b - a);
      check(atpqrm_exceptional_scan_values(sc, t, v.data(), cv.data(), b - a), "scan values");
      std::vector<Zero> z;
      for (std::size_t i = 0; i < atpqrm_exceptional_scan_zero_count(sc, t); ++i) {
        Zero zz{};
        check(atpqrm_exceptional_scan_zero(sc, t, i, &zz.x, &zz.g, &zz.converged), "scan zero");
        z.push_back(zz);
      }
      p.values.push_back(std::move(v));
      p.conv.push_back(std::move(cv));
      p.zeros.push_back(std::move(z));
    }
    return p;
  });

  cli::Table t;
  t.columns = {"kind", "truncation", "x", "g", "G", "converged", "beyond_precision_floor"};
  int floor = 0;
  for (const auto& p : parts) floor |= p.floor;
  const bool standard = !extended;
  for (std::size_t tr = 0; tr < ladder.size(); ++tr) {
    std::vector<Zero> zeros;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto [a, b] = spans[j];
      for (std::size_t i = (j == 0 ? 0 : 1); i < b - a; ++i) {
        const double x = xs[a + i];
        t.rows.push_back({std::string("value"), ladder[tr], x, gc * -std::expm1(-x * std::log(10.0)),
                          parts[j].values[tr][i], static_cast<long>(parts[j].conv[tr][i]),
                          static_cast<long>(standard && x > 15.0)});
      }
      zeros.insert(zeros.end(), parts[j].zeros[tr].begin(), parts[j].zeros[tr].end());
    }
    long converged = 0;
    for (const Zero& z : zeros) {
      converged += z.converged;
      t.rows.push_back({std::string("zero"), ladder[tr], z.x, z.g, 0.0, static_cast<long>(z.converged),
                        static_cast<long>(standard && z.x > 15.0)});
    }
    const std::string key = "N=" + std::to_string(ladder[tr]);
    t.summary.push_back({key + " zeros", std::to_string(zeros.size())});
    t.summary.push_back({key + " converged_zeros", std::to_string(converged)});
    if (tr + 1 == ladder.size()) {
      std::vector<double> gz;
      for (const Zero& z : zeros)
        if (z.converged) gz.push_back(z.g);
      atpqrm_spacing_fit fit{};
      if (gz.size() >= 3 && atpqrm_fit_exponential_spacing(gz.data(), gz.size(), gc, 1, &fit, nullptr) == ATPQRM_OK) {
        t.summary.push_back({"fit mu", cli::format_double(fit.mu)});
        t.summary.push_back({"fit mu0", cli::format_double(fit.mu0)});
        t.summary.push_back({"fit max_residual_over_spacing", cli::format_double(fit.max_abs_residual / fit.mean_spacing)});
      }
    }
  }
  t.summary.push_back({"precision_floor", floor ? "true" : "false"});
  return t;
}

const char* region_name(atpqrm_region r) {
  switch (r) {
    case ATPQRM_REGION_A: return "A";
    case ATPQRM_REGION_B: return "B";
    case ATPQRM_REGION_C: return "C";
    default: return "boundary";
  }
}

const char* class_name(atpqrm_count_class c) {
  switch (c) {
    case ATPQRM_COUNT_NONE: return "none";
    case ATPQRM_COUNT_FINITE: return "finite";
    default: return "infinite";
  }
}

atpqrm_collapse_options collapse_options_of(const RunConfig& c) {
  atpqrm_collapse_options o = atpqrm_collapse_options_default();
  if (!(c.L > 0 && c.h > 0 && c.k_states > 0)) throw UsageError("--L, --spacing and --k-states must be positive");
  o.L = c.L;
  o.h = c.h;
  o.k_states = static_cast<size_t>(c.k_states);
  o.L_max = std::max(o.L_max, c.L);
  return o;
}

cli::Table cmd_collapse_wavefunction(const RunConfig& c) {
  const atpqrm_collapse_options o = collapse_options_of(c);
  atpqrm_bound_states* bs = nullptr;
  check(atpqrm_bound_states_solve(c.delta, c.r, &o, &bs), "bound states");
  std::unique_ptr<atpqrm_bound_states, decltype(&atpqrm_bound_states_free)> guard(bs, atpqrm_bound_states_free);
  const auto idx = static_cast<std::size_t>(c.wavefunction);
  if (idx >= atpqrm_bound_states_count(bs))
    throw UsageError("state " + std::to_string(idx) + " not found (" + std::to_string(atpqrm_bound_states_count(bs)) +
                     " resolved)");
  atpqrm_bound_state st;
  check(atpqrm_bound_states_get(bs, idx, &st), "bound state");
  std::vector<double> psi(st.points);
  check(atpqrm_bound_states_wavefunction(bs, idx, psi.data(), psi.size()), "wavefunction");
  cli::Table t;
  t.columns = {"x", "psi2"};
  for (std::size_t i = 0; i < psi.size(); ++i) t.rows.push_back({static_cast<double>(i) * st.h, psi[i]});
  t.summary = {{"kappa4", cli::format_double(st.kappa4)},
               {"energy", cli::format_double(st.energy)},
               {"parity", std::to_string(st.parity)}};
  return t;
}

cli::Table cmd_collapse(const RunConfig& c) {
  if (!(c.r > 0)) throw UsageError("collapse needs r > 0");
  if (c.wavefunction >= 0) return cmd_collapse_wavefunction(c);
  const auto ds = splittings(c);
  const atpqrm_collapse_options o = collapse_options_of(c);
  auto blocks = parallel_map<std::vector<cli::Row>>(ds.size(), c.threads, [&](std::size_t i) {
    const double d = ds[i];
    atpqrm_tail tail;
    check(atpqrm_tail_coefficients(d, c.r, 0.0, &tail), "tail");
    double i2 = 0, i2err = 0;
    check(atpqrm_brownstein_i2(d, c.r, 0.0, &i2, &i2err), "I2");
    atpqrm_faddeev f;
    check(atpqrm_faddeev_i1(d, c.r, 0.0, 1e6, &f), "I1");
    atpqrm_bound_states* bs = nullptr;
    check(atpqrm_bound_states_solve(d, c.r, &o, &bs), "bound states");
    std::unique_ptr<atpqrm_bound_states, decltype(&atpqrm_bound_states_free)> guard(bs, atpqrm_bound_states_free);
    atpqrm_bound_diagnostics dg;
    check(atpqrm_bound_states_diagnostics(bs, &dg), "diagnostics");
    const cli::Row head{d,
                        std::string(region_name(tail.region)),
                        i2,
                        i2err,
                        std::string(f.divergent ? "divergent" : "finite"),
                        f.divergent ? kNaN : f.value,
                        std::string(class_name(tail.expected))};
    auto row = [&](long idx, double k4, double e, long par, long nondeg, std::string bound) {
      cli::Row r = head;
      for (cli::Cell cell : cli::Row{idx, k4, e, par, nondeg, bound, static_cast<long>(dg.unresolved),
                                      dg.lowest_eigenvalue, dg.noise_floor, dg.L_used})
        r.push_back(std::move(cell));
      return r;
    };
    std::vector<cli::Row> rows;
    const std::size_t n = atpqrm_bound_states_count(bs);
    for (std::size_t j = 0; j < n; ++j) {
      atpqrm_bound_state st;
      check(atpqrm_bound_states_get(bs, j, &st), "bound state");
      atpqrm_nondegeneracy nd;
      check(atpqrm_bound_states_nondegeneracy(bs, j, &nd), "nondegeneracy");
      // The bound is only claimed for regions A and C.
      std::string bound = "n/a";
      if (tail.region == ATPQRM_REGION_A || tail.region == ATPQRM_REGION_C) {
        int ok = 0;
        check(atpqrm_threshold_bound(st.kappa4, d, c.r, &ok, nullptr), "threshold bound");
        bound = ok ? "yes" : "no";
      }
      rows.push_back(row(static_cast<long>(j), st.kappa4, st.energy, st.parity, nd.nondegenerate, bound));
    }
    if (n == 0) rows.push_back(row(-1, kNaN, kNaN, 0, 0, "n/a"));
    return rows;
  });
  cli::Table t;
  t.columns = {"delta",  "region",    "I2",        "I2_error",  "I1",          "I1_value",
               "expected_count", "state", "kappa4", "energy", "parity", "nondegenerate",
               "threshold_bound", "unresolved", "lowest_eigenvalue", "noise_floor", "L_used"};
  for (auto& b : blocks)
    for (auto& r : b) t.rows.push_back(std::move(r));
  t.summary = {{"alpha", cli::format_double(4 * c.r / ((1 + c.r) * (1 + c.r)))},
               {"critical_splitting_1/4", cli::format_double(atpqrm_critical_splitting(0.25, c.r))},
               {"critical_splitting_3/4", cli::format_double(atpqrm_critical_splitting(0.75, c.r))}};
  return t;
}

cli::Table cmd_ed(const RunConfig& c) {
  const auto gs = couplings(c);
  if (c.k < 1) throw UsageError("--k must be >= 1");
  const auto k = static_cast<std::size_t>(c.k);
  auto blocks = parallel_map<std::vector<cli::Row>>(gs.size(), c.threads, [&](std::size_t i) {
    const atpqrm_params pp = params_of(c, gs[i]);
    atpqrm_ed* ed = nullptr;
    if (c.dim > 0)
      check(atpqrm_ed_run(&pp, static_cast<std::size_t>(c.dim), k, 0, &ed), "ED");
    else
      check(atpqrm_ed_run_converged(&pp, k, 2000, 1e-8, 64000, &ed), "ED");
    std::unique_ptr<atpqrm_ed, decltype(&atpqrm_ed_free)> guard(ed, atpqrm_ed_free);
    std::vector<cli::Row> rows;
    for (std::size_t j = 0; j < atpqrm_ed_count(ed); ++j) {
      double e = 0, es = kNaN;
      int par = 0;
      check(atpqrm_ed_eigenvalue(ed, j, &e, &par), "ED level");
      check(atpqrm_scaled_energy(&pp, e, &es), "scaled energy");
      rows.push_back({gs[i], static_cast<long>(j), e, es, static_cast<long>(par), static_cast<long>(atpqrm_ed_dim(ed)),
                      atpqrm_ed_truncation_shift(ed), atpqrm_ed_reliable_below_g(ed)});
    }
    return rows;
  });
  cli::Table t;
  t.columns = {"g", "index", "E", "E_scaled", "parity", "dim", "truncation_shift", "reliable_below_g"};
  for (auto& b : blocks)
    for (auto& r : b) t.rows.push_back(std::move(r));
  return t;
}

void add_options(CLI::App& app, RunConfig& c) {
  app.add_option("--delta", c.delta, "qubit splitting")->capture_default_str();
  app.add_option("--r", c.r, "anisotropy ratio")->capture_default_str();
  app.add_option("--g", c.g, "coupling")->capture_default_str();
  app.add_option("--g-range", c.g_range, "coupling sweep lo:hi:n");
  app.add_option("--q", c.q, "Bargmann index")->check(CLI::IsMember({0.25, 0.75}))->capture_default_str();
  app.add_option("--parity", c.parity, "parity +1 or -1")->check(CLI::IsMember({1, -1}))->capture_default_str();
  app.add_option("--trunc", c.trunc_items, "truncation ladder, comma separated (e.g. 1e5,1e6)")->delimiter(',');
  app.add_option("--dim", c.dim, "ED dimension per spin component (0: converge from 2000)")->capture_default_str();
  app.add_option("--k", c.k, "number of ED levels")->capture_default_str();
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads over grid points")->check(CLI::PositiveNumber);
  app.add_option("--precision", c.precision, "standard or extended")
      ->check(CLI::IsMember({"standard", "extended"}))
      ->capture_default_str();
  app.add_option("--tol", c.tol, "G-function tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--e-range", c.e_range, "energy grid lo:hi:n")->capture_default_str();
  app.add_option("--delta-range", c.delta_range, "splitting sweep lo:hi:n");
  app.add_option("--x-range", c.x_range, "grid in -log10(1-g/g_c), lo:hi:n")->capture_default_str();
  app.add_option("--m", c.m, "pole line of the exceptional G-function")->check(CLI::NonNegativeNumber);
  app.add_option("--n-max", c.n_max, "largest pole line for degenerate points")->capture_default_str();
  app.add_option("--L", c.L, "collapse half-domain")->capture_default_str();
  app.add_option("--spacing", c.h, "collapse grid spacing h")->capture_default_str();
  app.add_option("--k-states", c.k_states, "collapse states per parity sector")->capture_default_str();
  app.add_option("--wavefunction", c.wavefunction, "dump psi2 of this collapse state");
  app.add_flag("--ed-overlay", c.ed_overlay, "spectrum: add ED levels");
  app.add_flag("--poles", c.poles, "spectrum: add pole lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum, exceptional points and collapse-point bound states of the anisotropic two-photon Rabi model"};
  app.set_version_flag("--version", std::string(atpqrm_version()));
  app.set_config("--config", "", "flat key=value file; command-line flags override it");
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  add_options(app, cfg);
  for (const char* name : {"gcurve", "spectrum", "degenerate", "exceptional", "collapse", "ed"})
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });
  app.get_subcommand("gcurve")->description("G+ and G- over an energy grid");
  app.get_subcommand("spectrum")->description("levels from G-function zeros over a coupling sweep");
  app.get_subcommand("degenerate")->description("last crossing points g_max on pole lines 0..n-max");
  app.get_subcommand("exceptional")->description("zeros of the exceptional G-function near g_c");
  app.get_subcommand("collapse")->description("bound states and criteria at g = g_c");
  app.get_subcommand("ed")->description("exact diagonalization in the Fock basis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help and version exit 0, everything else is usage
  }

  try {
    cli::Table table;
    if (cfg.command == "gcurve")
      table = cmd_gcurve(cfg);
    else if (cfg.command == "spectrum")
      table = cmd_spectrum(cfg);
    else if (cfg.command == "degenerate")
      table = cmd_degenerate(cfg);
    else if (cfg.command == "exceptional")
      table = cmd_exceptional(cfg);
    else if (cfg.command == "collapse")
      table = cmd_collapse(cfg);
    else
      table = cmd_ed(cfg);

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) throw UsageError("cannot open " + cfg.out);
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    if (cfg.format == "json")
      table.write_json(os, cfg.echo());
    else
      table.write_csv(os, cfg.echo());
    os.flush();
    if (!os) throw std::runtime_error("write failed");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
