#pragma once

// Robustness sweep over partially entangled states cos(a)|01> - sin(a)|10>:
// the state itself, its XZY / XZ assemblages and the measured box with the
// tilted-measurement angle optimized per point.

#include "losr/monotones.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace losr {

struct SweepRow {
  double alpha = 0;
  double m_state = 0, m_asm3 = 0, m_asm2 = 0, m_box = 0;
  double theta0 = 0;
  bool complete = false;
};

struct SweepOptions {
  int grid = 11;
  SolverOptions solver;
  int threads = 0;  // 0: hardware concurrency
  double theta_resolution = 1e-4;
};

// Robustness of the box obtained from |psi_alpha> with X/Z measurements for
// Alice and tilted-angle measurements for Bob.
inline double box_robustness_at(double alpha, double theta0, const SolverOptions& opts) {
  CVec psi = partially_entangled_ket(alpha);
  auto box = box_from_state(psi * psi.adjoint(), xzy_measurements(2), tilted_xz_measurements(theta0));
  MonotoneResult res = absolute_robustness(box, classical_party_free_model(box.spec), opts);
  if (!res.ok) throw std::runtime_error("box robustness solve failed");
  return res.value;
}

// Golden-section maximization of the box robustness over theta0 in (0, pi/2).
inline std::pair<double, double> optimize_box_angle(double alpha, const SweepOptions& opts) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-3, hi = M_PI / 2 - 1e-3;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = box_robustness_at(alpha, x1, opts.solver);
  double f2 = box_robustness_at(alpha, x2, opts.solver);
  while (hi - lo > opts.theta_resolution) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = box_robustness_at(alpha, x2, opts.solver);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = box_robustness_at(alpha, x1, opts.solver);
    }
  }
  double theta = 0.5 * (lo + hi);
  double value = box_robustness_at(alpha, theta, opts.solver);
  if (value < 1e-9) theta = 0.0;  // flat objective: free box for every angle
  return {value, theta};
}

inline SweepRow sweep_point(double alpha, const SweepOptions& opts) {
  SweepRow row;
  row.alpha = alpha;
  CVec psi = partially_entangled_ket(alpha);
  CMat rho = psi * psi.adjoint();

  auto state = make_state_resource(rho, 2, 2);
  MonotoneResult ms = absolute_robustness(state, ppt_free_model(state.spec), opts.solver);
  if (!ms.ok) return row;
  row.m_state = ms.value;

  auto asm3 = assemblage_from_state(rho, xzy_measurements(3));
  MonotoneResult m3 = absolute_robustness(asm3, classical_party_free_model(asm3.spec), opts.solver);
  if (!m3.ok) return row;
  row.m_asm3 = m3.value;

  auto asm2 = assemblage_from_state(rho, xzy_measurements(2));
  MonotoneResult m2 = absolute_robustness(asm2, classical_party_free_model(asm2.spec), opts.solver);
  if (!m2.ok) return row;
  row.m_asm2 = m2.value;

  auto [mb, theta] = optimize_box_angle(alpha, opts);
  row.m_box = mb;
  row.theta0 = theta;
  row.complete = true;
  return row;
}

// Grid rows ordered by alpha; points are evaluated concurrently.
inline std::vector<SweepRow> run_sweep(const SweepOptions& opts = {}) {
  if (opts.grid < 2) throw std::invalid_argument("run_sweep: grid must have at least 2 points");
  std::vector<double> alphas(opts.grid);
  for (int i = 0; i < opts.grid; ++i)
    alphas[i] = (M_PI / 4.0) * double(i) / double(opts.grid - 1);
  unsigned workers = opts.threads > 0 ? opts.threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;

  std::vector<SweepRow> rows(opts.grid);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= opts.grid) return;
      try {
        rows[i] = sweep_point(alphas[i], opts);
      } catch (const std::exception&) {
        rows[i].alpha = alphas[i];  // incomplete row, cells missing
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < workers && w + 1 < static_cast<unsigned>(opts.grid); ++w)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "alpha,m_state,m_asm3,m_asm2,m_box,theta0\n";
  for (const auto& r : rows) {
    os << r.alpha << ",";
    if (r.complete)
      os << r.m_state << "," << r.m_asm3 << "," << r.m_asm2 << "," << r.m_box << "," << r.theta0;
    else
      os << ",,,,";
    os << "\n";
  }
  return os.str();
}

inline std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "alpha,m_state,m_asm3,m_asm2,m_box,theta0")
    throw std::invalid_argument("sweep csv: bad header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    while (cells.size() < 6) cells.push_back("");
    SweepRow r;
    r.alpha = std::stod(cells[0]);
    if (!cells[1].empty()) {
      r.m_state = std::stod(cells[1]);
      r.m_asm3 = std::stod(cells[2]);
      r.m_asm2 = std::stod(cells[3]);
      r.m_box = std::stod(cells[4]);
      r.theta0 = std::stod(cells[5]);
      r.complete = true;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace losr
