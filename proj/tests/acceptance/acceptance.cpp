// Copyright 2026 The scramblesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run all eleven criteria
//   acceptance --criterion 7   run selected criteria (repeatable)
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "scramblesim/metrics.hpp"
#include "scramblesim/sweep.hpp"
#include "support/random_states.hpp"
#include "support/statevector_oracle.hpp"

namespace {

using namespace scramblesim;

constexpr auto kScr = EncodingKind::Scrambling;
constexpr auto kSwap = EncodingKind::Swap;
constexpr double kDt = 0.01;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Memoized average_over_inputs; several criteria share grid points.
class Evaluator {
 public:
  const MetricsRecord& at(EncodingKind kind, double alpha, double gamma, MeasuredPair pair = {}, double dt = kDt) {
    const auto key = std::make_tuple(kind, std::lround(alpha * 1e9), std::lround(gamma * 1e9), pair.first,
                                     pair.second, std::lround(dt * 1e9));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    AverageConfig cfg;
    cfg.run.evolution.dt = dt;
    cfg.run.measured = pair;
    return cache_.emplace(key, average_over_inputs(kind, alpha, gamma, cfg)).first->second;
  }

 private:
  std::map<std::tuple<EncodingKind, long, long, int, int, long>, MetricsRecord> cache_;
};

std::string name(EncodingKind k) { return std::string(to_string(k)); }

// alpha in [lo, hi] with the default sweep step of 0.02.
std::vector<double> alpha_steps(double lo, double hi) {
  const int n = static_cast<int>(std::lround((hi - lo) / 0.02));
  return Grid{lo, hi, n + 1}.values();
}

Verdict perfect_teleportation(Evaluator& ev) {
  Verdict v;
  for (auto k : {kScr, kSwap}) {
    const double f = ev.at(k, 1.0, 0.0).fidelity_avg;
    v.pass &= std::abs(f - 1.0) <= 1e-3;
    v.detail += name(k) + " F=" + fmt(f, 10) + " ";
  }
  return v;
}

Verdict random_target(Evaluator& ev) {
  Verdict v;
  double worst = 0.0;
  for (auto k : {kScr, kSwap}) {
    for (double g : {0.0, 0.03, 0.06}) worst = std::max(worst, std::abs(ev.at(k, 0.0, g).fidelity_avg - 0.5));
  }
  v.pass = worst <= 1e-3;
  v.detail = "max |F - 1/2| = " + fmt(worst);
  return v;
}

Verdict noiseless_purity(Evaluator& ev) {
  Verdict v;
  double worst = 0.0;
  for (auto k : {kScr, kSwap}) {
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) worst = std::max(worst, std::abs(ev.at(k, a, 0.0).purity_avg - 1.0));
  }
  v.pass = worst <= 1e-6;
  v.detail = "max |P - 1| = " + fmt(worst);
  return v;
}

Verdict purity_floor(Evaluator& ev) {
  const double target = 1.0 / 32.0;
  const MetricsRecord& m = ev.at(kScr, 1.0, 0.06);
  const double rel = std::abs(m.purity_avg - target) / target;
  return {rel <= 0.05, "P=" + fmt(m.purity_avg) + " target 0.03125, relative error " + fmt(rel) +
                           " (purity of mean state " + fmt(m.purity_of_mean) + ")"};
}

Verdict cut_endpoints(Evaluator& ev) {
  Verdict v;
  for (auto k : {kScr, kSwap}) {
    const double n0 = ev.at(k, 0.0, 0.0).neg_cut34;
    const double n1 = ev.at(k, 1.0, 0.0).neg_cut34;
    v.pass &= std::abs(n0 - 1.0) <= 2e-2 && std::abs(n1 - 2.0) <= 2e-2;
    v.detail += name(k) + " E(0)=" + fmt(n0) + " E(1)=" + fmt(n1) + " ";
  }
  return v;
}

Verdict entanglement_budget(Evaluator& ev) {
  Verdict v;
  for (auto k : {kScr, kSwap}) {
    const double u0 = ev.at(k, 0.0, 0.0).delta_E_U;
    const double u1 = ev.at(k, 1.0, 0.0).delta_E_U;
    const double m0 = ev.at(k, 0.0, 0.0).delta_E_M;
    v.pass &= std::abs(u0) <= 2e-2 && std::abs(u1 - 6.0) <= 2e-2 && std::abs(m0 + 1.0) <= 2e-2;
    v.detail += name(k) + " dEU(0)=" + fmt(u0) + " dEU(1)=" + fmt(u1) + " dEM(0)=" + fmt(m0) + " ";
  }
  return v;
}

Verdict two_regimes(Evaluator& ev) {
  const auto alphas = alpha_steps(0.5, 1.0);
  const auto curve = [&](double g) {
    std::vector<double> out;
    for (double a : alphas) out.push_back(ev.at(kScr, a, g).neg_cut34);
    return out;
  };
  const auto low = curve(0.02);
  const auto high = curve(0.06);
  const auto mid = curve(0.038);
  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    increasing &= low[i] > low[i - 1];
    decreasing &= high[i] < high[i - 1];
  }
  const auto [mn, mx] = std::minmax_element(mid.begin(), mid.end());
  const double spread = *mx - *mn;

  // Sign change of E(1) - E(1/2) located by bisection.
  const auto slope = [&](double g) { return ev.at(kScr, 1.0, g).neg_cut34 - ev.at(kScr, 0.5, g).neg_cut34; };
  double lo = 0.02, hi = 0.06;
  const bool bracketed = slope(lo) > 0.0 && slope(hi) < 0.0;
  if (bracketed) {
    while (hi - lo > 1e-4) {
      const double m = 0.5 * (lo + hi);
      (slope(m) > 0.0 ? lo : hi) = m;
    }
  }
  const double gamma_c = 0.5 * (lo + hi);
  Verdict v;
  v.pass = increasing && decreasing && spread < 0.1 && bracketed && gamma_c >= 0.019 && gamma_c <= 0.076;
  v.detail = std::string("increasing@0.02=") + (increasing ? "yes" : "no") +
             " decreasing@0.06=" + (decreasing ? "yes" : "no") + " spread@0.038=" + fmt(spread) +
             " gamma_c=" + (bracketed ? fmt(gamma_c, 4) : std::string("not bracketed"));
  return v;
}

Verdict swap_monotone(Evaluator& ev) {
  const auto alphas = alpha_steps(0.0, 1.0);
  double worst = 0.0;
  for (double g : {0.0, 0.038, 0.06}) {
    for (std::size_t i = 1; i < alphas.size(); ++i) {
      worst = std::max(worst, ev.at(kSwap, alphas[i - 1], g).neg_cut34 - ev.at(kSwap, alphas[i], g).neg_cut34);
    }
  }
  return {worst <= 1e-3, "largest drop per 0.02 step = " + fmt(worst)};
}

Verdict any_pair(Evaluator& ev) {
  Verdict v;
  for (MeasuredPair p : {MeasuredPair{1, 6}, MeasuredPair{2, 5}, MeasuredPair{3, 4}}) {
    const double f = ev.at(kScr, 1.0, 0.0, p).fidelity_avg;
    v.pass &= std::abs(f - 1.0) <= 1e-3;
    v.detail += "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ") F=" + fmt(f, 10) + " ";
  }
  return v;
}

// Property suite.
Verdict properties(Evaluator& ev) {
  std::vector<std::string> failures;
  std::ostringstream detail;
  std::mt19937_64 rng(20260419);

  // Five random points of the default sweep grid.
  struct Point {
    EncodingKind kind;
    double alpha, gamma;
  };
  const auto alphas = Grid{0.0, 1.0, 51}.values();
  const auto gammas = Grid{0.0, 0.06, 31}.values();
  std::vector<Point> points;
  for (int i = 0; i < 5; ++i) {
    points.push_back({rng() % 2 ? kSwap : kScr, alphas[rng() % alphas.size()], gammas[1 + rng() % (gammas.size() - 1)]});
  }

  // CPTP at every checkpoint.
  double trace_err = 0.0, min_eig = 1.0;
  for (const auto& p : points) {
    const OperatorBasisRun run(build_schedule(p.kind, p.alpha), NoiseModel{p.gamma}, EvolutionConfig{kDt});
    for (const auto& phi : InputState::pauli_eigenstates()) {
      const Trajectory t = run.trajectory(phi);
      for (const DensityMatrix* r : {&t.rho_t1, &t.rho_t2, &t.rho_t3, &t.outcome.post_state}) {
        trace_err = std::max(trace_err, std::abs(r->matrix().trace() - Complex{1.0, 0.0}));
        min_eig = std::min(min_eig, hermitian_eigenvalues(r->matrix()).front());
      }
    }
  }
  if (trace_err > 1e-12 || min_eig < -1e-8) failures.push_back("CPTP");
  detail << "trace_err=" << fmt(trace_err, 3) << " min_eig=" << fmt(min_eig, 3);

  // Kraus completeness.
  double kraus = 0.0;
  for (double g : gammas) {
    for (double dt : {kDt, kDt / 2, kDt / 4}) kraus = std::max(kraus, dephasing_kraus(g, dt).completeness_error());
  }
  if (kraus > 1e-14) failures.push_back("Kraus");
  detail << " kraus=" << fmt(kraus, 3);

  // Partial transpose is an involution.
  double involution = 0.0;
  for (int i = 0; i < 3; ++i) {
    const DensityMatrix r = testing_support::random_density(rng, 7);
    for (const QubitSubset& b : {QubitSubset::range(4, 7), QubitSubset{2, 5}, QubitSubset{7}}) {
      const ComplexMatrix once = partial_transpose(r, b);
      involution = std::max(involution, max_abs_diff(partial_transpose(once, 7, b), r.matrix()));
    }
  }
  if (involution > 0.0) failures.push_back("PT involution");
  detail << " pt_involution=" << fmt(involution, 3);

  // Trotter self-convergence.
  double worst_ratio = 0.0;
  bool trotter_ok = true;
  for (const auto& p : points) {
    const MetricsRecord& a = ev.at(p.kind, p.alpha, p.gamma, {}, kDt);
    const MetricsRecord& b = ev.at(p.kind, p.alpha, p.gamma, {}, kDt / 2);
    const MetricsRecord& c = ev.at(p.kind, p.alpha, p.gamma, {}, kDt / 4);
    const auto check = [&](double ma, double mb, double mc) {
      const double coarse = std::abs(ma - mb), fine = std::abs(mb - mc);
      trotter_ok &= coarse <= 5.0 * fine + 1e-6;
      if (fine > 1e-9) worst_ratio = std::max(worst_ratio, coarse / fine);
    };
    check(a.fidelity_avg, b.fidelity_avg, c.fidelity_avg);
    check(a.purity_avg, b.purity_avg, c.purity_avg);
    check(a.neg_cut34, b.neg_cut34, c.neg_cut34);
    check(a.delta_E_U, b.delta_E_U, c.delta_E_U);
    check(a.delta_E_M, b.delta_E_M, c.delta_E_M);
  }
  if (!trotter_ok) failures.push_back("Trotter");
  const double f1 = ev.at(kScr, 1.0, 0.03, {}, kDt).fidelity_avg;
  const double f2 = ev.at(kScr, 1.0, 0.03, {}, kDt / 2).fidelity_avg;
  detail << " trotter_ratio=" << fmt(worst_ratio, 3) << " C(scr,1,0.03)=" << fmt(std::abs(f1 - f2) / kDt, 3);

  // Noiseless Trotter evolution against the exact gate product.
  double oracle_dist = 0.0;
  for (auto k : {kScr, kSwap}) {
    for (double a : {0.0, 0.3, 0.77, 1.0}) {
      const auto& phi = InputState::pauli_eigenstates()[rng() % 6];
      const Trajectory t = run_protocol(k, a, 0.0, phi);
      const auto cp = oracle::run(k == kScr ? oracle::Circuit::Scrambling : oracle::Circuit::Swap, a, phi.vector);
      for (auto [rho, psi] : {std::pair{&t.rho_t1, &cp.t1}, std::pair{&t.rho_t2, &cp.t2}, std::pair{&t.rho_t3, &cp.t3}}) {
        oracle_dist = std::max(oracle_dist, (rho->matrix() - (*psi) * psi->adjoint()).norm());
      }
    }
  }
  if (oracle_dist > 1e-6) failures.push_back("oracle");
  detail << " oracle_frobenius=" << fmt(oracle_dist, 3);

  Verdict v;
  v.pass = failures.empty();
  v.detail = detail.str();
  for (const auto& f : failures) v.detail += " FAILED:" + f;
  return v;
}

Verdict decay(Evaluator& ev) {
  const auto gammas = Grid{0.005, 0.06, 12}.values();
  Verdict v;
  bool f_dec = true, p_dec = true, ordered = true;
  for (auto k : {kScr, kSwap}) {
    for (std::size_t i = 1; i < gammas.size(); ++i) {
      f_dec &= ev.at(k, 1.0, gammas[i]).fidelity_avg < ev.at(k, 1.0, gammas[i - 1]).fidelity_avg;
      p_dec &= ev.at(k, 1.0, gammas[i]).purity_avg < ev.at(k, 1.0, gammas[i - 1]).purity_avg;
    }
  }
  double min_gap = 1.0;
  for (double g : gammas) {
    if (g < 0.02 - 1e-12) continue;
    const double gap = ev.at(kSwap, 1.0, g).fidelity_avg - ev.at(kScr, 1.0, g).fidelity_avg;
    min_gap = std::min(min_gap, gap);
    ordered &= gap > 0.0;
  }
  v.pass = f_dec && p_dec && ordered;
  v.detail = std::string("F decreasing=") + (f_dec ? "yes" : "no") + " P decreasing=" + (p_dec ? "yes" : "no") +
             " min(F_swap - F_scr) for gamma>=0.02 = " + fmt(min_gap);
  return v;
}

struct Criterion {
  const char* title;
  std::function<Verdict(Evaluator&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"perfect teleportation at alpha=1, gamma=0", perfect_teleportation},
      {"random target at alpha=0", random_target},
      {"noiseless purity", noiseless_purity},
      {"purity floor 1/32 at alpha=1, gamma=0.06", purity_floor},
      {"cut entanglement endpoints", cut_endpoints},
      {"entanglement budget", entanglement_budget},
      {"two-regime crossover", two_regimes},
      {"SWAP monotonicity", swap_monotone},
      {"perfect-scrambler property", any_pair},
      {"property suite", properties},
      {"qualitative decay", decay},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the teleportation simulator"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number (1-11); repeatable")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) selected.push_back(i);
  }

  Evaluator ev;
  int failed = 0;
  for (int i : selected) {
    const Criterion& c = criteria()[static_cast<std::size_t>(i - 1)];
    Verdict v;
    try {
      v = c.run(ev);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", i, c.title, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
