#pragma once

#include <cstdlib>
#include <vector>

#include "salami/numeric.hpp"

namespace salami {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpScalar {
  static bool is_zero(const T& v) { return v == 0; }
  static bool is_neg(const T& v) { return v < 0; }
  static bool is_pos(const T& v) { return v > 0; }
};

template <>
struct LpScalar<double> {
  static constexpr double eps = 1e-11;
  static bool is_zero(double v) { return std::abs(v) <= eps; }
  static bool is_neg(double v) { return v < -eps; }
  static bool is_pos(double v) { return v > eps; }
};

/// Linear program over nonnegative variables. Rows are <= or == with
/// arbitrary-sign right-hand sides; the solver standardizes internally.
template <class T>
struct LpProblem {
  struct Row {
    std::vector<std::pair<int, T>> coeffs;
    bool eq = false;
    T rhs{};
  };
  int num_vars = 0;
  bool maximize = false;
  std::vector<T> objective;
  std::vector<Row> rows;

  int add_var(T obj_coeff) {
    objective.push_back(std::move(obj_coeff));
    return num_vars++;
  }
  void add_le(std::vector<std::pair<int, T>> coeffs, T rhs) {
    rows.push_back(Row{std::move(coeffs), false, std::move(rhs)});
  }
  void add_eq(std::vector<std::pair<int, T>> coeffs, T rhs) {
    rows.push_back(Row{std::move(coeffs), true, std::move(rhs)});
  }
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  T objective{};
  std::vector<T> x;
};

/// Dense two-phase primal simplex with exact pivoting when T is rational.
/// Deterministic: Dantzig rule with lowest-index tie-breaks, falling back to
/// Bland's rule after an iteration budget to rule out cycling.
template <class T>
LpSolution<T> solve_lp(const LpProblem<T>& prob) {
  using S = LpScalar<T>;
  const int m = static_cast<int>(prob.rows.size());
  const int n0 = prob.num_vars;

  // Column layout: [0,n0) originals, then one slack/surplus per inequality,
  // then artificials for rows whose slack cannot start basic.
  int n_slack = 0;
  for (const auto& row : prob.rows)
    if (!row.eq) ++n_slack;
  int n = n0 + n_slack;

  std::vector<std::vector<T>> tab(m);
  std::vector<int> basis(m, -1);
  std::vector<int> art_rows;

  {
    int slack_at = n0;
    for (int i = 0; i < m; ++i) {
      const auto& row = prob.rows[i];
      std::vector<T> dense(n, T{});
      for (const auto& [j, c] : row.coeffs) dense[j] += c;
      T rhs = row.rhs;
      int slack_col = -1;
      if (!row.eq) slack_col = slack_at++;
      bool flip = S::is_neg(rhs);
      if (flip) {
        for (auto& c : dense) c = -c;
        rhs = -rhs;
      }
      if (slack_col >= 0) dense[slack_col] = flip ? T(-1) : T(1);
      tab[i] = std::move(dense);
      tab[i].push_back(rhs);  // rhs kept at the end; artificials inserted later
      if (slack_col >= 0 && !flip)
        basis[i] = slack_col;
      else
        art_rows.push_back(i);
    }
  }

  int n_art = static_cast<int>(art_rows.size());
  int total = n + n_art;
  for (int i = 0; i < m; ++i) {
    T rhs = tab[i].back();
    tab[i].pop_back();
    tab[i].resize(total, T{});
    tab[i].push_back(rhs);
  }
  for (int k = 0; k < n_art; ++k) {
    tab[art_rows[k]][n + k] = T(1);
    basis[art_rows[k]] = n + k;
  }

  const int rhs_col = total;

  // Objective rows as reduced-cost vectors; last entry = -(objective value).
  std::vector<T> obj2(total + 1, T{});
  for (int j = 0; j < n0; ++j) obj2[j] = prob.maximize ? T(-prob.objective[j]) : prob.objective[j];
  std::vector<T> obj1(total + 1, T{});
  for (int k = 0; k < n_art; ++k) obj1[n + k] = T(1);
  for (int i : art_rows)
    for (int j = 0; j <= total; ++j) obj1[j] -= tab[i][j];

  auto pivot = [&](int r, int c) {
    T p = tab[r][c];
    for (int j = 0; j <= total; ++j) tab[r][j] /= p;
    tab[r][c] = T(1);
    for (int i = 0; i < m; ++i) {
      if (i == r || S::is_zero(tab[i][c])) continue;
      T factor = tab[i][c];
      for (int j = 0; j <= total; ++j) tab[i][j] -= factor * tab[r][j];
      tab[i][c] = T{};
    }
    for (auto* obj : {&obj1, &obj2}) {
      if (S::is_zero((*obj)[c])) continue;
      T factor = (*obj)[c];
      for (int j = 0; j <= total; ++j) (*obj)[j] -= factor * tab[r][j];
      (*obj)[c] = T{};
    }
    basis[r] = c;
  };

  auto run = [&](std::vector<T>& obj, bool allow_art) -> bool {
    long iter = 0;
    const long bland_after = 20L * (m + total) + 200;
    while (true) {
      ++iter;
      int enter = -1;
      if (iter <= bland_after) {
        for (int j = 0; j < (allow_art ? total : n); ++j)
          if (S::is_neg(obj[j]) && (enter < 0 || obj[j] < obj[enter])) enter = j;
      } else {
        for (int j = 0; j < (allow_art ? total : n); ++j)
          if (S::is_neg(obj[j])) {
            enter = j;
            break;
          }
      }
      if (enter < 0) return true;  // optimal
      int leave = -1;
      for (int i = 0; i < m; ++i) {
        if (!S::is_pos(tab[i][enter])) continue;
        if (leave < 0) {
          leave = i;
          continue;
        }
        T lhs = tab[i][rhs_col] * tab[leave][enter];
        T rhs = tab[leave][rhs_col] * tab[i][enter];
        if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  };

  LpSolution<T> sol;
  if (n_art > 0) {
    bool ok = run(obj1, true);
    T infeas = -obj1[rhs_col];
    if (!ok || !S::is_zero(infeas)) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      int c = -1;
      for (int j = 0; j < n; ++j)
        if (!S::is_zero(tab[i][j])) {
          c = j;
          break;
        }
      if (c >= 0) pivot(i, c);
      // else: redundant row; its rhs is zero and it can never be chosen.
    }
  }

  if (!run(obj2, false)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(n0, T{});
  for (int i = 0; i < m; ++i)
    if (basis[i] >= 0 && basis[i] < n0) sol.x[basis[i]] = tab[i][rhs_col];
  T value = -obj2[rhs_col];
  sol.objective = prob.maximize ? T(-value) : value;
  return sol;
}

}  // namespace salami
