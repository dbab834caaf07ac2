#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sdct/types.hpp"

namespace sdct {

using BigInt = boost::multiprecision::cpp_int;

/// Probability that a non-hospitalized infected node is asymptomatic.
double p_cond(double p_a, double p_h);

/// Intermediates of the closed-form count of RB paths.
struct RBTreeParams {
  std::size_t d_c = 3;
  std::size_t d_h = 2;
  double D = 0, t1 = 0, t2 = 0, c1 = 0, c2 = 0, lambda1 = 0, lambda2 = 0;

  static RBTreeParams from(std::size_t d_c, std::size_t d_h);
};

/// Number of root-started RB paths of length n (closed form).
double rb_path_count(unsigned n, const RBTreeParams& rb);
/// The closed form evaluated exactly, with sqrt(D^2) kept symbolic.
BigInt rb_path_count_closed_exact(unsigned n, std::size_t d_c, std::size_t d_h);
/// Same count from the red/blue recurrence, exact.
BigInt rb_path_count_recurrence(unsigned n, std::size_t d_c, std::size_t d_h);

/// Paths of length n with k nodes in single-path households, alpha = source
/// shares its household with the next path node, beta = last node shares
/// its household with the previous one.
BigInt rb_path_class_count(unsigned n, unsigned k, unsigned alpha, unsigned beta,
                           std::size_t d_c, std::size_t d_h);

/// Whether (n, k, alpha, beta) with n >= 2 can be non-empty.
bool rb_class_admissible(unsigned n, unsigned k, unsigned alpha, unsigned beta);

/// Distribution of the transmission path length, pmf[n] = P(d(s,h) = n).
/// `tail` is the probability mass cut off by truncation.
struct PathLengthDist {
  std::vector<double> pmf;
  double tail = 0.0;

  double total() const;
  double at(std::size_t n) const { return n < pmf.size() ? pmf[n] : 0.0; }

  static PathLengthDist empirical(std::span<const std::size_t> lengths);
  static PathLengthDist point(std::size_t n);
};

/// Sum over n of (1-p)^n P(n).
double ls_success(const PathLengthDist& dist, double p);

/// Lower bound on LS+ success built from the class counts and the
/// per-class bound (1-p)^((n+k-1)/2) (1+p)^((n-k+1)/2-alpha-beta).
double ls_plus_success_lb(const PathLengthDist& dist, double p, const RBTreeParams& rb);

/// The same triple sum with the d_h exponent (n+k-1)/2 in place of
/// (n-k+1)/2, kept for comparison.
double ls_plus_success_lb_as_printed(const PathLengthDist& dist, double p,
                                     const RBTreeParams& rb);

struct RETParams {
  double d_r = 5;
  double d = 4;
  double p_i = 0.1;
  double p_a = 0.5;
  double p_h = 0.2;

  void validate() const;
};

/// 1 - (1-p_i)^T_E: infection probability per coarse time step of T_E days.
double rescaled_p_i(double p_i, int T_E);

/// Expected number of nodes on level l at time t.
double ret_expected_profile(int t, int l, const RETParams& ret);
/// Expected number of nodes at time t.
double ret_expected_size(int t, const RETParams& ret);

/// Level profile c[t][l] of a deterministic exponential tree (t >= 0).
struct DETProfile {
  std::vector<std::vector<double>> rows;

  double at(int t, int l) const;
  double total(int t) const;
};

/// Path length distribution of the stopped DET. Summation stops once the
/// probability that nobody is hospitalized yet drops below 1e-9 or the
/// profile runs out.
PathLengthDist det_path_length_dist(const DETProfile& profile, double p_a, double p_h);

/// The DET formula evaluated on the expected RET profile.
PathLengthDist ret_path_length_approx(const RETParams& ret);

/// Back-of-the-envelope LS success estimate on a regular branching tree.
double boe_success(double d, double p_i, double p_a, double p_h);

}  // namespace sdct
