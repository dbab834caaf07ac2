#include "sdct/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdct {

namespace {

constexpr double kTailCut = 1e-9;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError(std::string("analytic: ") + name + " must lie in [0,1]");
  }
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// x^e with 0^0 = 1.
double power(double x, double e) { return e == 0 ? 1.0 : std::pow(x, e); }

BigInt big_pow(std::size_t base, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt big_choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace

double p_cond(double p_a, double p_h) {
  check_probability(p_a, "p_a");
  check_probability(p_h, "p_h");
  const double denom = p_a + (1.0 - p_a) * (1.0 - p_h);
  if (denom <= 0.0) {
    throw ParameterError("p_cond: undefined when every infection is hospitalized (p_a=0, p_h=1)");
  }
  return p_a / denom;
}

RBTreeParams RBTreeParams::from(std::size_t d_c, std::size_t d_h) {
  if (d_c < 1) throw ParameterError("rb: d_c must be at least 1");
  RBTreeParams rb;
  rb.d_c = d_c;
  rb.d_h = d_h;
  const double c = static_cast<double>(d_c), h = static_cast<double>(d_h);
  rb.D = std::sqrt((c - 1) * (c - 1) + 4 * c * h);
  rb.t1 = (c - 1 + rb.D) / 2;
  rb.t2 = (c - 1 - rb.D) / 2;
  if (rb.D > 0) {
    rb.c1 = 0.5 + (c + 1) / (2 * rb.D);
    rb.c2 = 0.5 - (c + 1) / (2 * rb.D);
  }
  if (d_h > 0) {
    rb.lambda1 = (c + 1 + rb.D) * (2 * h + c - 1 + rb.D) / (2 * rb.D * (c - 1 + rb.D));
    rb.lambda2 = (rb.D - c - 1) * (2 * h + c - 1 - rb.D) / (2 * rb.D * (c - 1 - rb.D));
  }
  return rb;
}

double rb_path_count(unsigned n, const RBTreeParams& rb) {
  if (n == 0) return 1.0;
  if (rb.d_h == 0) {
    // Only red nodes: the closed form degenerates (t2 = 0).
    return static_cast<double>(rb.d_c) * power(static_cast<double>(rb.d_c) - 1, n - 1);
  }
  return rb.lambda1 * std::pow(rb.t1, n) + rb.lambda2 * std::pow(rb.t2, n);
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

// a + b x with x^2 = delta.
struct Surd {
  Rational a, b;
};

Surd mul(const Surd& u, const Surd& v, const Rational& delta) {
  return {u.a * v.a + u.b * v.b * delta, u.a * v.b + u.b * v.a};
}

Surd div(const Surd& u, const Surd& v, const Rational& delta) {
  const Rational norm = v.a * v.a - v.b * v.b * delta;
  const Surd num = mul(u, Surd{v.a, -v.b}, delta);
  return {num.a / norm, num.b / norm};
}

}  // namespace

BigInt rb_path_count_closed_exact(unsigned n, std::size_t d_c, std::size_t d_h) {
  if (d_c < 1) throw ParameterError("rb: d_c must be at least 1");
  if (n == 0) return 1;
  if (d_h == 0) return BigInt(d_c) * big_pow(d_c - 1, n - 1);
  const Rational c(d_c), h(d_h);
  const Rational delta = (c - 1) * (c - 1) + 4 * c * h;
  const Surd t1{(c - 1) / 2, Rational(1, 2)};
  const Surd lambda1 = div(mul(Surd{c + 1, 1}, Surd{2 * h + c - 1, 1}, delta),
                           mul(Surd{0, 2}, Surd{c - 1, 1}, delta), delta);
  Surd term = lambda1;
  for (unsigned i = 0; i < n; ++i) term = mul(term, t1, delta);
  // lambda2 t2^n is the conjugate, so the irrational parts cancel.
  const Rational total = 2 * term.a;
  if (denominator(total) != 1) throw std::logic_error("rb: closed form is not an integer");
  return numerator(total);
}

BigInt rb_path_count_recurrence(unsigned n, std::size_t d_c, std::size_t d_h) {
  if (n == 0) return 1;
  BigInt r_prev = 1, r = d_c;  // r_0, r_1
  for (unsigned i = 2; i <= n; ++i) {
    BigInt next = BigInt(d_c - 1) * r + BigInt(d_c) * d_h * r_prev;
    r_prev = r;
    r = next;
  }
  return r + BigInt(d_h) * r_prev;  // r_n + b_n, b_n = d_h r_{n-1}
}

bool rb_class_admissible(unsigned n, unsigned k, unsigned alpha, unsigned beta) {
  if (n < 2 || alpha > 1 || beta > 1) return false;
  if ((n + k) % 2 == 0) return false;
  const int ab = static_cast<int>(alpha + beta);
  const int ki = static_cast<int>(k);
  return static_cast<int>(n) + 1 - 2 * ab >= ki && ki >= 2 - ab;
}

BigInt rb_path_class_count(unsigned n, unsigned k, unsigned alpha, unsigned beta,
                           std::size_t d_c, std::size_t d_h) {
  if (n == 0) return (k == 1 && alpha == 0 && beta == 0) ? 1 : 0;
  if (n == 1) {
    if (k == 0 && alpha == 1 && beta == 1) return d_h;
    if (k == 2 && alpha == 0 && beta == 0) return d_c;
    return 0;
  }
  if (!rb_class_admissible(n, k, alpha, beta)) return 0;
  const unsigned ab = alpha + beta;
  return big_choose((n + k - 3) / 2, k + ab - 2) * big_pow(d_h, (n - k + 1) / 2) *
         big_pow(d_c, (n - k + 3) / 2 - ab) * big_pow(d_c - 1, k + ab - 2);
}

double PathLengthDist::total() const {
  double s = 0.0;
  for (double p : pmf) s += p;
  return s;
}

PathLengthDist PathLengthDist::empirical(std::span<const std::size_t> lengths) {
  PathLengthDist d;
  if (lengths.empty()) return d;
  const auto longest = *std::max_element(lengths.begin(), lengths.end());
  d.pmf.assign(longest + 1, 0.0);
  for (auto l : lengths) d.pmf[l] += 1.0;
  for (auto& p : d.pmf) p /= static_cast<double>(lengths.size());
  return d;
}

PathLengthDist PathLengthDist::point(std::size_t n) {
  PathLengthDist d;
  d.pmf.assign(n + 1, 0.0);
  d.pmf[n] = 1.0;
  return d;
}

double ls_success(const PathLengthDist& dist, double p) {
  check_probability(p, "p");
  double s = 0.0;
  for (std::size_t n = 0; n < dist.pmf.size(); ++n) s += power(1.0 - p, n) * dist.pmf[n];
  return s;
}

namespace {

// printed_dh selects the d_h exponent (n+k-1)/2 instead of (n-k+1)/2.
double ls_plus_lb_impl(const PathLengthDist& dist, double p, const RBTreeParams& rb,
                       bool printed_dh) {
  check_probability(p, "p");
  double s = dist.at(0) + (1.0 - p) * dist.at(1);
  const double dc = static_cast<double>(rb.d_c), dh = static_cast<double>(rb.d_h);
  for (unsigned n = 2; n < dist.pmf.size(); ++n) {
    if (dist.pmf[n] == 0.0) continue;
    const double paths = rb_path_count(n, rb);
    double inner = 0.0;
    for (unsigned alpha = 0; alpha <= 1; ++alpha) {
      for (unsigned beta = 0; beta <= 1; ++beta) {
        for (unsigned k = 0; k <= n + 1; ++k) {
          if (!rb_class_admissible(n, k, alpha, beta)) continue;
          const double ab = alpha + beta, nd = n, kd = k;
          const double multi = (nd - kd + 1) / 2.0;
          const double dh_exp = printed_dh ? (nd + kd - 1) / 2.0 : multi;
          const double count = std::exp(log_choose((nd + kd - 3) / 2.0, kd - 2 + ab)) *
                               power(dh, dh_exp) * power(dc, multi + 1 - ab) *
                               power(dc - 1, kd + ab - 2);
          const double bound = power(1.0 - p, (nd + kd - 1) / 2.0) * power(1.0 + p, multi - ab);
          inner += count * bound;
        }
      }
    }
    s += inner / paths * dist.pmf[n];
  }
  return s;
}

}  // namespace

double ls_plus_success_lb(const PathLengthDist& dist, double p, const RBTreeParams& rb) {
  return ls_plus_lb_impl(dist, p, rb, false);
}

double ls_plus_success_lb_as_printed(const PathLengthDist& dist, double p,
                                     const RBTreeParams& rb) {
  return ls_plus_lb_impl(dist, p, rb, true);
}

void RETParams::validate() const {
  if (d_r < 1 || d < 1) throw ParameterError("ret: degrees must be at least 1");
  check_probability(p_i, "p_i");
  check_probability(p_a, "p_a");
  check_probability(p_h, "p_h");
}

double rescaled_p_i(double p_i, int T_E) {
  check_probability(p_i, "p_i");
  return 1.0 - std::pow(1.0 - p_i, T_E);
}

double ret_expected_profile(int t, int l, const RETParams& ret) {
  ret.validate();
  if (l == 0) return t >= 0 ? 1.0 : 0.0;
  if (l < 0 || l > t) return 0.0;
  const double p = ret.p_i;
  if (p == 0.0) return 0.0;
  if (p == 1.0) {
    // Only the m = l-1 term survives.
    return ret.d_r * std::pow(ret.d, l - 1);
  }
  double s = 0.0;
  const double log_dp = std::log(ret.d * p), log_q = std::log1p(-p);
  for (int m = l - 1; m <= t - 1; ++m) {
    s += std::exp(log_choose(m, l - 1) + (m - l + 1) * log_q + (l - 1) * log_dp);
  }
  return ret.d_r * p * s;
}

double ret_expected_size(int t, const RETParams& ret) {
  ret.validate();
  if (t <= 0) return t == 0 ? 1.0 : 0.0;
  const double p = ret.p_i;
  if (ret.d == 1.0) return 1.0 + ret.d_r * p * t;
  const double rho = 1.0 - p + ret.d * p;
  return 1.0 + ret.d_r * (std::pow(rho, t) - 1.0) / (ret.d - 1.0);
}

double DETProfile::at(int t, int l) const {
  if (t < 0 || l < 0 || static_cast<std::size_t>(t) >= rows.size()) return 0.0;
  const auto& row = rows[static_cast<std::size_t>(t)];
  return static_cast<std::size_t>(l) < row.size() ? row[static_cast<std::size_t>(l)] : 0.0;
}

double DETProfile::total(int t) const {
  if (t < 0 || static_cast<std::size_t>(t) >= rows.size()) return 0.0;
  double s = 0.0;
  for (double c : rows[static_cast<std::size_t>(t)]) s += c;
  return s;
}

namespace {

// One term of the stopped-DET sum for day t given the level counts.
void add_det_day(PathLengthDist& out, const std::vector<double>& prev,
                 const std::vector<double>& cur, double c_prev, double c_cur, double q) {
  const double grown = c_cur - c_prev;
  if (grown <= 0.0) return;
  const double weight = std::pow(q, c_prev) * (1.0 - std::pow(q, grown));
  if (out.pmf.size() < cur.size()) out.pmf.resize(cur.size(), 0.0);
  for (std::size_t l = 0; l < cur.size(); ++l) {
    const double before = l < prev.size() ? prev[l] : 0.0;
    out.pmf[l] += (cur[l] - before) / grown * weight;
  }
}

}  // namespace

PathLengthDist det_path_length_dist(const DETProfile& profile, double p_a, double p_h) {
  check_probability(p_a, "p_a");
  check_probability(p_h, "p_h");
  const double q = 1.0 - (1.0 - p_a) * p_h;
  PathLengthDist out;
  std::vector<double> prev;
  double c_prev = 0.0;
  for (std::size_t t = 0; t < profile.rows.size(); ++t) {
    if (std::pow(q, c_prev) < kTailCut) break;
    const double c_cur = profile.total(static_cast<int>(t));
    add_det_day(out, prev, profile.rows[t], c_prev, c_cur, q);
    prev = profile.rows[t];
    c_prev = c_cur;
  }
  out.tail = std::pow(q, c_prev);
  return out;
}

PathLengthDist ret_path_length_approx(const RETParams& ret) {
  ret.validate();
  const double q = 1.0 - (1.0 - ret.p_a) * ret.p_h;
  const double p = ret.p_i;
  PathLengthDist out;
  std::vector<double> prev, cur;
  double c_prev = 0.0;
  // a_{t,l} accumulates one binomial term per day.
  for (int t = 0; t < 100000; ++t) {
    if (std::pow(q, c_prev) < kTailCut) break;
    cur = prev;
    cur.resize(static_cast<std::size_t>(t) + 1, 0.0);
    cur[0] = 1.0;
    for (int l = 1; l <= t; ++l) {
      const double term =
          p == 1.0 ? (t - 1 == l - 1 ? std::pow(ret.d, l - 1) : 0.0)
                   : std::exp(log_choose(t - 1, l - 1) + (t - l) * std::log1p(-p) +
                              (l - 1) * std::log(ret.d * p));
      cur[static_cast<std::size_t>(l)] += ret.d_r * p * term;
    }
    const double c_cur = ret_expected_size(t, ret);
    add_det_day(out, prev, cur, c_prev, c_cur, q);
    prev.swap(cur);
    c_prev = c_cur;
    if (p == 0.0) break;
  }
  out.tail = std::pow(q, c_prev);
  return out;
}

double boe_success(double d, double p_i, double p_a, double p_h) {
  check_probability(p_i, "p_i");
  check_probability(p_a, "p_a");
  check_probability(p_h, "p_h");
  if (d < 0) throw ParameterError("boe: d must be nonnegative");
  if (p_a == 1.0) return 0.0;
  const double q = d * p_i / (1.0 + d * p_i);
  const double base = (1.0 - p_a) * q + 1.0 - q;
  const double hosp = (1.0 - p_a) * p_h;
  double tail;
  if (hosp == 0.0 || d * p_i == 0.0) {
    tail = base < 1.0 ? 0.0 : 1.0;  // the exponent diverges
  } else {
    tail = std::pow(base, std::log1p(1.0 / hosp) / std::log1p(d * p_i));
  }
  return (1.0 - p_a) * (p_h + (1.0 - p_h) * tail);
}

}  // namespace sdct
